#include "gimag/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "gimag/errors.hpp"

namespace gimag {

namespace {

double momentum_l1(const RealVector& v) { return split_vector(v).second.lpNorm<1>(); }

MeasureReport finish(MeasureKind kind, std::vector<MeasureTerm> terms) {
  MeasureReport r;
  r.kind = kind;
  for (const auto& t : terms) r.value += t.value;
  r.breakdown = std::move(terms);
  return r;
}

// 1 - det(nu) / (det nu11 det nu22), evaluated as 1 - det(I - M M^T) with
// M = L11^{-1} nu12 L22^{-T}, which is exactly 0 when nu12 = 0.
double covariance_term(const RealMatrix& nu) {
  const BlockSplit b = split_blocks(0.5 * (nu + nu.transpose()));
  Eigen::LLT<RealMatrix> l11(b.b11), l22(b.b22);
  if (l11.info() != Eigen::Success || l22.info() != Eigen::Success) {
    throw SingularityError("covariance diagonal block is not positive definite");
  }
  RealMatrix m = l11.matrixL().solve(b.b12);
  m = l22.matrixL().solve(m.transpose()).transpose();
  const Eigen::Index n = m.rows();
  const double ratio = (RealMatrix::Identity(n, n) - m * m.transpose()).determinant();
  return std::max(0.0, 1.0 - ratio);
}

struct Box {
  double lo, hi;
};

std::vector<Box> parameter_box(int n, const SupSearchConfig& cfg) {
  const double l = std::log(cfg.cm_eigenvalue_bound);
  const double pi = std::numbers::pi;
  std::vector<Box> box;
  for (int k = 0; k < n; ++k) box.push_back({-cfg.displacement_bound, cfg.displacement_bound});
  for (int k = 0; k < n; ++k) box.push_back({-l / 4.0, l / 4.0});
  for (int k = 0; k < n; ++k) box.push_back({0.0, l / 2.0});
  for (int k = 0; k < n * (n - 1); ++k) box.push_back({-pi, pi});
  return box;
}

RealMatrix givens_product(int n, const double* angles) {
  RealMatrix r = RealMatrix::Identity(n, n);
  int idx = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double c = std::cos(angles[idx]), s = std::sin(angles[idx]);
      ++idx;
      for (int k = 0; k < n; ++k) {
        const double a = r(k, i), b = r(k, j);
        r(k, i) = c * a - s * b;
        r(k, j) = s * a + c * b;
      }
    }
  }
  return r;
}

void check_config(const SupSearchConfig& cfg) {
  if (cfg.restarts < 1 || cfg.iterations_per_restart < 1 || !(cfg.cm_eigenvalue_bound > 1.0) ||
      !std::isfinite(cfg.cm_eigenvalue_bound) || !(cfg.displacement_bound >= 0.0) ||
      !std::isfinite(cfg.displacement_bound)) {
    throw InvalidInput("sup search: need restarts >= 1, iterations >= 1, eigenvalue bound > 1, "
                       "finite displacement bound >= 0");
  }
}

}  // namespace

double StepThreshold::operator()(double value, double scale) const {
  return value > epsilon * std::max(1.0, scale) ? 1.0 : 0.0;
}

std::string to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::is_lower_bound: return "Is_lower_bound";
    case MeasureKind::id: return "Id";
    case MeasureKind::ic: return "Ic";
    case MeasureKind::ign: return "IGn";
  }
  return "unknown";
}

MeasureReport state_measure_IGn(const GaussianState& s, StepThreshold h) {
  const double cov = covariance_term(s.covariance());
  const double disp =
      h(momentum_l1(s.displacement()), s.displacement().lpNorm<1>());
  return finish(MeasureKind::ign, {{"covariance", cov}, {"d_even", disp}});
}

MeasureReport channel_measure_Id(const GaussianChannel& c, StepThreshold h) {
  const BlockSplit t = split_blocks(c.t());
  const BlockSplit nb = split_blocks(c.n());
  const double t_scale = trace_norm(c.t());
  return finish(MeasureKind::id,
                {{"T21", h(trace_norm(t.b21), t_scale)},
                 {"T12*T22", h(trace_norm(t.b12) * trace_norm(t.b22), t_scale * t_scale)},
                 {"N12", h(trace_norm(nb.b12), trace_norm(c.n()))},
                 {"d_even", h(momentum_l1(c.d()), c.d().lpNorm<1>())}});
}

MeasureReport channel_measure_Ic(const GaussianChannel& c) {
  const BlockSplit t = split_blocks(c.t());
  const BlockSplit nb = split_blocks(c.n());
  return finish(MeasureKind::ic, {{"T21", trace_norm(t.b21)},
                                  {"T12*T22", trace_norm(t.b12) * trace_norm(t.b22)},
                                  {"N12", trace_norm(nb.b12)},
                                  {"d_even", momentum_l1(c.d())}});
}

int real_state_parameter_count(int n) {
  check_mode_count(n);
  return 3 * n + n * (n - 1);
}

GaussianState real_state_from_parameters(int n, const RealVector& params,
                                         const SupSearchConfig& cfg) {
  const int count = real_state_parameter_count(n);
  if (params.size() != count) throw InvalidInput("real state parameters: wrong length");
  const std::vector<Box> box = parameter_box(n, cfg);
  RealVector p(count);
  for (int i = 0; i < count; ++i) p(i) = std::clamp(params(i), box[i].lo, box[i].hi);

  RealVector disp = RealVector::Zero(2 * n);
  RealVector squeeze(n), thermal(n);
  for (int k = 0; k < n; ++k) {
    disp(2 * k) = p(k);
    squeeze(k) = std::exp(p(n + k));
    thermal(k) = std::exp(p(2 * n + k));
  }
  const int pairs = n * (n - 1) / 2;
  const RealMatrix r1 = givens_product(n, p.data() + 3 * n);
  const RealMatrix r2 = givens_product(n, p.data() + 3 * n + pairs);
  const RealMatrix m = r1 * squeeze.asDiagonal() * r2;
  const RealMatrix m_inv_t = r1 * squeeze.cwiseInverse().asDiagonal() * r2;
  RealMatrix v1 = m * thermal.asDiagonal() * m.transpose();
  RealMatrix v2 = m_inv_t * thermal.asDiagonal() * m_inv_t.transpose();
  v1 = 0.5 * (v1 + v1.transpose());
  v2 = 0.5 * (v2 + v2.transpose());
  const RealMatrix zero = RealMatrix::Zero(n, n);
  return GaussianState(std::move(disp), join_blocks(v1, zero, zero, v2));
}

MeasureReport channel_measure_Is(const GaussianChannel& c, const SupSearchConfig& cfg,
                                 StepThreshold h) {
  check_config(cfg);
  const int n = c.modes();
  const int count = real_state_parameter_count(n);
  const std::vector<Box> box = parameter_box(n, cfg);

  auto objective = [&](const RealVector& p) {
    try {
      return state_measure_IGn(apply_channel(c, real_state_from_parameters(n, p, cfg)), h).value;
    } catch (const SingularityError&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  double best = -std::numeric_limits<double>::infinity();
  RealVector best_p = RealVector::Zero(count);

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(seq);
    RealVector p = RealVector::Zero(count);
    if (restart > 0) {
      for (int i = 0; i < count; ++i) {
        p(i) = std::uniform_real_distribution<double>(box[i].lo, box[i].hi)(rng);
      }
    }
    double val = objective(p);
    std::vector<double> step(count);
    for (int i = 0; i < count; ++i) step[i] = 0.25 * (box[i].hi - box[i].lo);

    for (int it = 0; it < cfg.iterations_per_restart; ++it) {
      bool improved = false;
      for (int i = 0; i < count; ++i) {
        for (double sign : {1.0, -1.0}) {
          RealVector q = p;
          q(i) = std::clamp(p(i) + sign * step[i], box[i].lo, box[i].hi);
          if (q(i) == p(i)) continue;
          const double v = objective(q);
          if (v > val) {
            p = std::move(q);
            val = v;
            improved = true;
            break;
          }
        }
      }
      if (!improved) {
        bool alive = false;
        for (int i = 0; i < count; ++i) {
          step[i] *= 0.5;
          alive = alive || step[i] > 1e-9 * (box[i].hi - box[i].lo);
        }
        if (!alive) break;
      }
    }
    if (val > best) {
      best = val;
      best_p = p;
    }
  }
  if (!std::isfinite(best)) throw Error("I_s search: no valid real state evaluated");

  GaussianState witness = real_state_from_parameters(n, best_p, cfg);
  MeasureReport at = state_measure_IGn(apply_channel(c, witness), h);
  at.kind = MeasureKind::is_lower_bound;
  at.witness = std::move(witness);
  return at;
}

bool in_FO(const GaussianSuperchannel& s, double tol) {
  return superchannel_is_real(s) && std::abs(spectral_norm(s.a()) - 1.0) <= tol;
}

bool in_FO1(const GaussianSuperchannel& s, double tol) {
  if (!in_FO(s, tol)) return false;
  const SuperchannelStructure st = superchannel_structure(s);
  return st.noise_pattern && st.covariant_pattern;
}

}  // namespace gimag

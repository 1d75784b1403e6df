#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "gimag/errors.hpp"
#include "gimag/specfun.hpp"

namespace gimag {

namespace {

// 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto eval = [&](double x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw InvalidInput("integrand returned a non-finite value");
    return v;
  };
  const double fc = eval(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = eval(center - dx);
    f2[j] = eval(center + dx);
    const double sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  resk *= half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg * half));
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * std::numeric_limits<double>::epsilon())) {
    err = std::max(err, floor);
  }
  return {a, b, resk, err};
}

}  // namespace

void check_quadrature_spec(const QuadratureSpec& spec) {
  if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_subdivisions < 1 ||
      !(spec.tail_cut >= 10.0) || !std::isfinite(spec.tail_cut)) {
    throw InvalidInput("quadrature spec: tolerances must be positive, max_subdivisions >= 1, "
                       "tail_cut >= 10");
  }
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureSpec& spec) {
  check_quadrature_spec(spec);
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw InvalidInput("integrate_adaptive: need finite a < b");
  }
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  double total = first.value, error = first.error;
  heap.push(first);
  int splits = 0;
  while (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (splits >= spec.max_subdivisions) {
      throw ConvergenceError("adaptive quadrature: subdivision limit reached", total, error);
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw ConvergenceError("adaptive quadrature: interval cannot be split further", total, error);
    }
    const Segment left = gk15(f, worst.a, mid);
    const Segment right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  // Re-sum to shed accumulated update round-off.
  double value = 0.0, err = 0.0;
  std::vector<Segment> parts;
  while (!heap.empty()) {
    parts.push_back(heap.top());
    heap.pop();
  }
  std::sort(parts.begin(), parts.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  for (const Segment& s : parts) {
    value += s.value;
    err += s.error;
  }
  return {value, err, splits, 0.0};
}

QuadratureResult integrate_ohmic(const std::function<double(double)>& g, double envelope,
                                 const QuadratureSpec& spec) {
  check_quadrature_spec(spec);
  if (!(envelope >= 0.0) || !std::isfinite(envelope)) {
    throw InvalidInput("integrate_ohmic: envelope must be finite and >= 0");
  }
  QuadratureResult r =
      integrate_adaptive([&](double w) { return g(w) * std::exp(-w); }, 0.0, spec.tail_cut, spec);
  r.truncation_bound = envelope * std::exp(-spec.tail_cut);
  return r;
}

}  // namespace gimag

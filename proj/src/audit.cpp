#include "gimag/audit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "gimag/measures.hpp"
#include "gimag/sampling.hpp"

namespace gimag {

namespace {

constexpr double kMatchTolerance = 1e-9;
constexpr double kMonotoneSlack = 1e-9;

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// A trial returns nullopt on success, or the evidence of a failure.
using Trial = std::function<std::optional<Json>(std::uint64_t trial_seed)>;

struct Draw {
  std::uint64_t base;
  std::uint64_t next() { return base = splitmix(base); }
};

Json pack(std::initializer_list<std::pair<const char*, Json>> items) {
  Json j = Json::object();
  for (const auto& [k, v] : items) j[k] = v;
  return j;
}

double max_abs_diff(const GaussianChannel& a, const GaussianChannel& b) {
  return std::max({max_abs(a.t() - b.t()), max_abs(a.n() - b.n()), max_abs(a.d() - b.d())});
}

double channel_scale(const GaussianChannel& c) {
  return std::max({1.0, max_abs(c.t()), max_abs(c.n()), max_abs(c.d())});
}

ChannelClass real_class(std::uint64_t k) {
  return k % 2 == 0 ? ChannelClass::completely_real : ChannelClass::covariant_real;
}

ChannelClass any_class(std::uint64_t k) {
  switch (k % 3) {
    case 0: return ChannelClass::any;
    case 1: return ChannelClass::completely_real;
    default: return ChannelClass::covariant_real;
  }
}

SuperchannelClass real_super(std::uint64_t k) {
  return k % 2 == 0 ? SuperchannelClass::real_rows : SuperchannelClass::real_blocks;
}

Json failure(const GaussianSuperchannel* s, const GaussianChannel* c, Json detail) {
  Json j = Json::object();
  if (s) j["superchannel"] = to_json(ObjectDocument(*s));
  if (c) j["channel"] = to_json(ObjectDocument(*c));
  j["detail"] = std::move(detail);
  return j;
}


AuditCheck run_trials(const std::string& name, const AuditConfig& cfg, std::uint64_t check_id,
                      const Trial& trial) {
  AuditCheck out;
  out.name = name;
  for (int k = 0; k < cfg.trials; ++k) {
    const std::uint64_t s = mix_seed(cfg.seed, check_id, static_cast<std::uint64_t>(k));
    std::optional<Json> bad = trial(s);
    ++out.trials;
    if (bad) {
      ++out.failures;
      if (!out.counterexample) {
        (*bad)["trial"] = k;
        (*bad)["trial_seed"] = s;
        out.counterexample = std::move(*bad);
      }
    }
  }
  out.passed = out.failures == 0;
  return out;
}

// A converse trial returns true if a witness was found.
AuditCheck run_converse(const std::string& name, const AuditConfig& cfg, std::uint64_t check_id,
                        const std::function<std::pair<bool, Json>(std::uint64_t)>& trial) {
  AuditCheck out;
  out.name = name;
  int found = 0;
  for (int k = 0; k < cfg.trials; ++k) {
    const std::uint64_t s = mix_seed(cfg.seed, check_id, static_cast<std::uint64_t>(k));
    auto [ok, evidence] = trial(s);
    ++out.trials;
    if (ok) {
      ++found;
    } else {
      ++out.failures;
      if (!out.counterexample) {
        evidence["trial"] = k;
        evidence["trial_seed"] = s;
        out.counterexample = std::move(evidence);
      }
    }
  }
  out.witnesses = found;
  out.passed = static_cast<double>(found) >= cfg.converse_rate * static_cast<double>(out.trials);
  return out;
}

std::map<std::string, std::function<AuditCheck(const AuditConfig&)>> registry() {
  std::map<std::string, std::function<AuditCheck(const AuditConfig&)>> r;

  r["composition"] = [](const AuditConfig& cfg) {
    return run_trials("composition", cfg, 1, [&](std::uint64_t s) -> std::optional<Json> {
      Draw d{s};
      const auto sc = sample_random_superchannel(cfg.modes, d.next(), SuperchannelClass::any);
      const auto c = sample_random_channel(cfg.modes, d.next(), ChannelClass::any);
      const auto [first, second] = decompose_superchannel(sc);
      const GaussianChannel direct = apply_superchannel(sc, c);
      const GaussianChannel path = compose(second, compose(c, first));
      const double diff = max_abs_diff(direct, path);
      if (diff <= kMatchTolerance * channel_scale(direct)) return std::nullopt;
      return failure(&sc, &c, pack({{"max_abs_difference", diff}}));
    });
  };

  r["real_forward"] = [](const AuditConfig& cfg) {
    return run_trials("real_forward", cfg, 2, [&](std::uint64_t s) -> std::optional<Json> {
      Draw d{s};
      const auto sc = sample_random_superchannel(cfg.modes, d.next(), real_super(s));
      const auto c = sample_random_channel(cfg.modes, d.next(), real_class(s >> 1));
      if (!superchannel_is_real(sc) || !channel_realness(c).is_real) {
        return failure(&sc, &c, pack({{"reason", "sampler produced a non-real input"}}));
      }
      if (channel_realness(apply_superchannel(sc, c)).is_real) return std::nullopt;
      return failure(&sc, &c, pack({{"reason", "image of a real channel is not real"}}));
    });
  };

  r["real_converse"] = [](const AuditConfig& cfg) {
    return run_converse("real_converse", cfg, 3, [&](std::uint64_t s) -> std::pair<bool, Json> {
      Draw d{s};
      // Redraw until both sparsity alternatives fail.
      auto sc = sample_random_superchannel(cfg.modes, d.next(), SuperchannelClass::any);
      for (int tries = 0; superchannel_structure(sc).breaking_pattern ||
                          superchannel_structure(sc).covariant_pattern;
           ++tries) {
        if (tries == 100) return {false, pack({{"reason", "could not draw a non-real superchannel"}})};
        sc = sample_random_superchannel(cfg.modes, d.next(), SuperchannelClass::any);
      }
      for (int p = 0; p < cfg.converse_probes; ++p) {
        const auto c = sample_random_channel(cfg.modes, d.next(), real_class(static_cast<std::uint64_t>(p)));
        if (!channel_realness(apply_superchannel(sc, c)).is_real) return {true, Json::object()};
      }
      return {false, failure(&sc, nullptr, pack({{"reason", "no real channel with non-real image"}}))};
    });
  };

  r["breaking_forward"] = [](const AuditConfig& cfg) {
    return run_trials("breaking_forward", cfg, 4, [&](std::uint64_t s) -> std::optional<Json> {
      Draw d{s};
      const auto sc = sample_random_superchannel(cfg.modes, d.next(), SuperchannelClass::breaking);
      const auto c = sample_random_channel(cfg.modes, d.next(), ChannelClass::any);
      if (!superchannel_is_imaginarity_breaking(sc)) {
        return failure(&sc, &c, pack({{"reason", "sampler produced a non-breaking superchannel"}}));
      }
      if (channel_realness(apply_superchannel(sc, c)).is_real) return std::nullopt;
      return failure(&sc, &c, pack({{"reason", "image is not real"}}));
    });
  };

  r["breaking_converse"] = [](const AuditConfig& cfg) {
    return run_converse("breaking_converse", cfg, 5, [&](std::uint64_t s) -> std::pair<bool, Json> {
      Draw d{s};
      const SuperchannelClass cls = s % 2 == 0 ? SuperchannelClass::any : SuperchannelClass::real_blocks;
      auto sc = sample_random_superchannel(cfg.modes, d.next(), cls);
      for (int tries = 0; superchannel_is_imaginarity_breaking(sc); ++tries) {
        if (tries == 100) return {false, pack({{"reason", "could not draw a non-breaking superchannel"}})};
        sc = sample_random_superchannel(cfg.modes, d.next(), cls);
      }
      for (int p = 0; p < cfg.converse_probes; ++p) {
        const auto c = sample_random_channel(cfg.modes, d.next(), ChannelClass::any);
        if (!channel_realness(apply_superchannel(sc, c)).is_real) return {true, Json::object()};
      }
      return {false, failure(&sc, nullptr, pack({{"reason", "no channel with non-real image"}}))};
    });
  };

  r["physicality"] = [](const AuditConfig& cfg) {
    return run_trials("physicality", cfg, 6, [&](std::uint64_t s) -> std::optional<Json> {
      Draw d{s};
      const auto sc = sample_random_superchannel(cfg.modes, d.next(), SuperchannelClass::any);
      const auto c = sample_random_channel(cfg.modes, d.next(), ChannelClass::any);
      const auto st = sample_random_state(cfg.modes, d.next(), false);
      if (!validate_superchannel(sc) || !validate_channel(c) || !validate_state(st)) {
        return failure(&sc, &c, pack({{"reason", "sampler produced an invalid input"}}));
      }
      const ValidityReport out_c = check_channel(apply_superchannel(sc, c));
      const ValidityReport out_s = check_state(apply_channel(c, st));
      if (out_c.valid && out_s.valid) return std::nullopt;
      Json j = failure(&sc, &c, pack({{"channel_violations", out_c.violations},
                                      {"state_violations", out_s.violations}}));
      j["state"] = to_json(ObjectDocument(st));
      return j;
    });
  };

  r["state_realness_preserved"] = [](const AuditConfig& cfg) {
    return run_trials("state_realness_preserved", cfg, 7, [&](std::uint64_t s) -> std::optional<Json> {
      Draw d{s};
      const auto c = sample_random_channel(cfg.modes, d.next(), real_class(s));
      const auto st = sample_random_state(cfg.modes, d.next(), true);
      if (state_realness(apply_channel(c, st))) return std::nullopt;
      Json j = failure(nullptr, &c, pack({{"reason", "real channel mapped a real state to a non-real one"}}));
      j["state"] = to_json(ObjectDocument(st));
      return j;
    });
  };

  r["faithfulness"] = [](const AuditConfig& cfg) {
    return run_trials("faithfulness", cfg, 8, [&](std::uint64_t s) -> std::optional<Json> {
      Draw d{s};
      const auto c = sample_random_channel(cfg.modes, d.next(), any_class(s));
      const bool real = channel_realness(c).is_real;
      const double ic = channel_measure_Ic(c).value;
      const double id = channel_measure_Id(c).value;
      if ((ic == 0.0) == real && (id == 0.0) == real) return std::nullopt;
      return failure(nullptr, &c, pack({{"is_real", real}, {"Ic", ic}, {"Id", id}}));
    });
  };

  r["id_monotone_real"] = [](const AuditConfig& cfg) {
    return run_trials("id_monotone_real", cfg, 9, [&](std::uint64_t s) -> std::optional<Json> {
      Draw d{s};
      const auto sc = sample_random_superchannel(cfg.modes, d.next(), real_super(s));
      const auto c = sample_random_channel(cfg.modes, d.next(), any_class(s >> 1));
      const double before = channel_measure_Id(c).value;
      const double after = channel_measure_Id(apply_superchannel(sc, c)).value;
      if (after <= before) return std::nullopt;
      return failure(&sc, &c, pack({{"before", before}, {"after", after}}));
    });
  };

  r["ic_monotone_fo1"] = [](const AuditConfig& cfg) {
    return run_trials("ic_monotone_fo1", cfg, 10, [&](std::uint64_t s) -> std::optional<Json> {
      Draw d{s};
      const auto sc = sample_random_superchannel(cfg.modes, d.next(), SuperchannelClass::real_blocks,
                                                 {.unit_norm_a = true});
      const auto c = sample_random_channel(cfg.modes, d.next(), any_class(s));
      if (!in_FO1(sc)) return failure(&sc, &c, pack({{"reason", "sampler produced a non-FO1 superchannel"}}));
      const double before = channel_measure_Ic(c).value;
      const double after = channel_measure_Ic(apply_superchannel(sc, c)).value;
      if (after <= before + kMonotoneSlack) return std::nullopt;
      return failure(&sc, &c, pack({{"before", before}, {"after", after}}));
    });
  };

  r["ic_breaking_zero"] = [](const AuditConfig& cfg) {
    return run_trials("ic_breaking_zero", cfg, 11, [&](std::uint64_t s) -> std::optional<Json> {
      Draw d{s};
      const auto sc = sample_random_superchannel(cfg.modes, d.next(), SuperchannelClass::breaking);
      const auto c = sample_random_channel(cfg.modes, d.next(), ChannelClass::any);
      const double after = channel_measure_Ic(apply_superchannel(sc, c)).value;
      if (after <= kMonotoneSlack) return std::nullopt;
      return failure(&sc, &c, pack({{"after", after}}));
    });
  };

  // Per input state: I^Gn(Phi(phi)(rho)) <= I^Gn(phi(phi1(rho))), the
  // step behind the I_s bound under FO1 (phi2 is a real channel).
  r["is_chain_fo1"] = [](const AuditConfig& cfg) {
    return run_trials("is_chain_fo1", cfg, 12, [&](std::uint64_t s) -> std::optional<Json> {
      Draw d{s};
      const auto sc = sample_random_superchannel(cfg.modes, d.next(), SuperchannelClass::real_blocks,
                                                 {.unit_norm_a = true});
      const auto c = sample_random_channel(cfg.modes, d.next(), any_class(s));
      const auto st = sample_random_state(cfg.modes, d.next(), true);
      const auto [first, second] = decompose_superchannel(sc);
      const double inner = state_measure_IGn(apply_channel(c, apply_channel(first, st))).value;
      const double outer = state_measure_IGn(apply_channel(apply_superchannel(sc, c), st)).value;
      if (outer <= inner + kMonotoneSlack) return std::nullopt;
      Json j = failure(&sc, &c, pack({{"before", inner}, {"after", outer}}));
      j["state"] = to_json(ObjectDocument(st));
      return j;
    });
  };

  return r;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix(splitmix(splitmix(seed) ^ a) ^ (b * 0x9e3779b97f4a7c15ULL));
}

bool AuditReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.passed; });
}

std::vector<std::string> audit_check_names() {
  return {"composition",      "real_forward",     "real_converse",     "breaking_forward",
          "breaking_converse", "physicality",     "state_realness_preserved", "faithfulness",
          "id_monotone_real", "ic_monotone_fo1", "ic_breaking_zero",  "is_chain_fo1"};
}

AuditCheck run_audit_check(const std::string& name, const AuditConfig& cfg) {
  if (cfg.trials < 1) throw InvalidInput("audit: trials must be >= 1");
  check_mode_count(cfg.modes);
  const auto r = registry();
  auto it = r.find(name);
  if (it == r.end()) throw InvalidInput("audit: unknown check \"" + name + "\"");
  return it->second(cfg);
}

AuditReport run_audit(const AuditConfig& cfg) {
  AuditReport rep;
  rep.config = cfg;
  for (const std::string& name : audit_check_names()) rep.checks.push_back(run_audit_check(name, cfg));
  return rep;
}

Json to_json(const AuditReport& r) {
  Json j;
  j["modes"] = r.config.modes;
  j["trials"] = r.config.trials;
  j["seed"] = r.config.seed;
  j["passed"] = r.passed();
  Json checks = Json::array();
  for (const AuditCheck& c : r.checks) {
    Json e;
    e["name"] = c.name;
    e["trials"] = c.trials;
    e["failures"] = c.failures;
    if (c.witnesses) e["witnesses"] = *c.witnesses;
    e["passed"] = c.passed;
    if (c.counterexample) e["counterexample"] = *c.counterexample;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  return j;
}

}  // namespace gimag

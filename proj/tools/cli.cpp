#include "cli.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "gimag/audit.hpp"
#include "gimag/document.hpp"
#include "gimag/measures.hpp"
#include "gimag/qbm.hpp"

namespace gimag::cli {

namespace {

struct Common {
  bool json = false;
  bool timing = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_flag("--json", c.json, "Print the JSON run report");
  sub->add_flag("--timing", c.timing, "Include wall time in the report");
}

struct Input {
  std::string bytes;
  std::string digest;
};

std::optional<Input> read_file(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "error: cannot read " << path << "\n";
    return std::nullopt;
  }
  std::ostringstream s;
  s << in.rdbuf();
  Input r{s.str(), {}};
  r.digest = sha256_hex(r.bytes);
  return r;
}

class Reporter {
 public:
  Reporter(const std::vector<std::string>& args, const Common& common, std::ostream& out)
      : common_(common), out_(out), start_(std::chrono::steady_clock::now()) {
    report_["command"] = args;
  }

  Json& results() { return report_["results"]; }
  void digest(const std::string& d) { report_["input_digest"] = d; }
  void text(const std::string& line) {
    if (!common_.json) out_ << line << "\n";
  }

  int finish(int code) {
    report_["exit_code"] = code;
    if (common_.timing) {
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
      report_["wall_time_s"] = dt.count();
    }
    if (common_.json) out_ << report_.dump(2) << "\n";
    return code;
  }

 private:
  const Common& common_;
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_;
  Json report_ = Json::object();
};

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

Json breakdown_json(const MeasureReport& r) {
  Json b = Json::object();
  for (const MeasureTerm& t : r.breakdown) b[t.name] = t.value;
  return b;
}

Json violations_json(const std::vector<Violation>& vs) {
  Json arr = Json::array();
  for (const Violation& v : vs) {
    Json j;
    j["condition"] = v.condition;
    j["row"] = v.row;
    j["col"] = v.col;
    j["magnitude"] = v.magnitude;
    arr.push_back(std::move(j));
  }
  return arr;
}

ValidityReport check_any(const ObjectDocument& doc) {
  if (const auto* s = std::get_if<GaussianState>(&doc)) return check_state(*s);
  if (const auto* c = std::get_if<GaussianChannel>(&doc)) return check_channel(*c);
  return check_superchannel(std::get<GaussianSuperchannel>(doc));
}

// Loads and parses a document; on failure prints the problem and returns nullopt.
std::optional<ObjectDocument> load(const std::string& path, Reporter& rep, std::ostream& err) {
  const auto in = read_file(path, err);
  if (!in) return std::nullopt;
  rep.digest(in->digest);
  try {
    return parse_document(in->bytes);
  } catch (const DocumentError& e) {
    err << "error: " << path << ": " << e.what() << "\n";
    rep.results()["error"] = e.what();
    return std::nullopt;
  }
}

int cmd_validate(const std::string& path, Reporter& rep, std::ostream& err) {
  const auto doc = load(path, rep, err);
  if (!doc) return rep.finish(kUsage);
  const ValidityReport v = check_any(*doc);
  rep.results()["kind"] = document_kind(*doc);
  rep.results()["valid"] = v.valid;
  rep.results()["violations"] = v.violations;
  if (v.valid) {
    rep.text(document_kind(*doc) + ": valid");
    return rep.finish(kOk);
  }
  std::string names;
  for (const auto& n : v.violations) names += (names.empty() ? "" : ", ") + n;
  rep.text(document_kind(*doc) + ": invalid (" + names + ")");
  return rep.finish(kInvalid);
}

struct MeasureArgs {
  std::string which = "ic";
  SupSearchConfig search;
  double epsilon = 1e-12;
};

int cmd_measure(const std::string& path, const MeasureArgs& a, Reporter& rep, std::ostream& err) {
  const auto doc = load(path, rep, err);
  if (!doc) return rep.finish(kUsage);
  const bool state_measure = a.which == "ign";
  const bool is_state = std::holds_alternative<GaussianState>(*doc);
  const bool is_channel = std::holds_alternative<GaussianChannel>(*doc);
  if ((state_measure && !is_state) || (!state_measure && !is_channel)) {
    err << "error: measure '" << a.which << "' does not apply to a " << document_kind(*doc) << "\n";
    rep.results()["error"] = "kind mismatch";
    return rep.finish(kUsage);
  }
  const ValidityReport v = check_any(*doc);
  if (!v.valid) {
    err << "error: input is not physical (" << v.violations.front() << ")\n";
    rep.results()["valid"] = false;
    rep.results()["violations"] = v.violations;
    return rep.finish(kInvalid);
  }
  const StepThreshold h{a.epsilon};
  MeasureReport m;
  if (state_measure) {
    m = state_measure_IGn(std::get<GaussianState>(*doc), h);
  } else {
    const auto& c = std::get<GaussianChannel>(*doc);
    if (a.which == "ic") m = channel_measure_Ic(c);
    else if (a.which == "id") m = channel_measure_Id(c, h);
    else m = channel_measure_Is(c, a.search, h);
  }
  Json& r = rep.results();
  r["measure"] = to_string(m.kind);
  r["value"] = m.value;
  r["breakdown"] = breakdown_json(m);
  if (m.kind == MeasureKind::is_lower_bound) {
    r["lower_bound"] = true;
    Json s;
    s["restarts"] = a.search.restarts;
    s["iterations_per_restart"] = a.search.iterations_per_restart;
    s["cm_eigenvalue_bound"] = a.search.cm_eigenvalue_bound;
    s["displacement_bound"] = a.search.displacement_bound;
    s["seed"] = a.search.seed;
    r["search"] = std::move(s);
    if (m.witness) r["witness"] = to_json(ObjectDocument(*m.witness));
  }
  std::string line = to_string(m.kind) + " = " + fmt(m.value);
  if (m.kind == MeasureKind::is_lower_bound) line += " (lower bound)";
  rep.text(line);
  for (const MeasureTerm& t : m.breakdown) rep.text("  " + t.name + " = " + fmt(t.value));
  return rep.finish(kOk);
}

int cmd_check_super(const std::string& path, double tol, Reporter& rep, std::ostream& err) {
  const auto doc = load(path, rep, err);
  if (!doc) return rep.finish(kUsage);
  const auto* s = std::get_if<GaussianSuperchannel>(&*doc);
  if (!s) {
    err << "error: check-super needs a superchannel document, got " << document_kind(*doc) << "\n";
    rep.results()["error"] = "kind mismatch";
    return rep.finish(kUsage);
  }
  const ValidityReport v = check_superchannel(*s);
  Json& r = rep.results();
  r["valid"] = v.valid;
  if (!v.valid) {
    r["violations"] = v.violations;
    err << "error: superchannel is not physical (" << v.violations.front() << ")\n";
    return rep.finish(kInvalid);
  }
  const SuperchannelStructure st = superchannel_structure(*s, tol);
  const double norm = spectral_norm(s->a());
  r["isReal"] = st.is_real();
  r["isImaginarityBreaking"] = st.is_imaginarity_breaking();
  r["inFO"] = in_FO(*s);
  r["inFO1"] = in_FO1(*s);
  Json diag;
  diag["noise_pattern"] = st.noise_pattern;
  diag["breaking_pattern"] = st.breaking_pattern;
  diag["covariant_pattern"] = st.covariant_pattern;
  diag["A_spectral_norm"] = norm;
  r["conditions"] = std::move(diag);
  r["violations"] = violations_json(st.violations);
  auto yn = [](bool b) { return std::string(b ? "true" : "false"); };
  rep.text("real: " + yn(st.is_real()));
  rep.text("imaginarity breaking: " + yn(st.is_imaginarity_breaking()));
  rep.text("FO: " + yn(in_FO(*s)) + "  FO1: " + yn(in_FO1(*s)) + "  ||A|| = " + fmt(norm));
  rep.text("dbar/Y pattern: " + yn(st.noise_pattern) + "  A momentum rows zero: " +
           yn(st.breaking_pattern) + "  A/O block-diagonal: " + yn(st.covariant_pattern));
  for (const Violation& vi : st.violations) {
    rep.text("  " + vi.condition + " at (" + std::to_string(vi.row) +
             (vi.col ? "," + std::to_string(vi.col) : "") + "): " + fmt(vi.magnitude));
  }
  return rep.finish(kOk);
}

struct QbmArgs {
  double alpha = 0.03, x = 0.5, theta = 100.0, horizon = 60.0, step = 0.01;
  std::string regime = "high";
  std::string out;
  std::string method = "closed";
};

int cmd_qbm(const QbmArgs& a, Reporter& rep, std::ostream& err) {
  QbmConfig cfg;
  cfg.alpha = a.alpha;
  cfg.x = a.x;
  cfg.theta = a.theta;
  try {
    cfg.regime = parse_regime(a.regime);
    check_config(cfg);
    grid_size(a.horizon, a.step);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return rep.finish(kUsage);
  }
  Trajectory t;
  try {
    const CoefficientFunctions coeffs =
        a.method == "quadrature" ? quadrature_coefficients(cfg) : closed_form_coefficients(cfg);
    t = imaginarity_trajectory(QbmGrid(cfg, a.horizon, a.step, coeffs), a.horizon);
  } catch (const Error& e) {
    err << "error: QBM evaluation failed: " << e.what() << "\n";
    rep.results()["error"] = e.what();
    return rep.finish(kQbmFailure);
  }
  std::ofstream csv(a.out, std::ios::binary);
  if (!csv) {
    err << "error: cannot write " << a.out << "\n";
    return rep.finish(kUsage);
  }
  write_trajectory_csv(t, csv);
  csv.close();

  const double period = std::numbers::pi * cfg.x;
  Json& r = rep.results();
  Json c;
  c["alpha"] = cfg.alpha;
  c["x"] = cfg.x;
  c["theta"] = cfg.theta;
  c["regime"] = to_string(cfg.regime);
  c["horizon"] = a.horizon;
  c["step"] = a.step;
  c["method"] = a.method;
  r["config"] = std::move(c);
  r["csv"] = a.out;
  r["rows"] = t.rows.size();
  r["period"] = period;
  const double peak = max_ic(t, 0.0, std::min(period, a.horizon));
  r["first_period_peak"] = peak;
  rep.text("wrote " + std::to_string(t.rows.size()) + " rows to " + a.out);
  rep.text("first-period peak I_c = " + fmt(peak));

  // Last five whole periods, then ten-period windows from 0.
  Json periods = Json::array();
  const int whole = static_cast<int>(std::floor(a.horizon / period));
  for (int k = std::max(0, whole - 5); k < whole; ++k) {
    const double m = window_mean(t, k * period, period);
    periods.push_back({{"from", k * period}, {"mean", m}});
    rep.text("period [" + fmt(k * period) + ", " + fmt((k + 1) * period) + "] mean I_c = " + fmt(m));
  }
  r["period_means"] = std::move(periods);
  Json windows = Json::array();
  const double wlen = 10.0 * period;
  for (double from = 0.0; from + wlen <= a.horizon + 1e-9; from += wlen) {
    windows.push_back({{"from", from}, {"mean", window_mean(t, from, wlen)}});
  }
  r["ten_period_means"] = std::move(windows);
  return rep.finish(kOk);
}

int cmd_audit(const AuditConfig& cfg, Reporter& rep, std::ostream& err) {
  if (cfg.trials < 1) {
    err << "error: --trials must be >= 1\n";
    return rep.finish(kUsage);
  }
  AuditReport r;
  try {
    r = run_audit(cfg);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return rep.finish(kUsage);
  }
  rep.results() = to_json(r);
  for (const AuditCheck& c : r.checks) {
    std::string line = (c.passed ? "pass  " : "FAIL  ") + c.name + "  trials=" +
                       std::to_string(c.trials) + " failures=" + std::to_string(c.failures);
    if (c.witnesses) line += " witnesses=" + std::to_string(*c.witnesses);
    rep.text(line);
    if (c.counterexample && !c.passed) rep.text("  counterexample: " + c.counterexample->dump());
  }
  return rep.finish(r.passed() ? kOk : kCounterexample);
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream s;
  for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return s.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian channel imaginarity toolkit", "gimag"};
  app.require_subcommand(1);
  Common common;

  std::string path;
  double tol = kDefaultRealnessTolerance;

  auto* validate = app.add_subcommand("validate", "Check the physical constraints of a document");
  validate->add_option("path", path, "JSON document")->required();
  add_common(validate, common);

  MeasureArgs ma;
  auto* measure = app.add_subcommand("measure", "Evaluate an imaginarity measure");
  measure->add_option("path", path, "JSON document")->required();
  measure->add_option("--which", ma.which, "ic, id, is or ign")
      ->check(CLI::IsMember({"ic", "id", "is", "ign"}));
  measure->add_option("--restarts", ma.search.restarts)->check(CLI::PositiveNumber);
  measure->add_option("--iterations", ma.search.iterations_per_restart)->check(CLI::PositiveNumber);
  measure->add_option("--cm-bound", ma.search.cm_eigenvalue_bound);
  measure->add_option("--displacement-bound", ma.search.displacement_bound);
  measure->add_option("--seed", ma.search.seed);
  measure->add_option("--epsilon", ma.epsilon, "Step-function threshold")->check(CLI::NonNegativeNumber);
  add_common(measure, common);

  auto* check = app.add_subcommand("check-super", "Realness and free-operation tests of a superchannel");
  check->add_option("path", path, "JSON document")->required();
  check->add_option("--tol", tol, "Relative zero tolerance")->check(CLI::NonNegativeNumber);
  add_common(check, common);

  QbmArgs qa;
  auto* qbm = app.add_subcommand("qbm", "Imaginarity trajectory of the QBM channel");
  qbm->add_option("--alpha", qa.alpha);
  qbm->add_option("--x", qa.x);
  qbm->add_option("--theta", qa.theta);
  qbm->add_option("--regime", qa.regime)->check(CLI::IsMember({"high", "low"}));
  qbm->add_option("--horizon", qa.horizon);
  qbm->add_option("--step", qa.step);
  qbm->add_option("--out", qa.out, "CSV output path")->required();
  qbm->add_option("--method", qa.method, "closed or quadrature")
      ->check(CLI::IsMember({"closed", "quadrature"}));
  add_common(qbm, common);

  AuditConfig ac;
  auto* audit = app.add_subcommand("audit", "Randomised theorem and monotonicity audit");
  audit->add_option("--modes", ac.modes);
  audit->add_option("--trials", ac.trials);
  audit->add_option("--seed", ac.seed);
  audit->add_option("--probes", ac.converse_probes)->check(CLI::PositiveNumber);
  add_common(audit, common);

  std::vector<const char*> argv{"gimag"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  Reporter rep(args, common, out);
  if (validate->parsed()) return cmd_validate(path, rep, err);
  if (measure->parsed()) return cmd_measure(path, ma, rep, err);
  if (check->parsed()) return cmd_check_super(path, tol, rep, err);
  if (qbm->parsed()) return cmd_qbm(qa, rep, err);
  return cmd_audit(ac, rep, err);
}

}  // namespace gimag::cli

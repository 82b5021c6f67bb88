// Command-line front end: figure sweeps, distance/metric/oscillator reports,
// Monte-Carlo volumes and the property self-test.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ginfo/ginfo.hpp"

using namespace ginfo;
using json = nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kValidation = 3, kNumeric = 4 };

/// Raised for inputs that parse but describe an unphysical or inconsistent state.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string out = "-";
  std::string format;
  std::uint64_t seed = 20240611;
  int grid = 99;
  double m = 0.125, n = 0.125, theta = 0.0, eta = 0.0, hbar = 1.0;
  double m1 = 1.0, m2 = 1.0, w1 = 1.0, w2 = 2.0;
  std::string sigma1 = "1,1,0,0", sigma2 = "1,1,0,0";
  std::string transform;
  std::size_t samples = 100000;
  double kappa = 1.0;
  std::string region = "quantum";
  std::string rule = "oracle";
  int cases = 50;
};

const std::vector<std::string> kCommands = {"figure1", "figure2", "figure3", "sweep",   "distance",
                                            "metric",  "oscillator", "volume", "selftest"};

bool is_sweep(const std::string& c) { return c.rfind("figure", 0) == 0 || c == "sweep"; }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

/// Only the keys the command actually reads, after defaults are applied.
json resolved_config(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["format"] = c.format;
  j["out"] = c.out;
  if (is_sweep(c.command)) {
    if (c.command == "sweep") {
      j["m"] = c.m;
      j["n"] = c.n;
    } else {
      const auto f = figure_preset(c.command.back() - '0');
      j["m"] = f.m;
      j["n"] = f.n;
    }
    j["eta"] = c.eta;
    j["grid"] = c.grid;
  } else if (c.command == "distance") {
    j["sigma1"] = c.sigma1;
    j["sigma2"] = c.sigma2;
    j["hbar"] = c.hbar;
    if (!c.transform.empty()) j["transform"] = c.transform;
    if (c.transform == "random") j["seed"] = c.seed;
  } else if (c.command == "metric") {
    j["sigma1"] = c.sigma1;
  } else if (c.command == "oscillator") {
    j["m1"] = c.m1;
    j["m2"] = c.m2;
    j["w1"] = c.w1;
    j["w2"] = c.w2;
    j["theta"] = c.theta;
    j["eta"] = c.eta;
    j["hbar"] = c.hbar;
  } else if (c.command == "volume") {
    j["region"] = c.region;
    j["rule"] = c.rule;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["kappa"] = c.kappa;
  } else if (c.command == "selftest") {
    j["seed"] = c.seed;
    j["cases"] = c.cases;
  }
  return j;
}

std::string config_line(const json& cfg) {
  std::string s = "#";
  for (const auto& [k, v] : cfg.items()) s += " " + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
  return s;
}

// ---------------------------------------------------------------------------
// Inputs
// ---------------------------------------------------------------------------

std::optional<CanonicalTwoModeParams> parse_canonical(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      v.push_back(parse_double(tok));
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  if (v.size() != 4) return std::nullopt;
  return CanonicalTwoModeParams{v[0], v[1], v[2], v[3]};
}

/// Inline "a,b,c,d" canonical parameters or a covariance file.
CovarianceMatrix load_state(const std::string& src, double hbar, const char* label) {
  Matrix m;
  PhaseSpaceOrdering ordering = PhaseSpaceOrdering::ModeInterleaved;
  if (const auto p = parse_canonical(src)) {
    m = canonical_two_mode_matrix(*p);
  } else {
    std::ifstream f(src);
    if (!f) fail(ErrorKind::Io, std::string(label) + ": cannot open '" + src + "'");
    try {
      const auto cvm = read_cvm(f, NumericPolicy{.spd = -std::numeric_limits<double>::infinity()});
      m = cvm.matrix();
      ordering = cvm.ordering();
    } catch (const Error& e) {
      throw ValidationError(std::string(label) + ": " + e.what());
    }
  }
  if (!is_symmetric(m, default_policy.symmetry)) throw ValidationError(std::string(label) + ": SPD violated (matrix is not symmetric)");
  const double lo = min_eigenvalue_symmetric(m);
  if (!(lo > default_policy.spd))
    throw ValidationError(std::string(label) + ": SPD violated (min eigenvalue " + format_double(lo) + ")");
  const auto cvm = CovarianceMatrix::make(m, ordering);
  const auto r = rsup_check(CovarianceMatrix::make(Matrix(m / hbar), ordering), build_symplectic_form(cvm.modes(), ordering));
  if (!r.valid)
    throw ValidationError(std::string(label) + ": RSUP violated (min symplectic invariant " + format_double(r.min_invariant) +
                          " < 1)");
  return cvm;
}

Matrix load_plain_matrix(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::Io, "transform: cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    std::vector<double> r;
    while (ls >> tok) r.push_back(parse_double(tok));
    if (!r.empty()) rows.push_back(std::move(r));
  }
  Matrix s(static_cast<Index>(rows.size()), rows.empty() ? 0 : static_cast<Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw ValidationError("transform: ragged matrix");
    for (std::size_t j = 0; j < rows[i].size(); ++j) s(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return s;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

std::string run_sweep(const RunConfig& c, const json& cfg) {
  if (c.grid < 10) throw ValidationError("grid must be at least 10");
  SweepResult r;
  if (c.command == "sweep")
    r = theta_sweep(ToyModelConfig::make(c.m, c.n, 0.0, c.eta), open_unit_grid(c.grid));
  else
    r = figure_sweep(c.command.back() - '0', c.grid, c.eta);

  if (c.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      json row{{"theta", r.rows[i].theta}, {"min_invariant", r.rows[i].min_invariant}, {"margin", r.rows[i].margin}};
      for (std::size_t k = 0; k < r.crossing_rows.size(); ++k)
        if (r.crossing_rows[k] == i) row["crossing_theta"] = r.crossings[k];
      rows.push_back(row);
    }
    json out{{"config", cfg}, {"rows", rows}, {"crossings", r.crossings}};
    return out.dump(2) + "\n";
  }

  std::string s = config_line(cfg) + "\ntheta,min_invariant,margin,crossing_theta\n";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    s += format_double(r.rows[i].theta) + "," + format_double(r.rows[i].min_invariant) + "," + format_double(r.rows[i].margin) + ",";
    for (std::size_t k = 0; k < r.crossing_rows.size(); ++k)
      if (r.crossing_rows[k] == i) s += format_double(r.crossings[k]);
    s += "\n";
  }
  return s;
}

json run_distance(const RunConfig& c) {
  const auto s1 = load_state(c.sigma1, c.hbar, "sigma1");
  const auto s2 = load_state(c.sigma2, c.hbar, "sigma2");
  if (s1.modes() != s2.modes()) throw ValidationError("sigma1 and sigma2 have different mode counts");
  const auto ev = generalized_eigenvalues(s1, s2);
  json out;
  out["distance_half"] = distance_from_eigenvalues(ev, DistanceConvention::Half);
  out["distance_dimension"] = distance_from_eigenvalues(ev, DistanceConvention::HalfDimension);
  out["generalized_eigenvalues"] = ev;
  if (!c.transform.empty()) {
    const Index dim = s1.matrix().rows();
    Matrix s;
    if (c.transform == "random") {
      Rng rng(c.seed);
      s = random_invertible(dim, rng);
    } else {
      s = load_plain_matrix(c.transform);
    }
    if (s.rows() != dim || s.cols() != dim) throw ValidationError("transform must be " + std::to_string(dim) + "x" + std::to_string(dim));
    const Matrix b2 = reorder(s2.matrix(), s2.ordering(), s1.ordering());
    const double moved = fr_distance(Matrix(s * s1.matrix() * s.transpose()), Matrix(s * b2 * s.transpose()));
    const double delta = std::abs(moved - out["distance_half"].get<double>());
    out["congruence_check"] = {{"distance_after_transform", moved}, {"delta", delta}, {"passed", delta < 1e-10}};
  }
  return out;
}

json run_metric(const RunConfig& c) {
  const auto p = parse_canonical(c.sigma1);
  if (!p) throw ValidationError("sigma1 must be canonical parameters a,b,c,d");
  if (!(p->a > 0 && p->b > 0)) throw ValidationError("canonical parameters need a > 0 and b > 0");
  if (!(p->a * p->b - p->c * p->c > 0 && p->a * p->b - p->d * p->d > 0))
    throw ValidationError("state is singular (ab - c^2 or ab - d^2 not positive)");
  const auto g = fisher_metric_two_mode(*p);
  const std::array<double, 4> t{p->a, p->b, p->c, p->d};
  const auto num = fisher_metric_numeric(canonical_two_mode_family(), t, 1e-4, true);
  json out;
  out["parameters"] = g.parameter_names;
  out["metric"] = matrix_json(g.matrix);
  out["determinant"] = fisher_det_two_mode(*p);
  out["determinant_numeric"] = g.matrix.determinant();
  out["numeric_route_max_deviation"] = (num.matrix - g.matrix).cwiseAbs().maxCoeff();
  return out;
}

json run_oscillator(const RunConfig& c) {
  const OscillatorParams p{c.m1, c.m2, c.w1, c.w2, c.theta, c.eta, c.hbar};
  const auto sol = solve_ground_state(p);
  const auto verdict = separability_condition(p);
  const auto sides = frequency_condition(p);
  const auto cvm = ground_state_cvm(sol.lambda, p.hbar);
  const auto omega = build_symplectic_form(2, PhaseSpaceOrdering::ModeInterleaved);
  const auto ppt = ppt_separable(CovarianceMatrix::make(Matrix(cvm.matrix() / p.hbar), cvm.ordering()), omega, Party::B, {1, 1});
  const auto simon = simon_criterion(cvm, p.hbar);
  const auto& e = sol.hamiltonian.params;

  json out;
  out["equivalent"] = {{"mu1", e.mu1}, {"mu2", e.mu2}, {"alpha1", e.alpha1}, {"alpha2", e.alpha2},
                       {"nu1", e.nu1}, {"nu2", e.nu2}, {"omega1", e.omega1}, {"omega2", e.omega2}};
  out["spectrum"] = {{"lambda1", sol.spectrum.lambda1}, {"lambda2", sol.spectrum.lambda2},
                     {"numeric_deviation", sol.spectrum.numeric_deviation}};
  out["lambda"] = {{"L11r", sol.lambda.L11r}, {"L22r", sol.lambda.L22r}, {"L12c", sol.lambda.L12c}};
  out["route"] = to_string(sol.route);
  out["covariance"] = {{"ordering", to_string(cvm.ordering())}, {"matrix", matrix_json(cvm.matrix())}};
  out["frequency_condition"] = {{"lhs", sides.lhs}, {"rhs", sides.rhs}, {"relative_gap", sides.relative_gap}};
  out["separable"] = verdict.separable;
  out["ppt"] = {{"separable", ppt.separable}, {"margin", ppt.margin}};
  out["local_invariants"] = {{"ps", simon.ps}, {"separable", simon.separable()}};
  return out;
}

json run_volume(const RunConfig& c) {
  static const std::map<std::string, VolumeRegion> regions{
      {"quantum", VolumeRegion::Quantum}, {"separable", VolumeRegion::Separable}, {"entangled", VolumeRegion::Entangled}};
  static const std::map<std::string, MembershipRule> rules{{"oracle", MembershipRule::Oracle}, {"explicit", MembershipRule::Explicit}};
  if (c.samples < 1000) throw ValidationError("samples must be at least 1000");
  if (!(c.kappa > 0)) throw ValidationError("kappa must be positive");
  const ParameterBox box;
  const auto est = regularized_volume(box, regions.at(c.region), RegularizerConfig{c.kappa, 4}, c.samples, c.seed, rules.at(c.rule));
  json out;
  out["box"] = {{"lo", box.lo}, {"hi", box.hi}};
  out["volume"] = est.volume;
  out["std_error"] = est.std_error;
  out["samples"] = est.samples;
  out["members"] = est.members;
  out["zero_measure"] = est.zero_measure;
  return out;
}

std::pair<std::string, bool> run_selftest_cmd(const RunConfig& c, const json& cfg) {
  const auto r = run_selftest(c.seed, c.cases);
  if (c.format == "json") {
    json props = json::array();
    for (const auto& p : r.properties)
      props.push_back({{"module", p.module}, {"name", p.name}, {"cases", p.cases}, {"failures", p.failures},
                       {"skipped", p.skipped}, {"worst", p.worst}, {"tolerance", p.tolerance}, {"first_error", p.first_error}});
    json report = json::array();
    for (const auto& d : r.lambda_s_report) {
      json row{{"theta", d.theta}, {"eta", d.eta}, {"oracle_invariants", d.oracle_invariants}};
      if (d.closed_form) {
        row["closed_invariants"] = d.closed_invariants;
        row["max_relative_deviation"] = d.max_relative_deviation;
      } else {
        row["failure"] = d.failure;
      }
      report.push_back(row);
    }
    json out{{"config", cfg}, {"ok", r.ok()}, {"properties", props}, {"closed_form_report", report}};
    return {out.dump(2) + "\n", r.ok()};
  }
  std::string s = config_line(cfg) + "\n";
  char buf[256];
  int failed = 0;
  for (const auto& p : r.properties) {
    std::snprintf(buf, sizeof buf, "%-4s %-16s %-44s cases=%-3d failures=%-3d skipped=%-3d worst=%.3g tol=%.3g\n",
                  p.failures ? "FAIL" : "ok", p.module.c_str(), p.name.c_str(), p.cases, p.failures, p.skipped, p.worst,
                  p.tolerance);
    s += buf;
    if (!p.first_error.empty()) s += "     first error: " + p.first_error + "\n";
    failed += p.failures > 0;
  }
  int branch_failures = 0;
  double worst = 0.0;
  for (const auto& d : r.lambda_s_report) {
    if (!d.closed_form) ++branch_failures;
    else worst = std::max(worst, d.max_relative_deviation);
  }
  std::snprintf(buf, sizeof buf, "closed-form invariant report: %zu points, max relative deviation %.3g, branch failures %d\n",
                r.lambda_s_report.size(), worst, branch_failures);
  s += buf;
  s += "seed " + std::to_string(r.seed) + ": " + std::to_string(r.properties.size() - failed) + "/" +
       std::to_string(r.properties.size()) + " properties passed\n";
  return {s, r.ok()};
}

void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) fail(ErrorKind::Io, "write to '" + path + "' failed");
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::Io: return kIo;
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidConfig:
    case ErrorKind::SingularShift:
    case ErrorKind::SingularDarboux:
    case ErrorKind::SingularState:
      return kValidation;
    default: return kNumeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Gaussian-state information geometry toolkit"};
  app.add_option("command,--command", c.command, "Command to run")->required()->check(CLI::IsMember(kCommands));
  app.add_option("--m", c.m, "Toy-model cross correlation m (sweep)");
  app.add_option("--n", c.n, "Toy-model cross correlation n (sweep)");
  app.add_option("--theta", c.theta, "Position noncommutativity");
  app.add_option("--eta", c.eta, "Momentum noncommutativity");
  app.add_option("--grid", c.grid, "Number of interior theta grid points");
  app.add_option("--out", c.out, "Output path, '-' for stdout");
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", c.seed, "Random seed");
  app.add_option("--hbar", c.hbar, "Reduced Planck constant")->check(CLI::PositiveNumber);
  app.add_option("--m1", c.m1, "Oscillator mass 1");
  app.add_option("--m2", c.m2, "Oscillator mass 2");
  app.add_option("--w1", c.w1, "Oscillator frequency 1");
  app.add_option("--w2", c.w2, "Oscillator frequency 2");
  app.add_option("--sigma1", c.sigma1, "First state: a,b,c,d or a covariance file");
  app.add_option("--sigma2", c.sigma2, "Second state: a,b,c,d or a covariance file");
  app.add_option("--transform", c.transform, "Congruence check transform: 'random' or a matrix file");
  app.add_option("--samples", c.samples, "Monte-Carlo sample count");
  app.add_option("--kappa", c.kappa, "Regularizer scale");
  app.add_option("--region", c.region, "Volume region")->check(CLI::IsMember({"quantum", "separable", "entangled"}));
  app.add_option("--rule", c.rule, "Region membership rule")->check(CLI::IsMember({"oracle", "explicit"}));
  app.add_option("--cases", c.cases, "Random cases per self-test property")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  if (c.format.empty()) c.format = is_sweep(c.command) ? "csv" : "json";
  if (c.format == "csv" && !is_sweep(c.command) && c.command != "selftest") {
    std::cerr << "error: --format csv is only available for sweeps\n";
    return kUsage;
  }

  try {
    const json cfg = resolved_config(c);
    if (is_sweep(c.command)) {
      emit(c.out, run_sweep(c, cfg));
      return kOk;
    }
    if (c.command == "selftest") {
      const auto [text, ok] = run_selftest_cmd(c, cfg);
      emit(c.out, text);
      return ok ? kOk : kNumeric;
    }
    json result;
    if (c.command == "distance") result = run_distance(c);
    else if (c.command == "metric") result = run_metric(c);
    else if (c.command == "oscillator") result = run_oscillator(c);
    else result = run_volume(c);
    json out{{"config", cfg}, {"result", result}};
    emit(c.out, out.dump(2) + "\n");
    return kOk;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
}

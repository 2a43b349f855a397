#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bootcopula/bootcopula.hpp"
#include "bootcopula/version.hpp"

namespace bootcopula::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kToolName = "bootcomb";

// A failure that already carries its exit code and user-facing message.
struct Failure : std::runtime_error {
  Failure(const std::string& message, int code) : std::runtime_error(message), code(code) {}
  int code;
};

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::invalid_argument:
    case ErrorKind::domain:
    case ErrorKind::syntax:
      return kExitUsage;
    default:
      return kExitNumerical;
  }
}

[[noreturn]] void usage(const std::string& message) { throw Failure(message, kExitUsage); }

// Runs `fn`, prefixing any library error with `context` (usually the flag).
template <class Fn>
auto in_context(const std::string& context, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Failure(context + ": " + e.what(), exit_code(e));
  }
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string g17(double v) { return fmt("%.17g", v); }

// Shortest text that reads back as `v`.
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.emplace_back(trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_number(const std::string& flag, std::string_view text) {
  const std::string s(trim(text));
  char* end = nullptr;
  const double v = s.empty() ? 0.0 : std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    usage(flag + ": '" + s + "' is not a finite number");
  }
  return v;
}

// Non-negative integer; accepts "1000000" and "1e6".
std::uint64_t parse_count(const std::string& flag, std::string_view text) {
  const std::string s(trim(text));
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && ptr == s.data() + s.size()) return v;
  const double d = parse_number(flag, s);
  if (d < 0.0 || d != std::floor(d) || d > 9007199254740992.0) {
    usage(flag + ": '" + s + "' is not a non-negative integer");
  }
  return static_cast<std::uint64_t>(d);
}

std::array<double, 2> parse_pair(const std::string& flag, std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) usage(flag + ": expected 'low,upp', got '" + std::string(text) + "'");
  return {parse_number(flag, parts[0]), parse_number(flag, parts[1])};
}

// family:qLow:qUpp[:alphaLow:alphaUpp]
Json parse_dist(std::string_view text) {
  const std::string flag = "--dist " + std::string(text);
  const auto parts = split(text, ':');
  if (parts.size() != 3 && parts.size() != 5) {
    usage(flag + ": expected family:qLow:qUpp[:alphaLow:alphaUpp]");
  }
  const Family family = in_context(flag, [&] { return parse_family(parts[0]); });
  Json d;
  d["family"] = std::string(to_string(family));
  d["qLow"] = parse_number(flag, parts[1]);
  d["qUpp"] = parse_number(flag, parts[2]);
  d["alphaLow"] = parts.size() == 5 ? parse_number(flag, parts[3]) : 0.025;
  d["alphaUpp"] = parts.size() == 5 ? parse_number(flag, parts[4]) : 0.975;
  return d;
}

// Row-major, rows separated by ';': "1,0.5;0.5,1".
Json parse_sigma(std::string_view text) {
  Json rows = Json::array();
  for (const auto& row : split(text, ';')) {
    Json r = Json::array();
    for (const auto& cell : split(row, ',')) r.push_back(parse_number("--sigma", cell));
    rows.push_back(std::move(r));
  }
  return rows;
}

Json identity_json(std::size_t d) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < d; ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < d; ++j) r.push_back(i == j ? 1.0 : 0.0);
    rows.push_back(std::move(r));
  }
  return rows;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(Json(std::vector<double>(m.row(i).begin(), m.row(i).end())));
  return rows;
}

CorrelationMatrix sigma_from_json(const Json& rows, const std::string& flag) {
  std::vector<std::vector<double>> values;
  for (const auto& r : rows) values.push_back(r.get<std::vector<double>>());
  for (const auto& r : values) {
    if (r.size() != values.size()) usage(flag + ": matrix must be square");
  }
  return in_context(flag, [&] { return CorrelationMatrix::validate(Matrix::from_rows(values)); });
}

std::optional<std::string> timestamp(bool requested) {
  const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
  if (!requested && !epoch) return std::nullopt;
  std::time_t t = epoch ? static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10)) : std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

// ---------------------------------------------------------------------------
// Options shared by the bootstrap commands.

struct Common {
  std::string n = "1000000";
  std::uint64_t seed = 1;
  std::string method = "percentile";
  double level = 0.95;
  unsigned threads = 0;
  bool timestamp = false;
};

void add_common(CLI::App* cmd, Common& c, bool bootstrap = true) {
  if (bootstrap) {
    cmd->add_option("--n", c.n, "Bootstrap draws (>= 1000)")->capture_default_str();
    cmd->add_option("--method", c.method, "Interval method: percentile or hdi")->capture_default_str();
    cmd->add_option("--level", c.level, "Confidence level in (0, 1)")->capture_default_str();
  }
  cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores; never changes results)");
  cmd->add_flag("--timestamp", c.timestamp, "Record the wall-clock time in the manifest");
}

Json manifest_head(const std::string& command) {
  Json m;
  m["tool"] = kToolName;
  m["version"] = kVersion;
  m["command"] = command;
  return m;
}

void put_config(Json& m, const Common& c) {
  m["n"] = parse_count("--n", c.n);
  m["seed"] = c.seed;
  m["method"] = std::string(to_string(in_context("--method", [&] { return parse_interval_method(c.method); })));
  m["level"] = c.level;
}

void put_timestamp(Json& m, const Common& c) {
  if (auto ts = timestamp(c.timestamp)) m["timestamp"] = *ts;
}

BootstrapConfig config_from(const Json& m, unsigned threads) {
  BootstrapConfig cfg;
  cfg.n = m.at("n").get<std::size_t>();
  cfg.seed = m.at("seed").get<std::uint64_t>();
  cfg.method = parse_interval_method(m.at("method").get<std::string>());
  cfg.level = m.at("level").get<double>();
  cfg.threads = threads;
  in_context("--n/--level", [&] { cfg.validate(); });
  return cfg;
}

// Side outputs that do not affect results and are not part of the manifest.
struct Extras {
  unsigned threads = 0;
  std::string boot_vals;
  std::string manifest_path;
};

Json fits_json(std::span<const FittedDistribution> fits) {
  Json arr = Json::array();
  for (const auto& f : fits) {
    Json j;
    j["family"] = std::string(to_string(f.spec.family()));
    j["params"] = std::vector<double>(f.spec.params().begin(), f.spec.params().end());
    j["residual"] = f.residual;
    arr.push_back(std::move(j));
  }
  return arr;
}

Json diagnostics_json(const Diagnostics& d, std::span<const FittedDistribution> fits) {
  Json j;
  j["draws"] = d.draws;
  j["excludedDraws"] = d.excluded_draws;
  j["marginals"] = fits_json(fits);
  j["correlation"] = {{"dimension", d.correlation.dimension},
                      {"rank", d.correlation.rank},
                      {"minEigenvalue", d.correlation.min_eigenvalue},
                      {"maxEigenvalue", d.correlation.max_eigenvalue},
                      {"factorError", d.correlation.factor_error},
                      {"identity", d.correlation.identity}};
  j["warnings"] = d.warnings;
  return j;
}

Json estimate_json(const CombinedEstimate& e, const Json& manifest) {
  Json j;
  j["low"] = e.interval.low;
  j["upp"] = e.interval.upp;
  j["point"] = e.point;
  j["pointSource"] = e.point_source == PointSource::supplied ? "supplied" : "median";
  j["method"] = std::string(to_string(e.method));
  j["level"] = e.level;
  j["n"] = e.n;
  j["seed"] = manifest.at("seed");
  return j;
}

void write_estimate(std::ostream& out, Json result, const CombinedEstimate& e, const Json& manifest) {
  if (manifest.value("out", "json") == "csv") {
    out << "low,upp,point,method,level,n,seed\n"
        << g17(e.interval.low) << ',' << g17(e.interval.upp) << ',' << g17(e.point) << ','
        << to_string(e.method) << ',' << g17(e.level) << ',' << e.n << ','
        << manifest.at("seed").get<std::uint64_t>() << '\n';
    return;
  }
  result["manifest"] = manifest;
  out << result.dump(2) << '\n';
}

void write_boot_values(const std::string& path, const std::vector<std::string>& names,
                       const EmpiricalSample& sample) {
  std::ofstream f(path);
  if (!f) usage("--boot-vals: cannot open '" + path + "' for writing");
  for (const auto& name : names) f << name << ',';
  f << "value\n";
  const Matrix& x = *sample.input_draws;
  for (std::size_t i = 0; i < sample.values.size(); ++i) {
    for (double v : x.row(i)) f << g17(v) << ',';
    f << g17(sample.values[i]) << '\n';
  }
}

void write_manifest_file(const std::string& path, const Json& manifest) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) usage("--manifest: cannot open '" + path + "' for writing");
  f << manifest.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// combine

std::vector<FittedDistribution> fit_marginals(const Json& dists) {
  std::vector<FittedDistribution> fits;
  for (const auto& d : dists) {
    const QuantileConstraint c{d.at("qLow").get<double>(), d.at("qUpp").get<double>(),
                               d.at("alphaLow").get<double>(), d.at("alphaUpp").get<double>()};
    const std::string family = d.at("family").get<std::string>();
    const std::string label = "--dist " + family + ":" + shortest(c.q_low) + ":" + shortest(c.q_upp);
    fits.push_back(in_context(label, [&] { return fit_from_quantiles(parse_family(family), c); }));
  }
  return fits;
}

Combiner combiner_from(const Json& spec, std::size_t arity) {
  if (spec.contains("builtin")) {
    return in_context("--combiner", [&] {
      return Combiner::builtin(parse_builtin_combiner(spec.at("builtin").get<std::string>()), arity);
    });
  }
  return in_context("--expr", [&] {
    return Combiner::expression(spec.at("expr").get<std::string>(),
                                spec.at("vars").get<std::vector<std::string>>());
  });
}

void execute_combine(const Json& m, const Extras& x, std::ostream& out) {
  const auto fits = fit_marginals(m.at("marginals"));
  if (m.at("sigma").size() != fits.size()) {
    usage("--sigma: dimension " + std::to_string(m.at("sigma").size()) + " does not match " +
          std::to_string(fits.size()) + " --dist entries");
  }
  const auto sigma = sigma_from_json(m.at("sigma"), "--sigma");
  const Combiner combiner = combiner_from(m.at("combiner"), fits.size());
  if (combiner.arity() != fits.size()) {
    usage("--expr: expression uses " + std::to_string(combiner.arity()) + " variables but " +
          std::to_string(fits.size()) + " --dist entries were given");
  }
  BootstrapConfig cfg = config_from(m, x.threads);
  cfg.return_boot_values = !x.boot_vals.empty();
  const BootResult r = boot_comb(fits, sigma, combiner, cfg);
  if (r.sample) {
    std::vector<std::string> names = combiner.variables();
    if (names.empty()) {
      for (std::size_t i = 0; i < fits.size(); ++i) names.push_back("x" + std::to_string(i + 1));
    }
    write_boot_values(x.boot_vals, names, *r.sample);
  }
  Json result = estimate_json(r.estimate, m);
  result["diagnostics"] = diagnostics_json(r.estimate.diagnostics, fits);
  write_estimate(out, std::move(result), r.estimate, m);
}

// ---------------------------------------------------------------------------
// adjust-prev, sweep, scatter

struct PrevOptions {
  std::string prev_ci, sens_ci, spec_ci;
  std::optional<double> prev, sens, spec;
  std::optional<double> rho;
  std::string sigma;
  std::string out_of_range = "discard";
};

void add_prev_options(CLI::App* cmd, PrevOptions& p, bool with_sigma) {
  cmd->add_option("--prev-ci", p.prev_ci, "Apparent prevalence interval 'low,upp'")->required();
  cmd->add_option("--sens-ci", p.sens_ci, "Sensitivity interval 'low,upp'")->required();
  cmd->add_option("--spec-ci", p.spec_ci, "Specificity interval 'low,upp'")->required();
  cmd->add_option("--prev", p.prev, "Apparent prevalence point estimate");
  cmd->add_option("--sens", p.sens, "Sensitivity point estimate");
  cmd->add_option("--spec", p.spec, "Specificity point estimate");
  cmd->add_option("--out-of-range", p.out_of_range,
                  "Draws whose adjusted prevalence leaves [0,1]: discard or truncate")
      ->capture_default_str();
  if (with_sigma) {
    auto* rho = cmd->add_option("--rho-sens-spec", p.rho, "Correlation between sensitivity and specificity");
    cmd->add_option("--sigma", p.sigma, "Full 3x3 correlation (prev, sens, spec), rows separated by ';'")
        ->excludes(rho);
  }
}

Json ci_json(const std::string& flag, const std::string& text) {
  const auto [lo, hi] = parse_pair(flag, text);
  return Json::array({lo, hi});
}

void put_prev_inputs(Json& m, const PrevOptions& p) {
  m["prevCi"] = ci_json("--prev-ci", p.prev_ci);
  m["sensCi"] = ci_json("--sens-ci", p.sens_ci);
  m["specCi"] = ci_json("--spec-ci", p.spec_ci);
  const int given = p.prev.has_value() + p.sens.has_value() + p.spec.has_value();
  if (given != 0 && given != 3) usage("--prev/--sens/--spec: give all three point estimates or none");
  m["pointEstimates"] = given == 3 ? Json{{"prev", *p.prev}, {"sens", *p.sens}, {"spec", *p.spec}} : Json(nullptr);
  m["outOfRange"] =
      std::string(to_string(in_context("--out-of-range", [&] { return parse_out_of_range_policy(p.out_of_range); })));
}

PrevAdjustRequest request_from(const Json& m, unsigned threads) {
  auto ci = [&](const char* key) {
    const auto v = m.at(key).get<std::vector<double>>();
    if (v.size() != 2) usage(std::string("manifest: ") + key + " must hold two numbers");
    return ProbabilityInterval{v[0], v[1]};
  };
  PrevAdjustRequest req{ci("prevCi"), ci("sensCi"), ci("specCi"), std::nullopt, CorrelationMatrix::identity(3), {}};
  if (const auto& pe = m.at("pointEstimates"); !pe.is_null()) {
    req.point_estimates = std::array<double, 3>{pe.at("prev").get<double>(), pe.at("sens").get<double>(),
                                                pe.at("spec").get<double>()};
  }
  req.out_of_range = parse_out_of_range_policy(m.at("outOfRange").get<std::string>());
  req.config = config_from(m, threads);
  in_context("--prev-ci/--sens-ci/--spec-ci", [&] { req.validate(); });
  return req;
}

void execute_adjust_prev(const Json& m, const Extras& x, std::ostream& out) {
  PrevAdjustRequest req = request_from(m, x.threads);
  if (m.at("sigma").size() != 3) usage("--sigma: prevalence adjustment needs a 3x3 matrix");
  req.sigma = sigma_from_json(m.at("sigma"), "--sigma");
  req.config.return_boot_values = !x.boot_vals.empty();
  const AdjustedPrevalence r = adjust_prevalence(req);
  if (r.sample) write_boot_values(x.boot_vals, {"prev", "sens", "spec"}, *r.sample);
  Json result = estimate_json(r.estimate, m);
  result["pointEstimates"] = m.at("pointEstimates");
  result["outOfRange"] = m.at("outOfRange");
  result["diagnostics"] = diagnostics_json(r.estimate.diagnostics, r.marginals);
  write_estimate(out, std::move(result), r.estimate, m);
}

std::vector<double> rho_grid(double from, double to, std::uint64_t steps) {
  std::vector<double> grid;
  for (std::uint64_t k = 0; k <= steps; ++k) {
    const double rho = steps == 0 ? from : from + (to - from) * static_cast<double>(k) / static_cast<double>(steps);
    if (!(rho >= -1.0 && rho <= 1.0)) {
      usage("--rho-from/--rho-to: correlation " + shortest(rho) + " outside [-1, 1]");
    }
    grid.push_back(rho);
  }
  return grid;
}

void execute_sweep(const Json& m, const Extras& x, std::ostream& out) {
  const PrevAdjustRequest req = request_from(m, x.threads);
  const auto grid = rho_grid(m.at("rhoFrom").get<double>(), m.at("rhoTo").get<double>(),
                             m.at("steps").get<std::uint64_t>());
  const auto rows = rho_sweep(req, grid);
  out << "rho,low,upp,width\n";
  for (const auto& row : rows) {
    out << fmt("%.10g", row.rho) << ',' << fmt("%.10g", row.low) << ',' << fmt("%.10g", row.upp) << ','
        << fmt("%.10g", row.width) << '\n';
  }
}

void execute_scatter(const Json& m, const Extras& x, std::ostream& out) {
  auto ci = [&](const char* key) {
    const auto v = m.at(key).get<std::vector<double>>();
    return ProbabilityInterval{v.at(0), v.at(1)};
  };
  PrevAdjustRequest req{{0.25, 0.75}, ci("sensCi"), ci("specCi"), std::nullopt, CorrelationMatrix::identity(3), {}};
  req.config.seed = m.at("seed").get<std::uint64_t>();
  req.config.threads = x.threads;
  const double rho = m.at("rho").get<double>();
  if (!(rho >= -1.0 && rho <= 1.0)) usage("--rho: correlation " + shortest(rho) + " outside [-1, 1]");
  const std::size_t count = m.at("m").get<std::size_t>();
  if (count == 0) usage("--m: sample size must be >= 1");
  const Matrix draws = in_context("--sens-ci/--spec-ci", [&] { return scatter_draws(req, rho, count); });
  std::string buf = "sens,spec\n";
  for (std::size_t i = 0; i < draws.rows(); ++i) {
    buf += g17(draws(i, 0));
    buf += ',';
    buf += g17(draws(i, 1));
    buf += '\n';
  }
  out << buf;
}

// ---------------------------------------------------------------------------
// coverage

struct ScenarioReader {
  const Json& root;

  const Json& field(const char* key) const {
    if (!root.contains(key)) usage(std::string("scenario.") + key + ": missing required field");
    return root.at(key);
  }

  template <class T>
  T number(const Json& v, const std::string& path) const {
    if (!v.is_number()) usage(path + ": expected a number");
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer() || v.get<double>() < 0) usage(path + ": expected a non-negative integer");
    }
    return v.get<T>();
  }

  template <class T>
  std::vector<T> numbers(const char* key) const {
    const Json& v = field(key);
    const std::string path = std::string("scenario.") + key;
    if (!v.is_array()) usage(path + ": expected an array");
    std::vector<T> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number<T>(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }

  template <class T>
  T optional_number(const char* key, T fallback) const {
    return root.contains(key) ? number<T>(root.at(key), std::string("scenario.") + key) : fallback;
  }

  std::string optional_string(const char* key, const std::string& fallback) const {
    if (!root.contains(key)) return fallback;
    if (!root.at(key).is_string()) usage(std::string("scenario.") + key + ": expected a string");
    return root.at(key).get<std::string>();
  }
};

// Validates a scenario document and returns it with every default filled in.
Json normalize_scenario(const Json& doc) {
  if (!doc.is_object()) usage("scenario: expected a JSON object");
  const ScenarioReader r{doc};
  Json s;
  const auto params = r.numbers<double>("trueParams");
  s["trueParams"] = params;
  s["experimentSizes"] = r.numbers<std::uint64_t>("experimentSizes");
  const std::size_t d = params.size();
  if (doc.contains("expr")) {
    s["combiner"] = {{"expr", r.optional_string("expr", "")}};
    std::vector<std::string> vars;
    if (doc.contains("vars")) {
      const Json& v = doc.at("vars");
      if (!v.is_array()) usage("scenario.vars: expected an array of names");
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string()) usage("scenario.vars[" + std::to_string(i) + "]: expected a string");
        vars.push_back(v[i].get<std::string>());
      }
    }
    s["combiner"]["vars"] = vars;
  } else {
    s["combiner"] = {{"builtin", r.optional_string("combiner", "product")}};
  }
  if (doc.contains("sigma")) {
    const Json& sig = doc.at("sigma");
    if (!sig.is_array()) usage("scenario.sigma: expected an array of rows");
    for (std::size_t i = 0; i < sig.size(); ++i) {
      if (!sig[i].is_array()) usage("scenario.sigma[" + std::to_string(i) + "]: expected an array");
      for (std::size_t j = 0; j < sig[i].size(); ++j) {
        r.number<double>(sig[i][j], "scenario.sigma[" + std::to_string(i) + "][" + std::to_string(j) + "]");
      }
    }
    s["sigma"] = sig;
  } else {
    s["sigma"] = identity_json(d);
  }
  s["n"] = r.optional_number<std::uint64_t>("n", 100000);
  s["method"] = r.optional_string("method", "percentile");
  s["level"] = r.optional_number<double>("level", 0.95);
  s["inputLevel"] = r.optional_number<double>("inputLevel", 0.95);
  s["trials"] = r.optional_number<std::uint64_t>("trials", 1000);
  for (const auto& [key, _] : doc.items()) {
    static const char* known[] = {"trueParams", "experimentSizes", "combiner", "expr", "vars", "sigma",
                                  "n", "method", "level", "inputLevel", "trials"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
        std::end(known)) {
      usage("scenario." + key + ": unknown field");
    }
  }
  return s;
}

CoverageScenario scenario_from(const Json& s, std::uint64_t trials, unsigned threads) {
  CoverageScenario sc;
  sc.true_params = s.at("trueParams").get<std::vector<double>>();
  sc.experiment_sizes = s.at("experimentSizes").get<std::vector<std::uint64_t>>();
  sc.combiner = combiner_from(s.at("combiner"), sc.true_params.size());
  sc.sigma = sigma_from_json(s.at("sigma"), "scenario.sigma");
  sc.config.n = s.at("n").get<std::size_t>();
  sc.config.method = in_context("scenario.method", [&] { return parse_interval_method(s.at("method").get<std::string>()); });
  sc.config.level = s.at("level").get<double>();
  sc.config.threads = threads;
  sc.input_level = s.at("inputLevel").get<double>();
  sc.trials = trials;
  in_context("scenario", [&] {
    sc.validate();
    sc.config.validate();
  });
  return sc;
}

void execute_coverage(const Json& m, const Extras& x, std::ostream& out) {
  const std::uint64_t trials = m.at("trials").get<std::uint64_t>();
  if (trials == 0) usage("--trials: must be >= 1");
  const CoverageScenario sc = scenario_from(m.at("scenario"), trials, x.threads);
  const CoverageResult r = run_coverage(sc, m.at("seed").get<std::uint64_t>(), x.threads);
  Json j;
  j["coverage"] = r.coverage;
  j["meanWidth"] = r.mean_width;
  j["mcStdErr"] = r.mc_std_err;
  j["excludedTrials"] = r.excluded_trials;
  j["trialsUsed"] = r.trials_used;
  j["manifest"] = m;
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

void execute(const Json& manifest, const Extras& extras, std::ostream& out) {
  const std::string command = manifest.at("command").get<std::string>();
  if (command == "combine") return execute_combine(manifest, extras, out);
  if (command == "adjust-prev") return execute_adjust_prev(manifest, extras, out);
  if (command == "sweep") return execute_sweep(manifest, extras, out);
  if (command == "scatter") return execute_scatter(manifest, extras, out);
  if (command == "coverage") return execute_coverage(manifest, extras, out);
  usage("manifest: unknown command '" + command + "'");
}

Json read_json_file(const std::string& flag, const std::string& path) {
  std::ifstream f(path);
  if (!f) usage(flag + ": cannot open '" + path + "'");
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    usage(flag + ": '" + path + "' is not valid JSON: " + e.what());
  }
}

constexpr const char* kFooter = R"(Expressions (--expr):
  numbers, variable names [a-zA-Z][a-zA-Z0-9_]*, + - * / ^, unary -, parentheses,
  log(x) exp(x) sqrt(x) min(a,b,...) max(a,b,...).
  ^ binds tightest and is right associative, then unary -, then * /, then + -.
  Variables bind to the --dist entries in order of first appearance unless --vars is given.

Correlation (--sigma): row-major with ';' between rows, e.g. "1,0.5;0.5,1".
All probabilities are decimals in [0,1], never percentages.

Scenario files (coverage --scenario) are JSON objects:
  {"trueParams": [0.035, 0.045], "experimentSizes": [2000, 1500],
   "combiner": "product" | "expr": "x1*x2", "vars": ["x1","x2"],
   "sigma": [[1,0],[0,1]], "n": 100000, "method": "percentile",
   "level": 0.95, "inputLevel": 0.95, "trials": 1000}
  Only trueParams and experimentSizes are required.

Exit codes: 0 success, 2 invalid arguments, 3 numerical failure
(fit, correlation matrix, non-finite draw, uninformative test).)";

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Combine confidence intervals by a Gaussian-copula parametric bootstrap", kToolName};
  app.footer(kFooter);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Json manifest;
  Extras extras;

  // combine
  Common combine_common;
  std::vector<std::string> dists;
  std::string expr_text, combiner_name, vars, sigma_text, out_format = "json";
  auto* combine = app.add_subcommand("combine", "Combine parameters given by their confidence intervals");
  combine->add_option("--dist", dists, "family:qLow:qUpp[:alphaLow:alphaUpp], repeat in parameter order")->required();
  auto* expr_opt = combine->add_option("--expr", expr_text, "Combination expression, e.g. 'x1*x2'");
  auto* comb_opt = combine->add_option("--combiner", combiner_name,
                                       "Builtin combiner: product, sum, identity, roganGladen, roganGladenRaw");
  expr_opt->excludes(comb_opt);
  combine->add_option("--vars", vars, "Comma-separated expression variables bound to --dist in order")->needs(expr_opt);
  combine->add_option("--sigma", sigma_text, "Correlation matrix (default identity)");
  combine->add_option("--boot-vals", extras.boot_vals, "Write every bootstrap draw to this CSV file");
  combine->add_option("--out", out_format, "Output format: json or csv")->check(CLI::IsMember({"json", "csv"}));
  add_common(combine, combine_common);

  // adjust-prev
  Common prev_common;
  PrevOptions prev_opts;
  std::string prev_out = "json";
  auto* adjust = app.add_subcommand("adjust-prev", "Rogan-Gladen prevalence adjustment with dependent sens/spec");
  add_prev_options(adjust, prev_opts, true);
  adjust->add_option("--boot-vals", extras.boot_vals, "Write every bootstrap draw to this CSV file");
  adjust->add_option("--out", prev_out, "Output format: json or csv")->check(CLI::IsMember({"json", "csv"}));
  add_common(adjust, prev_common);

  // sweep
  Common sweep_common;
  PrevOptions sweep_opts;
  double rho_from = 0.0, rho_to = 0.0;
  std::string steps = "0";
  auto* sweep = app.add_subcommand("sweep", "Interval width as a function of the sens/spec correlation (CSV)");
  add_prev_options(sweep, sweep_opts, false);
  sweep->add_option("--rho-from", rho_from, "First correlation of the grid")->required();
  sweep->add_option("--rho-to", rho_to, "Last correlation of the grid")->required();
  sweep->add_option("--steps", steps, "Grid intervals; steps + 1 rows are written")->required();
  sweep->add_option("--manifest", extras.manifest_path, "Also write the run manifest to this JSON file");
  add_common(sweep, sweep_common);

  // scatter
  Common scatter_common;
  std::string scatter_sens, scatter_spec, scatter_m = "10000";
  double scatter_rho = 0.0;
  auto* scatter = app.add_subcommand("scatter", "Coupled (sensitivity, specificity) draws (CSV)");
  scatter->add_option("--sens-ci", scatter_sens, "Sensitivity interval 'low,upp'")->required();
  scatter->add_option("--spec-ci", scatter_spec, "Specificity interval 'low,upp'")->required();
  scatter->add_option("--rho", scatter_rho, "Correlation between sensitivity and specificity")->required();
  scatter->add_option("--m", scatter_m, "Number of draws")->capture_default_str();
  scatter->add_option("--manifest", extras.manifest_path, "Also write the run manifest to this JSON file");
  add_common(scatter, scatter_common, false);

  // coverage
  Common coverage_common;
  std::string scenario_path, trials;
  auto* coverage = app.add_subcommand("coverage", "Monte-Carlo coverage of the combined interval");
  coverage->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  coverage->add_option("--trials", trials, "Number of trials (overrides the scenario file)");
  add_common(coverage, coverage_common, false);

  // replay
  std::string replay_path;
  unsigned replay_threads = 0;
  auto* replay = app.add_subcommand("replay", "Re-run the manifest embedded in an earlier JSON output");
  replay->add_option("file", replay_path, "JSON output or manifest file")->required();
  replay->add_option("--threads", replay_threads, "Worker threads (0 = all cores)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << kToolName << ": error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (combine->parsed()) {
      manifest = manifest_head("combine");
      Json marginals = Json::array();
      for (const auto& d : dists) marginals.push_back(parse_dist(d));
      manifest["marginals"] = marginals;
      manifest["sigma"] = sigma_text.empty() ? identity_json(dists.size()) : parse_sigma(sigma_text);
      if (!expr_text.empty()) {
        std::vector<std::string> names;
        if (!vars.empty()) names = split(vars, ',');
        // Resolve the default (first-appearance) order so the manifest is explicit.
        const Combiner c = in_context("--expr", [&] { return Combiner::expression(expr_text, names); });
        manifest["combiner"] = {{"expr", expr_text}, {"vars", c.variables()}};
      } else if (!combiner_name.empty()) {
        const auto kind = in_context("--combiner", [&] { return parse_builtin_combiner(combiner_name); });
        manifest["combiner"] = {{"builtin", std::string(to_string(kind))}};
      } else {
        usage("combine: one of --expr or --combiner is required");
      }
      put_config(manifest, combine_common);
      manifest["out"] = out_format;
      put_timestamp(manifest, combine_common);
      extras.threads = combine_common.threads;
    } else if (adjust->parsed()) {
      manifest = manifest_head("adjust-prev");
      put_prev_inputs(manifest, prev_opts);
      if (!prev_opts.sigma.empty()) {
        manifest["sigma"] = parse_sigma(prev_opts.sigma);
      } else {
        const double rho = prev_opts.rho.value_or(0.0);
        manifest["sigma"] = matrix_json(in_context("--rho-sens-spec", [&] { return sens_spec_correlation(rho); }).entries());
      }
      put_config(manifest, prev_common);
      manifest["out"] = prev_out;
      put_timestamp(manifest, prev_common);
      extras.threads = prev_common.threads;
    } else if (sweep->parsed()) {
      manifest = manifest_head("sweep");
      put_prev_inputs(manifest, sweep_opts);
      manifest["rhoFrom"] = rho_from;
      manifest["rhoTo"] = rho_to;
      manifest["steps"] = parse_count("--steps", steps);
      put_config(manifest, sweep_common);
      put_timestamp(manifest, sweep_common);
      rho_grid(rho_from, rho_to, manifest["steps"].get<std::uint64_t>());
      extras.threads = sweep_common.threads;
    } else if (scatter->parsed()) {
      manifest = manifest_head("scatter");
      manifest["sensCi"] = ci_json("--sens-ci", scatter_sens);
      manifest["specCi"] = ci_json("--spec-ci", scatter_spec);
      manifest["rho"] = scatter_rho;
      manifest["m"] = parse_count("--m", scatter_m);
      manifest["seed"] = scatter_common.seed;
      put_timestamp(manifest, scatter_common);
      extras.threads = scatter_common.threads;
    } else if (coverage->parsed()) {
      manifest = manifest_head("coverage");
      const Json scenario = normalize_scenario(read_json_file("--scenario", scenario_path));
      manifest["scenario"] = scenario;
      manifest["trials"] = trials.empty() ? scenario.at("trials").get<std::uint64_t>() : parse_count("--trials", trials);
      manifest["seed"] = coverage_common.seed;
      put_timestamp(manifest, coverage_common);
      extras.threads = coverage_common.threads;
    } else if (replay->parsed()) {
      const Json doc = read_json_file("replay", replay_path);
      manifest = doc.contains("manifest") ? doc.at("manifest") : doc;
      if (!manifest.is_object() || manifest.value("tool", "") != kToolName) {
        usage("replay: '" + replay_path + "' does not contain a " + std::string(kToolName) + " manifest");
      }
      extras.threads = replay_threads;
    }

    write_manifest_file(extras.manifest_path, manifest);
    std::ostringstream buffer;
    execute(manifest, extras, buffer);
    out << buffer.str();
    return kExitOk;
  } catch (const Failure& f) {
    err << kToolName << ": error: " << f.what() << '\n';
    return f.code;
  } catch (const Error& e) {
    err << kToolName << ": error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const Json::exception& e) {
    err << kToolName << ": error: malformed manifest: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace bootcopula::cli

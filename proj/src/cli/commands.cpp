#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bessel/cli.hpp"
#include "bessel/ensemble.hpp"
#include "bessel/error.hpp"
#include "bessel/noise.hpp"
#include "bessel/polyroots.hpp"
#include "bessel/validate.hpp"

namespace bessel::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SizeOutOfRange:
    case ErrorCode::AlphaOutOfRange:
    case ErrorCode::ShapeError:
    case ErrorCode::MissingNu:
      return kUsage;
    case ErrorCode::ConfigInvalid:
    case ErrorCode::BoundaryPoint:
    case ErrorCode::UnsupportedRegime:
    case ErrorCode::GridMismatch:
      return kConfigInvalid;
    case ErrorCode::NoConvergence:
    case ErrorCode::StepFailure:
      return kNumericalFailure;
  }
  return kNumericalFailure;
}

struct Common {
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string out_dir;
  std::size_t paths = 0;  ///< 0: command default
  std::string format = "json";
  bool format_given = false;
};

/// Sends an artifact to `<out>/<name>` when an output directory is set, or to
/// stdout otherwise.
class Sink {
 public:
  Sink(const Common& common, std::ostream& out) : common_(common), out_(out) {}

  void emit(const std::string& name, const std::string& content) const {
    if (common_.out_dir.empty()) {
      out_ << content;
      return;
    }
    const fs::path dir(common_.out_dir);
    fs::create_directories(dir);
    std::ofstream file(dir / name, std::ios::binary);
    if (!file) throw Error(ErrorCode::ConfigInvalid, "cannot write " + (dir / name).string());
    file << content;
  }

  bool to_directory() const { return !common_.out_dir.empty(); }

 private:
  const Common& common_;
  std::ostream& out_;
};

json number_array(const Vec& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

json ks_json(const KsResult& ks) {
  return json{{"statistic", ks.statistic}, {"critical_1pct", ks.critical_1pct}, {"passes", ks.passes()}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string csv_row(double t, const ChamberPoint& x) {
  std::string row = format_number(t);
  for (double v : x) row += "," + format_number(v);
  return row + "\n";
}

std::string coordinate_header(std::size_t n, std::string_view first) {
  std::string h(first);
  for (std::size_t i = 1; i <= n; ++i) h += ",x" + std::to_string(i);
  return h + "\n";
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

FreezingRegime make_regime(const std::string& kind, std::optional<double> nu,
                           std::optional<double> k2) {
  switch (parse_regime_kind(kind)) {
    case FreezingRegime::Kind::A_k: return FreezingRegime::a();
    case FreezingRegime::Kind::D_k: return FreezingRegime::d();
    case FreezingRegime::Kind::B_beta:
      if (!nu) throw Error(ErrorCode::MissingNu, "regime B_beta needs --nu");
      return FreezingRegime::b_beta(*nu);
    case FreezingRegime::Kind::B_k1: return FreezingRegime::b_k1(k2.value_or(1.0));
  }
  return FreezingRegime::a();
}

// -- zeros -------------------------------------------------------------------

struct ZerosArgs {
  std::string kind = "hermite";
  int n = 0;
  double alpha = 0.0;
};

void cmd_zeros(const ZerosArgs& a, const Common& common, const Sink& sink) {
  Vec z;
  if (a.kind == "hermite") {
    z = hermite_zeros(a.n);
  } else {
    z = laguerre_zeros(a.n, a.alpha);
  }
  if (common.format == "json") {
    json j{{"schema_version", kSchemaVersion}, {"kind", a.kind}, {"n", a.n}};
    if (a.kind == "laguerre") j["alpha"] = a.alpha;
    j["zeros"] = number_array(z);
    sink.emit("zeros.json", dump(j));
    return;
  }
  std::string text;
  for (double v : z) text += format_number(v) + "\n";
  sink.emit("zeros.txt", text);
}

// -- fixed point -------------------------------------------------------------

struct FixedPointArgs {
  std::string system = "A";
  int n = 0;
  std::optional<double> nu;
};

void cmd_fixed_point(const FixedPointArgs& a, const Common& common, const Sink& sink) {
  const RootSystemSpec spec{parse_root_kind(a.system), a.n};
  spec.validate();
  if (spec.kind == RootKind::B && !a.nu) throw Error(ErrorCode::MissingNu, "system B needs --nu");
  const auto nu = spec.kind == RootKind::B ? a.nu : std::nullopt;
  const FixedPointResult fp = frozen_fixed_point(spec, nu);
  const ChamberPoint formula = zero_formula_point(spec, nu);
  double cross = 0.0;
  for (std::size_t i = 0; i < formula.size(); ++i) {
    cross = std::max(cross, std::abs(formula[i] - fp.y[i]));
  }
  if (common.format == "csv") {
    std::string text = "i,y\n";
    for (std::size_t i = 0; i < fp.y.size(); ++i) {
      text += std::to_string(i + 1) + "," + format_number(fp.y[i]) + "\n";
    }
    sink.emit("fixed_point.csv", text);
    return;
  }
  json j{{"schema_version", kSchemaVersion}, {"system", a.system}, {"n", a.n}};
  if (nu) j["nu"] = *nu;
  j["y"] = number_array(fp.y);
  j["residual"] = fp.residual;
  j["iterations"] = fp.iterations;
  j["zero_formula"] = number_array(formula);
  j["cross_check_error"] = cross;
  sink.emit("fixed_point.json", dump(j));
}

// -- freeze ------------------------------------------------------------------

struct FreezeArgs {
  std::string regime = "A_k";
  std::optional<int> n;
  std::optional<double> nu;
  std::vector<double> x0;
  double t_max = 1.0;
  std::size_t steps = 100;
  std::vector<double> grid;
};

void cmd_freeze(const FreezeArgs& a, const Common& common, const Sink& sink) {
  const FreezingRegime regime = make_regime(a.regime, a.nu, std::nullopt);
  regime.validate();
  if (a.n && static_cast<std::size_t>(*a.n) != a.x0.size()) {
    throw Error(ErrorCode::ShapeError, "--n does not match the length of --x0");
  }
  const RootSystemSpec spec{regime.root_kind(), static_cast<int>(a.x0.size())};
  spec.validate();
  if (!is_interior(spec, a.x0)) throw Error(ErrorCode::BoundaryPoint, "x0 must be interior");

  Vec grid = a.grid;
  if (grid.empty()) {
    if (!(a.t_max >= 0.0)) throw Error(ErrorCode::GridMismatch, "t_max must be >= 0");
    grid.push_back(0.0);
    if (a.t_max > 0.0) {
      for (std::size_t j = 1; j <= a.steps; ++j) {
        grid.push_back(j == a.steps ? a.t_max : a.t_max * static_cast<double>(j) / a.steps);
      }
    }
  }
  const Trajectory traj = ode_solve(regime, spec, a.x0, grid);

  if (common.format == "json") {
    json j{{"schema_version", kSchemaVersion}, {"regime", a.regime}};
    j["times"] = number_array(traj.times);
    json pts = json::array();
    for (const auto& p : traj.points) pts.push_back(number_array(p));
    j["points"] = pts;
    sink.emit("freeze.json", dump(j));
    return;
  }
  std::string text = coordinate_header(a.x0.size(), "t");
  for (std::size_t i = 0; i < traj.size(); ++i) text += csv_row(traj.times[i], traj.points[i]);
  sink.emit("freeze.csv", text);
}

// -- simulate ----------------------------------------------------------------

std::string simulate_cmd(const std::string& config_path, const Common& common, const Sink& sink) {
  KeyValueConfig config = KeyValueConfig::load(config_path);
  if (common.seed_given) config.set("seed", std::to_string(common.seed));
  if (common.paths > 0) config.set("paths", std::to_string(common.paths));
  if (common.format_given && common.format == "json") {
    throw Error(ErrorCode::ConfigInvalid, "simulate writes CSV paths; --format json is not supported");
  }
  const SimulateJob job = simulate_job_from_config(config);
  const SimConfig& cfg = job.cfg;

  const std::vector<PathResult> paths = simulate_ensemble(cfg, job.kappa);

  const std::string header = coordinate_header(cfg.spec.n, "path,t");
  std::vector<std::string> files;
  if (job.long_format) {
    std::string text = header;
    for (std::size_t p = 0; p < paths.size(); ++p) {
      const Trajectory& tr = paths[p].trajectory;
      for (std::size_t i = 0; i < tr.size(); ++i) {
        text += std::to_string(p) + "," + csv_row(tr.times[i], tr.points[i]);
      }
    }
    sink.emit("paths.csv", text);
    files.push_back("paths.csv");
  } else {
    if (!sink.to_directory()) {
      throw Error(ErrorCode::ConfigInvalid, "per-path output needs --out");
    }
    for (std::size_t p = 0; p < paths.size(); ++p) {
      std::ostringstream name;
      name << "path_" << std::setw(6) << std::setfill('0') << p << ".csv";
      const Trajectory& tr = paths[p].trajectory;
      std::string text = coordinate_header(cfg.spec.n, "t");
      for (std::size_t i = 0; i < tr.size(); ++i) text += csv_row(tr.times[i], tr.points[i]);
      sink.emit(name.str(), text);
      files.push_back(name.str());
    }
  }

  const std::string canonical = job.resolved.canonical();
  json resolved = json::object();
  {
    std::istringstream lines(canonical);
    std::string line;
    while (std::getline(lines, line)) {
      const auto eq = line.find(" = ");
      resolved[line.substr(0, eq)] = line.substr(eq + 3);
    }
  }
  json per_path = json::array();
  std::size_t exited = 0;
  for (std::size_t p = 0; p < paths.size(); ++p) {
    json e{{"index", p}, {"seed", paths[p].seed_used}, {"exited", paths[p].exited}};
    e["exit_time"] = paths[p].exit_time ? json(*paths[p].exit_time) : json(nullptr);
    e["rejections"] = paths[p].rejections;
    per_path.push_back(e);
    exited += paths[p].exited ? 1 : 0;
  }
  json manifest{{"schema_version", kSchemaVersion},
                {"version", std::string(kVersion)},
                {"config_hash", content_hash(canonical)},
                {"master_seed", cfg.seed},
                {"created_utc", utc_timestamp()},
                {"config", resolved},
                {"files", files},
                {"exited_paths", exited},
                {"paths", per_path}};
  if (sink.to_directory()) sink.emit("manifest.json", dump(manifest));
  return content_hash(canonical);
}

// -- lln ---------------------------------------------------------------------

struct LlnArgs {
  std::string regime = "A_k";
  std::optional<double> nu;
  std::optional<double> k2;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> kappas = {25.0, 100.0, 400.0};
  double t = 1.0;
  double dt = 1e-3;
};

Vec default_lln_base(FreezingRegime::Kind kind) {
  return kind == FreezingRegime::Kind::A_k ? Vec{2.0, 0.0, -2.0} : Vec{3.0, 2.0, 1.0};
}

void cmd_lln(const LlnArgs& a, const Common& common, const Sink& sink) {
  LlnOptions o;
  o.regime = make_regime(a.regime, a.nu, a.k2);
  o.x = a.x.empty() ? default_lln_base(o.regime.kind) : a.x;
  o.y = a.y;
  o.kappas = a.kappas;
  o.n_paths = common.paths > 0 ? common.paths : 100;
  o.t = a.t;
  o.dt = a.dt;
  o.seed = common.seed;
  const LlnReport r = lln_rate_experiment(o);

  if (common.format == "csv") {
    std::string text = "kappa,median_scaled,q10_scaled,q90_scaled,median_absolute,exited\n";
    for (const auto& l : r.levels) {
      text += format_number(l.kappa) + "," + format_number(l.median_scaled) + "," +
              format_number(l.q10_scaled) + "," + format_number(l.q90_scaled) + "," +
              format_number(l.median_absolute) + "," + std::to_string(l.exited) + "\n";
    }
    sink.emit("lln.csv", text);
    return;
  }
  json levels = json::array();
  for (const auto& l : r.levels) {
    levels.push_back(json{{"kappa", l.kappa},
                          {"median_sup_error_scaled", l.median_scaled},
                          {"q10_sup_error_scaled", l.q10_scaled},
                          {"q90_sup_error_scaled", l.q90_scaled},
                          {"median_sup_error_absolute", l.median_absolute},
                          {"exited", l.exited}});
  }
  json j{{"schema_version", kSchemaVersion},
         {"regime", a.regime},
         {"x", number_array(o.x)},
         {"y", number_array(o.y.empty() ? Vec(o.x.size(), 0.0) : o.y)},
         {"t", o.t},
         {"dt", o.dt},
         {"paths", o.n_paths},
         {"seed", o.seed},
         {"levels", levels}};
  if (r.slope) j["slope"] = *r.slope;
  sink.emit("lln.json", dump(j));
}

// -- clt ---------------------------------------------------------------------

void cmd_clt(const std::string& config_path, const Common& common, const Sink& sink) {
  CltOptions o;
  if (!config_path.empty()) {
    const KeyValueConfig c = KeyValueConfig::load(config_path);
    o.x = c.get_vector("x", o.x);
    o.k1 = c.get_double("k1", o.k1);
    o.k2 = c.get_double("k2", o.k2);
    o.t = c.get_double("t", o.t);
    o.n_paths = static_cast<std::size_t>(c.get_int("paths", static_cast<std::int64_t>(o.n_paths)));
    o.dt = c.get_double("dt", o.dt);
    o.seed = c.get_u64("seed", o.seed);
    if (const auto unused = c.unused_keys(); !unused.empty()) {
      throw Error(ErrorCode::ConfigInvalid, "unknown key '" + unused.front() + "'");
    }
  }
  if (common.seed_given) o.seed = common.seed;
  if (common.paths > 0) o.n_paths = common.paths;
  const CltReport r = clt_b2_experiment(o);

  if (common.format == "csv") {
    sink.emit("clt.csv", [&] {
      std::string text = coordinate_header(r.centered.dim, "path");
      for (std::size_t s = 0; s < r.centered.size(); ++s) {
        text += std::to_string(s);
        for (std::size_t i = 0; i < r.centered.dim; ++i) text += "," + format_number(r.centered.at(s, i));
        text += "\n";
      }
      return text;
    }());
    return;
  }
  json coords = json::array();
  for (std::size_t i = 0; i < r.coordinates.size(); ++i) {
    const auto& c = r.coordinates[i];
    coords.push_back(json{{"coordinate", i + 1},
                          {"mean", c.mean},
                          {"variance", c.variance},
                          {"predicted_variance", c.predicted_variance},
                          {"variance_ratio", c.variance_ratio},
                          {"ks_demeaned", ks_json(c.ks_demeaned)},
                          {"ks_raw", ks_json(c.ks_raw)}});
  }
  json j{{"schema_version", kSchemaVersion},
         {"x", number_array(o.x)},
         {"k1", o.k1},
         {"k2", o.k2},
         {"t", o.t},
         {"dt", o.dt},
         {"paths", o.n_paths},
         {"seed", o.seed},
         {"centering", number_array(r.centering)},
         {"predicted_mean", number_array(r.prediction.mean)},
         {"predicted_variance", number_array(r.prediction.variance_diag)},
         {"exited", r.exited},
         {"coordinates", coords}};
  sink.emit("clt.json", dump(j));
}

// -- figure 1 ----------------------------------------------------------------

void cmd_figure1(const Common& common, const Sink& sink) {
  Figure1Options o;
  if (common.paths > 0) o.n_paths = common.paths;
  const Figure1Report r = figure1_experiment(common.seed, o);

  std::string summary = "t,k1,coordinate,mean,variance,predicted_variance,paths,exited\n";
  std::string hist = "t,k1,coordinate,bin_center,count\n";
  for (const auto& p : r.panels) {
    const std::string key = format_number(p.t) + "," + format_number(p.k1) + "," +
                            std::to_string(p.coordinate + 1);
    summary += key + "," + format_number(p.mean) + "," + format_number(p.variance) + "," +
               format_number(p.predicted_variance) + "," + std::to_string(p.n_paths) + "," +
               std::to_string(p.exited) + "\n";
    for (std::size_t b = 0; b < Histogram::kBins; ++b) {
      hist += key + "," + format_number(Histogram::center(b)) + "," +
              std::to_string(p.histogram.counts[b]) + "\n";
    }
  }
  sink.emit("figure1_summary.csv", summary);
  if (sink.to_directory()) sink.emit("figure1_histograms.csv", hist);
}

// -- oracle ------------------------------------------------------------------

struct OracleArgs {
  std::string kind = "wishart";
  int p = 11;
  int n = 2;
  int d = 1;
  std::vector<double> x0 = {2.0, 1.0};
  double x_tilde = 1.0;
  double t = 1.0;
  double dt = 1e-3;
  std::optional<double> k1;
  std::optional<double> k2;
};

void cmd_oracle(const OracleArgs& a, const Common& common, const Sink& sink) {
  const std::size_t n = common.paths > 0 ? common.paths : 2000;
  OracleComparison cmp;
  json j{{"schema_version", kSchemaVersion}, {"kind", a.kind}};
  if (a.kind == "wishart") {
    if (a.p < a.n) throw Error(ErrorCode::ShapeError, "p must be >= N");
    if (a.x0.size() != static_cast<std::size_t>(a.n)) {
      throw Error(ErrorCode::ShapeError, "--x0 must have N entries");
    }
    std::optional<Multiplicity> mult;
    if (a.k1 || a.k2) {
      const auto m = wishart_multiplicity(a.p, a.n, a.d);
      mult = Multiplicity::b(a.k1.value_or(m[0]), a.k2.value_or(m[1]));
    }
    cmp = compare_wishart_to_sde(a.p, a.n, a.d, a.x0, a.t, n, common.seed, mult, a.dt);
    j["p"] = a.p;
    j["n"] = a.n;
    j["d"] = a.d;
    j["x0"] = number_array(a.x0);
  } else {
    cmp = compare_chisq_to_sde(a.d, a.x_tilde, a.t, n, common.seed, a.dt);
    j["d"] = a.d;
    j["x_tilde"] = a.x_tilde;
  }
  j["t"] = a.t;
  j["dt"] = a.dt;
  j["samples"] = n;
  j["seed"] = common.seed;
  j["k1"] = cmp.mult.k1;
  j["k2"] = cmp.mult.k2;
  j["sde_exited"] = cmp.exited;
  json ks = json::array();
  for (std::size_t i = 0; i < cmp.ks.size(); ++i) {
    json e = ks_json(cmp.ks[i]);
    e["coordinate"] = i + 1;
    const Vec oc = cmp.oracle.column(i);
    const Vec sc = cmp.sde.column(i);
    e["oracle_mean"] = sample_moments(oc).mean;
    e["sde_mean"] = sample_moments(sc).mean;
    ks.push_back(e);
  }
  j["ks"] = ks;

  if (common.format == "csv") {
    std::string text = "coordinate,statistic,critical_1pct,passes\n";
    for (std::size_t i = 0; i < cmp.ks.size(); ++i) {
      text += std::to_string(i + 1) + "," + format_number(cmp.ks[i].statistic) + "," +
              format_number(cmp.ks[i].critical_1pct) + "," + (cmp.ks[i].passes() ? "true" : "false") +
              "\n";
    }
    sink.emit("oracle.csv", text);
    return;
  }
  sink.emit("oracle.json", dump(j));
}

}  // namespace

SimulateJob simulate_job_from_config(const KeyValueConfig& config) {
  SimulateJob job;
  SimConfig& cfg = job.cfg;
  KeyValueConfig& r = job.resolved;

  const std::string root = config.get_string("root");
  cfg.spec.kind = parse_root_kind(root);
  cfg.start = config.get_vector("start");
  cfg.spec.n = static_cast<int>(config.get_int("n", static_cast<std::int64_t>(cfg.start.size())));
  r.set("root", std::string(to_string(cfg.spec.kind)));
  r.set("n", std::to_string(cfg.spec.n));
  r.set("start", join_numbers(cfg.start));

  if (cfg.spec.kind == RootKind::B) {
    cfg.mult = Multiplicity::b(config.get_double("k1"), config.get_double("k2"));
    r.set("k1", format_number(cfg.mult.k1));
    r.set("k2", format_number(cfg.mult.k2));
  } else {
    const double k = config.get_double("k");
    cfg.mult = cfg.spec.kind == RootKind::A ? Multiplicity::a(k) : Multiplicity::d(k);
    r.set("k", format_number(k));
  }

  if (config.has("regime")) {
    const std::string kind = config.get_string("regime");
    std::optional<double> nu;
    if (config.has("nu")) nu = config.get_double("nu");
    std::optional<double> k2;
    if (cfg.spec.kind == RootKind::B) k2 = cfg.mult.k2;
    cfg.regime = make_regime(kind, nu, k2);
    r.set("regime", std::string(to_string(cfg.regime->kind)));
    if (cfg.regime->kind == FreezingRegime::Kind::B_beta) r.set("nu", format_number(cfg.regime->nu));
  }

  cfg.horizon = config.get_double("horizon", 1.0);
  cfg.dt = config.get_double("dt", 1e-3);
  cfg.seed = config.get_u64("seed", 1);
  const std::int64_t paths = config.get_int("paths", 1);
  if (paths < 1) throw Error(ErrorCode::ConfigInvalid, "paths must be >= 1");
  cfg.n_paths = static_cast<std::size_t>(paths);
  const std::int64_t stride = config.get_int("record_stride", 1);
  if (stride < 1) throw Error(ErrorCode::ConfigInvalid, "record_stride must be >= 1");
  cfg.record_stride = static_cast<std::size_t>(stride);
  cfg.zero_noise = config.get_bool("zero_noise", false);
  if (config.has("guard_eps")) cfg.guard_eps = config.get_double("guard_eps");
  if (config.has("kappa")) job.kappa = config.get_double("kappa");
  const std::string output = config.get_string("output", "long");
  if (output != "long" && output != "per_path") {
    throw Error(ErrorCode::ConfigInvalid, "output must be 'long' or 'per_path'");
  }
  job.long_format = output == "long";

  if (const auto unused = config.unused_keys(); !unused.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "unknown key '" + unused.front() + "'");
  }
  if (job.kappa && !(*job.kappa > 0.0)) throw Error(ErrorCode::ConfigInvalid, "kappa must be positive");
  cfg.validate();

  r.set("horizon", format_number(cfg.horizon));
  r.set("dt", format_number(cfg.dt));
  r.set("seed", std::to_string(cfg.seed));
  r.set("paths", std::to_string(cfg.n_paths));
  r.set("record_stride", std::to_string(cfg.record_stride));
  r.set("zero_noise", cfg.zero_noise ? "true" : "false");
  r.set("guard_eps", format_number(cfg.resolved_guard()));
  if (job.kappa) r.set("kappa", format_number(*job.kappa));
  r.set("output", output);
  return job;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Freezing limits of multivariate Bessel processes", "bessel_freeze"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));

  Common common;
  auto* seed_opt = app.add_option("--seed", common.seed, "Master seed");
  app.add_option("--out", common.out_dir, "Output directory (default: stdout)");
  app.add_option("--paths", common.paths, "Number of paths or samples");
  auto* format_opt = app.add_option("--format", common.format, "Output format")
                         ->check(CLI::IsMember({"csv", "json"}));

  ZerosArgs zeros;
  auto* zeros_cmd = app.add_subcommand("zeros", "Hermite or Laguerre polynomial zeros");
  zeros_cmd->add_option("--kind", zeros.kind)->check(CLI::IsMember({"hermite", "laguerre"}));
  zeros_cmd->add_option("--n", zeros.n)->required();
  zeros_cmd->add_option("--alpha", zeros.alpha);

  FixedPointArgs fixed;
  auto* fixed_cmd = app.add_subcommand("fixed-point", "Frozen fixed point of a root system");
  fixed_cmd->add_option("--system", fixed.system)->check(CLI::IsMember({"A", "B", "D"}));
  fixed_cmd->add_option("--n", fixed.n)->required();
  fixed_cmd->add_option("--nu", fixed.nu);

  FreezeArgs freeze;
  auto* freeze_cmd = app.add_subcommand("freeze", "Integrate the frozen ODE");
  freeze_cmd->add_option("--regime", freeze.regime);
  freeze_cmd->add_option("--n", freeze.n);
  freeze_cmd->add_option("--nu", freeze.nu);
  freeze_cmd->add_option("--x0", freeze.x0)->required()->delimiter(',');
  freeze_cmd->add_option("--t-max", freeze.t_max);
  freeze_cmd->add_option("--steps", freeze.steps)->check(CLI::PositiveNumber);
  freeze_cmd->add_option("--grid", freeze.grid)->delimiter(',');

  std::string sim_config;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate SDE paths from a config file");
  sim_cmd->add_option("config", sim_config)->required();

  LlnArgs lln;
  auto* lln_cmd = app.add_subcommand("lln", "Law-of-large-numbers rate experiment");
  lln_cmd->add_option("--regime", lln.regime);
  lln_cmd->add_option("--nu", lln.nu);
  lln_cmd->add_option("--k2", lln.k2);
  lln_cmd->add_option("--x", lln.x)->delimiter(',');
  lln_cmd->add_option("--y", lln.y)->delimiter(',');
  lln_cmd->add_option("--kappas", lln.kappas)->delimiter(',');
  lln_cmd->add_option("--t", lln.t);
  lln_cmd->add_option("--dt", lln.dt);

  std::string clt_config;
  auto* clt_cmd = app.add_subcommand("clt", "Type-B central limit experiment");
  clt_cmd->add_option("--config", clt_config);

  auto* fig_cmd = app.add_subcommand("figure1", "Data for the six CLT histogram panels");

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Compare an exact oracle with SDE paths");
  oracle_cmd->add_option("--kind", oracle.kind)->check(CLI::IsMember({"wishart", "chisq1d"}));
  oracle_cmd->add_option("--p", oracle.p);
  oracle_cmd->add_option("--n", oracle.n);
  oracle_cmd->add_option("--d", oracle.d);
  oracle_cmd->add_option("--x0", oracle.x0)->delimiter(',');
  oracle_cmd->add_option("--x-tilde", oracle.x_tilde);
  oracle_cmd->add_option("--t", oracle.t);
  oracle_cmd->add_option("--dt", oracle.dt);
  oracle_cmd->add_option("--k1", oracle.k1);
  oracle_cmd->add_option("--k2", oracle.k2);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error USAGE: " << e.what() << "\n";
    return kUsage;
  }
  common.seed_given = seed_opt->count() > 0;
  common.format_given = format_opt->count() > 0;

  const Sink sink(common, out);
  try {
    if (zeros_cmd->parsed()) {
      if (!common.format_given) common.format = "csv";
      cmd_zeros(zeros, common, sink);
    } else if (fixed_cmd->parsed()) {
      cmd_fixed_point(fixed, common, sink);
    } else if (freeze_cmd->parsed()) {
      if (!common.format_given) common.format = "csv";
      cmd_freeze(freeze, common, sink);
    } else if (sim_cmd->parsed()) {
      simulate_cmd(sim_config, common, sink);
    } else if (lln_cmd->parsed()) {
      cmd_lln(lln, common, sink);
    } else if (clt_cmd->parsed()) {
      cmd_clt(clt_config, common, sink);
    } else if (fig_cmd->parsed()) {
      cmd_figure1(common, sink);
    } else if (oracle_cmd->parsed()) {
      cmd_oracle(oracle, common, sink);
    }
  } catch (const Error& e) {
    err << "error " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error INTERNAL: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kOk;
}

}  // namespace bessel::cli

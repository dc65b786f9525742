#include "deming/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "deming/error.hpp"
#include "deming/fit_io.hpp"
#include "deming/pipeline.hpp"
#include "deming/simulation.hpp"

namespace deming::cli {

namespace {

constexpr const char* kVersion = "1.0.0";

constexpr const char* kExitCodes =
    "Exit codes:\n"
    "  0  success\n"
    "  1  unexpected internal failure\n"
    "  2  usage error (unknown flag, bad option value, inconsistent request)\n"
    "  3  file could not be read or written\n"
    "  4  malformed CSV/JSON input\n"
    "  5  validation error (negative variance, non-positive weight, ...)\n"
    "  6  insufficient data (fewer than 3 observations)\n"
    "  7  degenerate fit (all x equal, zero cross-product, ...)\n"
    "  8  estimator did not converge\n"
    "  9  singular weights (var_x = var_y = 0 in Scenario B)\n"
    " 10  value outside the transform domain\n"
    " 11  singular likelihood (zero total error variance)\n";

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json metadata() {
  Json m;
  m["tool"] = "deming";
  m["version"] = kVersion;
  m["timestamp"] = utc_timestamp();
  return m;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  return f;
}

void write_text(const std::string& path, const std::string& text,
                std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  auto f = open_out(path);
  f << text;
  if (!f) throw Error(ErrorKind::io, "failed writing '" + path + "'");
}

Json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, "'" + path + "': " + e.what());
  }
}

std::string f64(double v) {
  if (std::isnan(v)) return "nan";
  return format_double(v);
}

struct TransformArgs {
  std::string kind_x = "identity";
  std::string kind_y = "identity";
  double scale_x = 1.0;
  double scale_y = 1.0;
  double exponent_x = 1.0;
  double exponent_y = 1.0;

  void add(CLI::App* app) {
    app->add_option("--transform-x", kind_x, "identity|log|logit|power")
        ->capture_default_str();
    app->add_option("--transform-y", kind_y, "identity|log|logit|power")
        ->capture_default_str();
    app->add_option("--scale-x", scale_x, "pre-multiplier applied to z")
        ->capture_default_str();
    app->add_option("--scale-y", scale_y, "pre-multiplier applied to w")
        ->capture_default_str();
    app->add_option("--exponent-x", exponent_x, "exponent for power transform")
        ->capture_default_str();
    app->add_option("--exponent-y", exponent_y, "exponent for power transform")
        ->capture_default_str();
  }

  Json to_json() const {
    return Json{{"transform_x", kind_x}, {"scale_x", scale_x},
                {"exponent_x", exponent_x}, {"transform_y", kind_y},
                {"scale_y", scale_y}, {"exponent_y", exponent_y}};
  }
};

struct SimArgs {
  std::size_t n = 300;
  double beta0 = 0.0;
  double beta1 = 1.0;
  std::string x_dist = "uniform";
  double x_a = 0.0;
  double x_b = 1.0;
  std::string var_x_law = "constant";
  double var_x = 0.0;
  double var_x_hi = 0.0;
  std::string var_y_law = "constant";
  double var_y = 0.0;
  double var_y_hi = 0.0;
  double sigma2 = 0.0;
  double lambda = 1.0;
  int weight_lo = 1;
  int weight_hi = 1;
  std::uint64_t seed = 7;

  void add(CLI::App* app) {
    app->add_option("--n", n, "observations per dataset")->capture_default_str();
    app->add_option("--beta0", beta0, "true intercept")->capture_default_str();
    app->add_option("--beta1", beta1, "true slope")->capture_default_str();
    app->add_option("--x-dist", x_dist, "uniform|normal law of true X")
        ->check(CLI::IsMember({"uniform", "normal"}))
        ->capture_default_str();
    app->add_option("--x-a", x_a, "uniform lower bound or normal mean")
        ->capture_default_str();
    app->add_option("--x-b", x_b, "uniform upper bound or normal sd")
        ->capture_default_str();
    app->add_option("--var-x-law", var_x_law, "constant|uniform|proportional")
        ->check(CLI::IsMember({"constant", "uniform", "proportional"}))
        ->capture_default_str();
    app->add_option("--var-x", var_x, "known var_x (value, range low or factor)")
        ->capture_default_str();
    app->add_option("--var-x-hi", var_x_hi, "range high for uniform var_x")
        ->capture_default_str();
    app->add_option("--var-y-law", var_y_law, "constant|uniform|proportional")
        ->check(CLI::IsMember({"constant", "uniform", "proportional"}))
        ->capture_default_str();
    app->add_option("--var-y", var_y, "known var_y (value, range low or factor)")
        ->capture_default_str();
    app->add_option("--var-y-hi", var_y_hi, "range high for uniform var_y")
        ->capture_default_str();
    app->add_option("--sigma2", sigma2, "extra unknown x-error variance")
        ->capture_default_str();
    app->add_option("--lambda", lambda, "Var(x error)/Var(y error) of the extra errors")
        ->capture_default_str();
    app->add_option("--weight-lo", weight_lo, "smallest group weight")
        ->capture_default_str();
    app->add_option("--weight-hi", weight_hi, "largest group weight")
        ->capture_default_str();
    app->add_option("--seed", seed, "random seed")->capture_default_str();
  }

  static VarianceLaw law(const std::string& kind, double a, double b) {
    VarianceLaw l;
    l.a = a;
    l.b = b;
    if (kind == "uniform") l.kind = VarianceLaw::Kind::uniform_range;
    if (kind == "proportional") l.kind = VarianceLaw::Kind::proportional;
    return l;
  }

  SimulationSpec spec() const {
    SimulationSpec s;
    s.n = n;
    s.beta0 = beta0;
    s.beta1 = beta1;
    s.x_law.kind = x_dist == "normal" ? XLaw::Kind::normal : XLaw::Kind::uniform;
    s.x_law.a = x_a;
    s.x_law.b = x_b;
    s.var_x_law = law(var_x_law, var_x, var_x_hi);
    s.var_y_law = law(var_y_law, var_y, var_y_hi);
    s.sigma2 = sigma2;
    s.lambda = lambda;
    s.weight_law.lo = weight_lo;
    s.weight_law.hi = weight_hi;
    s.weight_law.kind = weight_hi > weight_lo ? WeightLaw::Kind::integer_uniform
                                              : WeightLaw::Kind::constant;
    s.seed = seed;
    return s;
  }

  Json to_json() const {
    return Json{{"n", n},           {"beta0", beta0},         {"beta1", beta1},
                {"x_dist", x_dist}, {"x_a", x_a},             {"x_b", x_b},
                {"var_x_law", var_x_law}, {"var_x", var_x},   {"var_x_hi", var_x_hi},
                {"var_y_law", var_y_law}, {"var_y", var_y},   {"var_y_hi", var_y_hi},
                {"sigma2", sigma2}, {"lambda", lambda},       {"weight_lo", weight_lo},
                {"weight_hi", weight_hi}, {"seed", seed}};
  }
};

Json argv_json(int argc, const char* const* argv) {
  Json a = Json::array();
  for (int i = 1; i < argc; ++i) a.push_back(argv[i]);
  return a;
}

void write_plot_csv(const std::string& path, const FitOutcome& o) {
  std::ostringstream s;
  s << "x,y,sd_x,sd_y,weight,y_fit,y_fit_wls,z,w,w_fit\n";
  for (const auto& r : o.plot) {
    s << f64(r.x) << ',' << f64(r.y) << ',' << f64(r.sd_x) << ',' << f64(r.sd_y)
      << ',' << f64(r.weight) << ',' << f64(r.y_fit) << ',' << f64(r.y_fit_wls)
      << ',' << f64(r.z) << ',' << f64(r.w) << ',' << f64(r.w_fit) << '\n';
  }
  auto f = open_out(path);
  f << s.str();
}

std::string default_plot_path(const std::string& out) {
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return out.substr(0, dot) + ".plot.csv";
  }
  return out + ".plot.csv";
}

void require_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorKind::usage, "--level must lie in (0, 1)");
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-stage Deming regression toolkit"};
  app.footer(kExitCodes);
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "fit a second-stage Deming model");
  std::string fit_input, fit_out, fit_plot;
  TransformArgs fit_tr;
  std::string fit_scenario = "auto";
  double fit_lambda = 1.0, r_low = 0.1, r_high = 0.8, fit_level = 0.95;
  int fit_boot = 0;
  std::uint64_t fit_seed = 42;
  bool fit_weighted = false, fit_serial = false;
  fit_cmd->add_option("--input", fit_input, "CSV with x,y,var_x,var_y[,weight] or z,w,var_z,var_w[,weight]")
      ->required();
  fit_cmd->add_option("--out", fit_out, "fit artifact (JSON)")->required();
  fit_cmd->add_option("--plot-data", fit_plot, "plot CSV (default <out>.plot.csv)");
  fit_tr.add(fit_cmd);
  fit_cmd->add_option("--scenario", fit_scenario, "auto|A|B|C")
      ->check(CLI::IsMember({"auto", "A", "B", "C"}))
      ->capture_default_str();
  fit_cmd->add_option("--lambda", fit_lambda, "Var(x error)/Var(y error)")
      ->capture_default_str();
  fit_cmd->add_option("--r-low", r_low, "r below this selects A")->capture_default_str();
  fit_cmd->add_option("--r-high", r_high, "r at or above this selects B")
      ->capture_default_str();
  fit_cmd->add_option("--bootstrap", fit_boot, "bootstrap replicates for CIs (0 = off)")
      ->capture_default_str();
  fit_cmd->add_option("--seed", fit_seed, "bootstrap seed")->capture_default_str();
  fit_cmd->add_option("--level", fit_level, "confidence level")->capture_default_str();
  fit_cmd->add_flag("--weighted-resample", fit_weighted,
                    "resample rows with probability proportional to weight");
  fit_cmd->add_flag("--serial", fit_serial, "use the serial replicate loop");

  // predict
  auto* pred_cmd = app.add_subcommand("predict", "prediction intervals from a fit artifact");
  std::string pred_fit, pred_input, pred_out = "-", pred_mode = "individual",
                                    pred_model = "deming", pred_summary = "mean";
  double pred_level = 0.95;
  pred_cmd->add_option("--fit", pred_fit, "fit artifact (JSON)")->required();
  pred_cmd->add_option("--input", pred_input, "CSV with x[,var_x,var_y,weight]")->required();
  pred_cmd->add_option("--out", pred_out, "PI CSV ('-' = stdout)")->capture_default_str();
  pred_cmd->add_option("--level", pred_level, "confidence level")->capture_default_str();
  pred_cmd->add_option("--pi-mode", pred_mode, "individual|mean|mse")
      ->check(CLI::IsMember({"individual", "mean", "mse"}))
      ->capture_default_str();
  pred_cmd->add_option("--model", pred_model, "deming|wls")
      ->check(CLI::IsMember({"deming", "wls"}))
      ->capture_default_str();
  pred_cmd->add_option("--sd-summary", pred_summary, "mean|median for --pi-mode mean")
      ->check(CLI::IsMember({"mean", "median"}))
      ->capture_default_str();

  // bootstrap
  auto* boot_cmd = app.add_subcommand("bootstrap", "percentile bootstrap of an estimator");
  std::string boot_input, boot_out, boot_scenario = "B";
  TransformArgs boot_tr;
  double boot_lambda = 1.0, boot_level = 0.95;
  int boot_B = 200;
  std::uint64_t boot_seed = 42;
  bool boot_weighted = false, boot_serial = false;
  boot_cmd->add_option("--input", boot_input, "input CSV")->required();
  boot_cmd->add_option("--out", boot_out, "bootstrap artifact (JSON)")->required();
  boot_tr.add(boot_cmd);
  boot_cmd->add_option("--scenario", boot_scenario, "A|B|C|WLS")
      ->check(CLI::IsMember({"A", "B", "C", "WLS"}))
      ->capture_default_str();
  boot_cmd->add_option("--lambda", boot_lambda, "Var(x error)/Var(y error)")
      ->capture_default_str();
  boot_cmd->add_option("-B,--B", boot_B, "replicates")->capture_default_str();
  boot_cmd->add_option("--seed", boot_seed, "seed")->capture_default_str();
  boot_cmd->add_option("--level", boot_level, "confidence level")->capture_default_str();
  boot_cmd->add_flag("--weighted-resample", boot_weighted,
                     "resample rows with probability proportional to weight");
  boot_cmd->add_flag("--serial", boot_serial, "use the serial replicate loop");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic dataset");
  SimArgs sim;
  std::string sim_out, sim_truth;
  sim.add(sim_cmd);
  sim_cmd->add_option("--out", sim_out, "dataset CSV")->required();
  sim_cmd->add_option("--truth", sim_truth, "optional CSV of true X,Y");

  // coverage
  auto* cov_cmd = app.add_subcommand("coverage", "bootstrap CI coverage study");
  SimArgs cov_sim;
  std::string cov_out, cov_estimates, cov_scenario = "B";
  int cov_reps = 200, cov_B = 200;
  double cov_level = 0.95, cov_fit_lambda = 1.0;
  bool cov_no_wls = false, cov_serial = false;
  cov_sim.add(cov_cmd);
  cov_cmd->add_option("--replicates", cov_reps, "simulated datasets")->capture_default_str();
  cov_cmd->add_option("-B,--B", cov_B, "bootstrap replicates per dataset")
      ->capture_default_str();
  cov_cmd->add_option("--level", cov_level, "confidence level")->capture_default_str();
  cov_cmd->add_option("--scenario", cov_scenario, "A|B|C estimator")
      ->check(CLI::IsMember({"A", "B", "C"}))
      ->capture_default_str();
  cov_cmd->add_option("--fit-lambda", cov_fit_lambda, "lambda used by the A/C estimator")
      ->capture_default_str();
  cov_cmd->add_flag("--no-wls", cov_no_wls, "skip the WLS baseline");
  cov_cmd->add_flag("--serial", cov_serial, "use the serial replicate loop");
  cov_cmd->add_option("--out", cov_out, "report (JSON)")->required();
  cov_cmd->add_option("--estimates", cov_estimates, "per-replicate CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : exit_code(ErrorKind::usage);
  }

  try {
    const Json args = argv_json(argc, argv);
    if (*fit_cmd) {
      require_level(fit_level);
      if (!(r_low >= 0.0 && r_low < r_high)) {
        throw Error(ErrorKind::usage, "need 0 <= --r-low < --r-high");
      }
      if (fit_boot != 0 && fit_boot < 50) {
        throw Error(ErrorKind::usage, "--bootstrap needs 0 or at least 50 replicates");
      }
      const auto input = load_input(
          fit_input, make_transform(fit_tr.kind_x, fit_tr.scale_x, fit_tr.exponent_x),
          make_transform(fit_tr.kind_y, fit_tr.scale_y, fit_tr.exponent_y));
      FitConfig cfg;
      if (fit_scenario != "auto") cfg.scenario = parse_scenario(fit_scenario);
      cfg.lambda = fit_lambda;
      cfg.thresholds = {r_low, r_high};
      cfg.bootstrap = fit_boot;
      cfg.seed = fit_seed;
      cfg.level = fit_level;
      cfg.weighted_resample = fit_weighted;
      cfg.policy = fit_serial ? ExecPolicy::serial : ExecPolicy::parallel;
      const auto outcome = run_fit(input, cfg);

      const std::string plot_path = fit_plot.empty() ? default_plot_path(fit_out) : fit_plot;
      Json j = to_json(outcome.fit);
      j["error_profile"] = to_json(outcome.profile);
      j["selection"] = to_json(outcome.selection);
      j["scenario_b_prefit"] =
          outcome.scenario_b_prefit ? to_json(*outcome.scenario_b_prefit) : Json(nullptr);
      j["bootstrap"] = outcome.bootstrap ? to_json(*outcome.bootstrap, false) : Json(nullptr);
      j["wls_baseline"] = outcome.wls ? to_json(*outcome.wls) : Json(nullptr);
      Json config{{"command", "fit"},
                  {"input", fit_input},
                  {"out", fit_out},
                  {"plot_data", plot_path},
                  {"scenario", fit_scenario},
                  {"lambda", fit_lambda},
                  {"r_low", r_low},
                  {"r_high", r_high},
                  {"bootstrap", fit_boot},
                  {"seed", fit_seed},
                  {"level", fit_level},
                  {"weighted_resample", fit_weighted}};
      config.update(fit_tr.to_json());
      config["argv"] = args;
      j["config"] = config;
      j["metadata"] = metadata();
      write_plot_csv(plot_path, outcome);
      write_text(fit_out, dump_artifact(j), out);
      return 0;
    }

    if (*pred_cmd) {
      require_level(pred_level);
      const Json art = read_json(pred_fit);
      DemingFit fit;
      if (pred_model == "wls") {
        if (!art.contains("wls_baseline") || art["wls_baseline"].is_null()) {
          throw Error(ErrorKind::usage, "fit artifact has no WLS baseline");
        }
        fit = fit_from_json(art["wls_baseline"]);
      } else {
        fit = fit_from_json(art);
      }
      if (!art.contains("error_profile")) {
        throw Error(ErrorKind::parse, "fit artifact is missing 'error_profile'");
      }
      const auto profile = error_profile_from_json(art["error_profile"]);
      const auto mode = parse_pi_mode(pred_mode);
      const auto summary = pred_summary == "median" ? SdSummary::median : SdSummary::mean;

      std::ifstream f(pred_input);
      if (!f) throw Error(ErrorKind::io, "cannot open '" + pred_input + "'");
      const auto table = read_csv(f);
      const auto cx = table.column("x");
      if (!cx) throw Error(ErrorKind::parse, "prediction input needs an x column");
      const auto cvx = table.column("var_x");
      const auto cvy = table.column("var_y");
      const auto cw = table.column("weight");
      const bool needs_vars = mode == PiMode::individual && fit.scenario != Scenario::A;
      if (needs_vars && (!cvy || (fit.scenario != Scenario::wls && !cvx))) {
        throw Error(ErrorKind::usage,
                    "individual PI mode needs var_x and var_y columns in the input");
      }
      std::ostringstream s;
      s << "x_new,y_hat,var_y_new,lower,upper\n";
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const double w = cw ? row[*cw] : 1.0;
        const double vx = cvx ? row[*cvx] : 0.0;
        const double vy = cvy ? row[*cvy] : 0.0;
        validate(Observation{row[*cx], 0.0, vx, vy, w}, i);
        const auto [vx_new, vey] =
            prediction_inputs(fit, mode, profile, summary, vx / w, vy / w, w);
        const auto pi = prediction_interval(fit, fit.cov_params, row[*cx], vx_new, vey,
                                            pred_level, fit.n, mode);
        s << f64(pi.x_new) << ',' << f64(pi.y_hat) << ',' << f64(pi.var_y_new) << ','
          << f64(pi.lower) << ',' << f64(pi.upper) << '\n';
      }
      write_text(pred_out, s.str(), out);
      return 0;
    }

    if (*boot_cmd) {
      const auto input = load_input(
          boot_input, make_transform(boot_tr.kind_x, boot_tr.scale_x, boot_tr.exponent_x),
          make_transform(boot_tr.kind_y, boot_tr.scale_y, boot_tr.exponent_y));
      BootstrapOptions opt;
      opt.replicates = boot_B;
      opt.seed = boot_seed;
      opt.level = boot_level;
      opt.weighted_resample = boot_weighted;
      opt.policy = boot_serial ? ExecPolicy::serial : ExecPolicy::parallel;
      const EstimatorSpec est{parse_scenario(boot_scenario), boot_lambda};
      const auto point = fit_estimator(input.data, est);
      const auto res = bootstrap_fit(input.data, est, opt);
      Json j;
      j["estimate"] = to_json(point);
      j["bootstrap"] = to_json(res, true);
      Json config{{"command", "bootstrap"}, {"input", boot_input},   {"out", boot_out},
                  {"scenario", boot_scenario}, {"lambda", boot_lambda}, {"B", boot_B},
                  {"seed", boot_seed},         {"level", boot_level},
                  {"weighted_resample", boot_weighted}};
      config.update(boot_tr.to_json());
      config["argv"] = args;
      j["config"] = config;
      j["metadata"] = metadata();
      write_text(boot_out, dump_artifact(j), out);
      return 0;
    }

    if (*sim_cmd) {
      const auto data = generate_dataset(sim.spec());
      std::ostringstream s;
      write_dataset(s, data.dataset);
      write_text(sim_out, s.str(), out);
      if (!sim_truth.empty()) {
        std::ostringstream t;
        t << "X,Y\n";
        for (std::size_t i = 0; i < data.X.size(); ++i) {
          t << f64(data.X[i]) << ',' << f64(data.Y[i]) << '\n';
        }
        write_text(sim_truth, t.str(), out);
      }
      return 0;
    }

    if (*cov_cmd) {
      require_level(cov_level);
      CoverageConfig cfg;
      cfg.estimator = {parse_scenario(cov_scenario), cov_fit_lambda};
      cfg.replicates = cov_reps;
      cfg.bootstrap = cov_B;
      cfg.level = cov_level;
      cfg.include_wls = !cov_no_wls;
      cfg.policy = cov_serial ? ExecPolicy::serial : ExecPolicy::parallel;
      const auto report = run_coverage_study(cov_sim.spec(), cfg);
      Json j = to_json(report);
      Json config{{"command", "coverage"}, {"replicates", cov_reps}, {"B", cov_B},
                  {"level", cov_level},     {"scenario", cov_scenario},
                  {"fit_lambda", cov_fit_lambda}, {"include_wls", !cov_no_wls},
                  {"out", cov_out},         {"estimates", cov_estimates}};
      config["simulation"] = cov_sim.to_json();
      config["argv"] = args;
      j["config"] = config;
      j["metadata"] = metadata();
      write_text(cov_out, dump_artifact(j), out);
      if (!cov_estimates.empty()) {
        std::ostringstream s;
        s << "replicate,deming_ok,deming_beta0,deming_beta1,deming_ci_beta0_lo,"
             "deming_ci_beta0_hi,deming_ci_beta1_lo,deming_ci_beta1_hi,wls_ok,wls_beta0,"
             "wls_beta1,wls_ci_beta0_lo,wls_ci_beta0_hi,wls_ci_beta1_lo,wls_ci_beta1_hi\n";
        for (const auto& r : report.replicates) {
          s << r.replicate << ',' << (r.deming_ok ? 1 : 0) << ',' << f64(r.deming_beta0)
            << ',' << f64(r.deming_beta1) << ',' << f64(r.deming_ci_beta0.first) << ','
            << f64(r.deming_ci_beta0.second) << ',' << f64(r.deming_ci_beta1.first) << ','
            << f64(r.deming_ci_beta1.second) << ',' << (r.wls_ok ? 1 : 0) << ','
            << f64(r.wls_beta0) << ',' << f64(r.wls_beta1) << ','
            << f64(r.wls_ci_beta0.first) << ',' << f64(r.wls_ci_beta0.second) << ','
            << f64(r.wls_ci_beta1.first) << ',' << f64(r.wls_ci_beta1.second) << '\n';
        }
        write_text(cov_estimates, s.str(), out);
      }
      return 0;
    }
  } catch (const Error& e) {
    Json j{{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
    err << j.dump() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    Json j{{"error", {{"kind", "internal"}, {"message", e.what()}}}};
    err << j.dump() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace deming::cli

#include "acbc/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "acbc/bootstrap.hpp"
#include "acbc/dataset.hpp"
#include "acbc/error.hpp"
#include "acbc/json.hpp"
#include "acbc/parallel.hpp"
#include "acbc/selftest.hpp"
#include "acbc/simulation.hpp"

namespace acbc::cli {
namespace {

std::uint64_t parse_seed(const std::string& text) {
  if (text == "entropy") {
    std::random_device device;
    return (static_cast<std::uint64_t>(device()) << 32) ^ device();
  }
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("--seed must be an unsigned integer or \"entropy\", got \"{}\"", text));
  }
  return value;
}

const std::map<std::string, IntervalKind> kIntervalKinds{
    {"normal", IntervalKind::kNormal}, {"percentile", IntervalKind::kPercentile}};
const std::map<std::string, TbcVariance> kTbcVariances{
    {"shared", TbcVariance::kShared}, {"recompute", TbcVariance::kRecompute}};

struct PipelineFlags {
  int degree = 2;
  double lambda_exponent = 0.85;
  bool no_scale = false;
  bool clamp_ghat = false;
  int bootstrap_reps = 200;
  double alpha = 0.05;
  std::string seed = "0";
  bool without_replacement = false;
  IntervalKind interval = IntervalKind::kNormal;
  TbcVariance tbc_variance = TbcVariance::kShared;
  unsigned threads = 0;

  void attach(CLI::App& app) {
    app.add_option("--degree", degree, "Total degree of the power basis")->capture_default_str();
    app.add_option("--lambda-exponent", lambda_exponent, "c in lambda_n = n^(-c)")
        ->capture_default_str();
    app.add_flag("--no-scale", no_scale, "Do not min-max scale covariates before the basis");
    app.add_flag("--clamp-ghat", clamp_ghat, "Clamp Ghat into [0,1] (experimental)");
    app.add_option("--bootstrap-reps", bootstrap_reps, "Bootstrap replicates (0 disables)")
        ->capture_default_str();
    app.add_option("--alpha", alpha, "Confidence intervals have level 1 - alpha")
        ->capture_default_str();
    app.add_option("--seed", seed, "Unsigned seed, or \"entropy\"")->capture_default_str();
    app.add_flag("--without-replacement", without_replacement,
                 "Draw bootstrap subsamples without replacement");
    app.add_option("--interval", interval, "Interval construction: normal | percentile")
        ->transform(CLI::CheckedTransformer(kIntervalKinds, CLI::ignore_case));
    app.add_option("--tbc-variance", tbc_variance,
                   "Variance of T_bc: shared (T_n bootstrap) | recompute")
        ->transform(CLI::CheckedTransformer(kTbcVariances, CLI::ignore_case));
    app.add_option("--threads", threads, "Worker threads (default: ACBC_THREADS or all cores)");
  }

  PipelineConfig pipeline() const {
    PipelineConfig config;
    config.degree = degree;
    config.lambda_exponent = lambda_exponent;
    config.scale_covariates = !no_scale;
    config.clamp_ghat = clamp_ghat;
    config.threads = resolve_threads(threads);
    config.validate();
    return config;
  }

  void check_bootstrap() const {
    if (bootstrap_reps < 0 || bootstrap_reps == 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("--bootstrap-reps must be 0 or >= 2, got {}", bootstrap_reps));
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, fmt::format("--alpha must lie in (0,1), got {}", alpha));
    }
  }
};

const char* name(IntervalKind k) { return k == IntervalKind::kNormal ? "normal" : "percentile"; }
const char* name(TbcVariance v) { return v == TbcVariance::kShared ? "shared" : "recompute"; }

std::string interval_json(const std::optional<Interval>& ci) {
  if (!ci) return "null";
  return json::array({ci->lo, ci->hi});
}

int cmd_estimate(const PipelineFlags& flags, const std::string& input, const std::string& y_column,
                 std::optional<Index> m, const std::string& output, std::ostream& out) {
  flags.check_bootstrap();
  const Sample sample = load_csv(input, ColumnSelector::parse(y_column));
  const PipelineConfig config = flags.pipeline();
  const std::uint64_t seed = parse_seed(flags.seed);

  EstimateResult result;
  BootstrapOptions boot;
  boot.b_reps = flags.bootstrap_reps;
  boot.m = m;
  boot.seed = seed;
  boot.with_replacement = !flags.without_replacement;
  boot.tbc_variance = flags.tbc_variance;
  boot.threads = config.threads;
  if (flags.bootstrap_reps > 0) {
    result = estimate_with_inference(sample, config, boot, flags.alpha, flags.interval);
  } else {
    result = estimate(sample, config);
  }

  json::Object cfg;
  cfg.add("degree", config.degree)
      .add("lambda_exponent", config.lambda_exponent)
      .add("lambda", result.lambda)
      .add("scale_covariates", config.scale_covariates)
      .add("clamp_ghat", config.clamp_ghat)
      .add("bootstrap_reps", flags.bootstrap_reps);
  if (result.variance_t) {
    cfg.add("m", static_cast<std::int64_t>(result.variance_t->m));
  } else {
    cfg.add_null("m");
  }
  cfg.add("alpha", flags.alpha)
      .add("seed", seed)
      .add("with_replacement", boot.with_replacement)
      .add("interval", name(flags.interval))
      .add("tbc_variance", name(flags.tbc_variance))
      .add("y_column", y_column);

  json::Object doc;
  doc.add("n", static_cast<std::int64_t>(result.n))
      .add("d", static_cast<std::int64_t>(result.d))
      .add("t_hat", result.t_hat)
      .add("l_hat", result.l_hat)
      .add("t_bc", result.t_bc);
  if (result.variance_t) {
    doc.add("se_t", result.variance_t->se).add("se_tbc", result.variance_tbc->se);
  } else {
    doc.add_null("se_t").add_null("se_tbc");
  }
  doc.raw("ci_t", interval_json(result.ci_t))
      .raw("ci_tbc", interval_json(result.ci_tbc))
      .raw("config", cfg.str());

  const std::string body = doc.str() + "\n";
  if (output == "-") {
    out << body;
  } else {
    std::ofstream f(output, std::ios::binary);
    if (!f) throw Error(ErrorCode::kFileNotFound, fmt::format("cannot write {}", output));
    f << body;
  }
  return kExitOk;
}

int cmd_simulate(const PipelineFlags& flags, const std::vector<double>& rhos,
                 const std::vector<Index>& ds, const std::vector<Index>& ns, int reps,
                 const std::string& out_dir, std::ostream& out, std::ostream& err) {
  flags.check_bootstrap();
  std::vector<CellSpec> grid;
  for (double rho : rhos)
    for (Index d : ds)
      for (Index n : ns) grid.push_back(CellSpec{rho, d, n});

  StudyOptions options;
  options.reps = reps;
  options.alpha = flags.alpha;
  options.b_reps = flags.bootstrap_reps;
  options.seed = parse_seed(flags.seed);
  options.pipeline = flags.pipeline();
  options.with_replacement = !flags.without_replacement;
  options.interval = flags.interval;
  options.tbc_variance = flags.tbc_variance;
  options.threads = options.pipeline.threads;

  const SimReport report = run_study(grid, options);
  write_report(report, out_dir);
  out << report_text(report);
  fmt::print(err, "wrote report.json, report.txt, raw.csv to {} in {:.2f} s\n", out_dir,
             report.wall_time);
  return kExitOk;
}

int cmd_selftest(bool quick, const std::string& seed, std::ostream& out) {
  SelftestOptions options;
  options.quick = quick;
  options.seed = parse_seed(seed);
  bool all = true;
  for (const SuiteResult& r : run_selftest(options)) {
    all = all && r.passed;
    fmt::print(out, "[{}] {} ({} instances, {:.2f} s)\n", r.passed ? "PASS" : "FAIL", r.name,
               r.instances, r.seconds);
    if (!r.passed) fmt::print(out, "       {} failure(s); first: {}\n", r.failures, r.detail);
  }
  return all ? kExitOk : kExitInternal;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bias-corrected nearest-neighbour rank correlation", "acbc"};
  app.require_subcommand(1);

  PipelineFlags est_flags;
  std::string input, y_column = "last", output = "-";
  std::optional<Index> m;
  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate T_n and T_bc for a CSV sample");
  estimate_cmd->add_option("--input", input, "CSV file")->required();
  estimate_cmd->add_option("--y-column", y_column, "0-based response column or \"last\"")
      ->capture_default_str();
  estimate_cmd->add_option("--m", m, "Bootstrap subsample size (default floor(sqrt(n)))");
  estimate_cmd->add_option("--output", output, "JSON output path, or - for stdout")
      ->capture_default_str();
  est_flags.attach(*estimate_cmd);

  PipelineFlags sim_flags;
  std::vector<double> rhos;
  std::vector<Index> ds, ns;
  int reps = 200;
  std::string out_dir = ".";
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo study on the Gaussian copula");
  simulate_cmd->add_option("--rho", rhos, "Latent correlation (repeatable)")->required();
  simulate_cmd->add_option("--d", ds, "Covariate dimension (repeatable)")->required();
  simulate_cmd->add_option("--n", ns, "Sample size (repeatable)")->required();
  simulate_cmd->add_option("--reps", reps, "Replications per cell")->capture_default_str();
  simulate_cmd->add_option("--out-dir", out_dir, "Directory for report files")
      ->capture_default_str();
  sim_flags.attach(*simulate_cmd);

  bool quick = false;
  std::string selftest_seed = "0";
  auto* selftest_cmd = app.add_subcommand("selftest", "Run the oracle-equivalence suites");
  selftest_cmd->add_flag("--quick", quick, "Small instances only");
  selftest_cmd->add_option("--seed", selftest_seed, "Seed for the random instances");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    fmt::print(err, "error: {}\n", e.what());
    return kExitInput;
  }

  try {
    if (estimate_cmd->parsed()) return cmd_estimate(est_flags, input, y_column, m, output, out);
    if (simulate_cmd->parsed()) {
      return cmd_simulate(sim_flags, rhos, ds, ns, reps, out_dir, out, err);
    }
    return cmd_selftest(quick, selftest_seed, out);
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return e.is_input_error() ? kExitInput : kExitInternal;
  } catch (const std::exception& e) {
    fmt::print(err, "internal error: {}\n", e.what());
    return kExitInternal;
  }
}

}  // namespace acbc::cli

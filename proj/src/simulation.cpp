#include "acbc/simulation.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "acbc/error.hpp"
#include "acbc/json.hpp"
#include "acbc/parallel.hpp"
#include "acbc/rng.hpp"

namespace acbc {

void CopulaConfig::validate() const {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, fmt::format("n must be >= 2, got {}", n));
  if (d < 1) throw Error(ErrorCode::kInvalidArgument, fmt::format("d must be >= 1, got {}", d));
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("rho must lie in [0,1), got {}", rho));
  }
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

Sample gen_gaussian_copula(const CopulaConfig& cfg) {
  cfg.validate();
  Engine engine = make_engine(cfg.seed, {});
  std::normal_distribution<double> normal;
  // Phi can round to exactly 0 or 1 far in the tails; keep outputs inside (0,1).
  const double lo = std::numeric_limits<double>::min();
  const double hi = std::nextafter(1.0, 0.0);
  auto phi = [&](double v) { return std::clamp(normal_cdf(v), lo, hi); };

  const double noise = std::sqrt(1.0 - cfg.rho * cfg.rho);
  Sample s{RowMatrix(cfg.n, cfg.d), Vector(cfg.n)};
  for (Index i = 0; i < cfg.n; ++i) {
    double first = 0.0;
    for (Index k = 0; k < cfg.d; ++k) {
      const double latent = normal(engine);
      if (k == 0) first = latent;
      s.x(i, k) = phi(latent);
    }
    const double z = normal(engine);
    s.y[i] = phi(cfg.rho * first + noise * z);
  }
  return s;
}

double true_t(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("rho must lie in [0,1], got {}", rho));
  }
  return 3.0 / std::numbers::pi * std::asin((1.0 + rho * rho) / 2.0) - 0.5;
}

std::uint64_t replication_data_seed(std::uint64_t master, std::size_t cell, int rep) {
  return derive_seed(master, {cell, static_cast<std::uint64_t>(rep), 0});
}

std::uint64_t replication_bootstrap_seed(std::uint64_t master, std::size_t cell, int rep) {
  return derive_seed(master, {cell, static_cast<std::uint64_t>(rep), 1});
}

ReplicationRecord run_replication(const CellSpec& cell, std::size_t cell_id, int rep,
                                  const StudyOptions& options) {
  const Sample sample = gen_gaussian_copula(
      CopulaConfig{cell.n, cell.d, cell.rho, replication_data_seed(options.seed, cell_id, rep)});
  PipelineConfig pipeline = options.pipeline;
  pipeline.threads = 1;

  ReplicationRecord r;
  r.cell_id = cell_id;
  r.rep = rep;
  r.true_t = true_t(cell.rho);
  if (options.b_reps > 0) {
    BootstrapOptions boot;
    boot.b_reps = options.b_reps;
    boot.seed = replication_bootstrap_seed(options.seed, cell_id, rep);
    boot.with_replacement = options.with_replacement;
    boot.tbc_variance = options.tbc_variance;
    const EstimateResult e =
        estimate_with_inference(sample, pipeline, boot, options.alpha, options.interval);
    r.t_hat = e.t_hat;
    r.t_bc = e.t_bc;
    r.ci_lo_t = e.ci_t->lo;
    r.ci_hi_t = e.ci_t->hi;
    r.ci_lo_tbc = e.ci_tbc->lo;
    r.ci_hi_tbc = e.ci_tbc->hi;
  } else {
    const EstimateResult e = estimate(sample, pipeline);
    r.t_hat = r.ci_lo_t = r.ci_hi_t = e.t_hat;
    r.t_bc = r.ci_lo_tbc = r.ci_hi_tbc = e.t_bc;
  }
  return r;
}

CellSummary summarize_cell(const CellSpec& cell, std::span<const ReplicationRecord> records) {
  if (records.empty()) throw Error(ErrorCode::kInvalidArgument, "cell has no replications");
  CellSummary s;
  s.cell = cell;
  s.reps = static_cast<int>(records.size());
  s.true_t = records.front().true_t;
  const auto reps = static_cast<double>(records.size());
  double se_t = 0.0, se_tbc = 0.0, cover_t = 0.0, cover_tbc = 0.0;
  for (const auto& r : records) {
    se_t += (r.t_hat - r.true_t) * (r.t_hat - r.true_t);
    se_tbc += (r.t_bc - r.true_t) * (r.t_bc - r.true_t);
    cover_t += (r.ci_lo_t <= r.true_t && r.true_t <= r.ci_hi_t) ? 1.0 : 0.0;
    cover_tbc += (r.ci_lo_tbc <= r.true_t && r.true_t <= r.ci_hi_tbc) ? 1.0 : 0.0;
    s.mean_t += r.t_hat;
    s.mean_tbc += r.t_bc;
  }
  s.rmse_t = std::sqrt(se_t / reps);
  s.rmse_tbc = std::sqrt(se_tbc / reps);
  s.ecp_t = cover_t / reps;
  s.ecp_tbc = cover_tbc / reps;
  s.mean_t /= reps;
  s.mean_tbc /= reps;
  if (records.size() > 1) {
    double v_t = 0.0, v_tbc = 0.0;
    for (const auto& r : records) {
      v_t += (r.t_hat - s.mean_t) * (r.t_hat - s.mean_t);
      v_tbc += (r.t_bc - s.mean_tbc) * (r.t_bc - s.mean_tbc);
    }
    s.sd_t = std::sqrt(v_t / (reps - 1.0));
    s.sd_tbc = std::sqrt(v_tbc / (reps - 1.0));
  }
  return s;
}

SimReport run_study(std::span<const CellSpec> grid, const StudyOptions& options) {
  if (options.reps < 1) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("reps must be >= 1, got {}", options.reps));
  }
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("alpha must lie in (0,1), got {}", options.alpha));
  }
  if (options.b_reps == 1 || options.b_reps < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("bootstrap reps must be 0 or >= 2, got {}", options.b_reps));
  }
  options.pipeline.validate();
  for (const auto& cell : grid) CopulaConfig{cell.n, cell.d, cell.rho, 0}.validate();

  const auto start = std::chrono::steady_clock::now();
  const auto reps = static_cast<std::size_t>(options.reps);
  SimReport report;
  report.alpha = options.alpha;
  report.records.resize(grid.size() * reps);
  parallel_for(report.records.size(), options.threads, [&](std::size_t k) {
    const std::size_t cell_id = k / reps;
    const int rep = static_cast<int>(k % reps);
    const CellSpec& cell = grid[cell_id];
    try {
      report.records[k] = run_replication(cell, cell_id, rep, options);
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("cell {} (rho={}, d={}, n={}) replication {}: {}", cell_id,
                                        cell.rho, cell.d, cell.n, rep, e.what()));
    }
  });
  for (std::size_t c = 0; c < grid.size(); ++c) {
    report.cells.push_back(summarize_cell(
        grid[c], std::span<const ReplicationRecord>(report.records).subspan(c * reps, reps)));
  }
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string report_json(const SimReport& report) {
  std::vector<std::string> cells;
  for (const auto& c : report.cells) {
    json::Object o;
    o.add("rho", c.cell.rho)
        .add("d", static_cast<std::int64_t>(c.cell.d))
        .add("n", static_cast<std::int64_t>(c.cell.n))
        .add("reps", c.reps)
        .add("true_t", c.true_t)
        .add("rmse_t", c.rmse_t)
        .add("rmse_tbc", c.rmse_tbc)
        .add("ecp_t", c.ecp_t)
        .add("ecp_tbc", c.ecp_tbc)
        .add("mean_t", c.mean_t)
        .add("mean_tbc", c.mean_tbc)
        .add("sd_t", c.sd_t)
        .add("sd_tbc", c.sd_tbc);
    cells.push_back("    " + o.str());
  }
  // wall_time is left out so that repeated runs are byte-identical.
  return fmt::format("{{\n  \"alpha\": {},\n  \"cells\": [\n{}\n  ]\n}}\n",
                     json::number(report.alpha), fmt::join(cells, ",\n"));
}

std::string report_text(const SimReport& report) {
  std::string out = fmt::format(
      "RMSE and empirical coverage (alpha = {})\n"
      "{:>6} {:>4} {:>6} {:>6} {:>10} {:>10} {:>8} {:>8}\n",
      report.alpha, "rho", "d", "n", "reps", "RMSE T", "RMSE Tbc", "ECP T", "ECP Tbc");
  for (const auto& c : report.cells) {
    out += fmt::format("{:>6.2f} {:>4} {:>6} {:>6} {:>10.4f} {:>10.4f} {:>8.3f} {:>8.3f}\n",
                       c.cell.rho, c.cell.d, c.cell.n, c.reps, c.rmse_t, c.rmse_tbc, c.ecp_t,
                       c.ecp_tbc);
  }
  out += fmt::format("wall time: {:.2f} s\n", report.wall_time);
  return out;
}

std::string raw_csv(const SimReport& report) {
  std::string out = "cell_id,rep,t_hat,t_bc,ci_lo_t,ci_hi_t,ci_lo_tbc,ci_hi_tbc,true_t\n";
  for (const auto& r : report.records) {
    out += fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                       r.cell_id, r.rep, r.t_hat, r.t_bc, r.ci_lo_t, r.ci_hi_t, r.ci_lo_tbc,
                       r.ci_hi_tbc, r.true_t);
  }
  return out;
}

void write_report(const SimReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  auto write = [&](const char* name, const std::string& body) {
    std::ofstream f(out_dir / name, std::ios::binary);
    if (!f) {
      throw Error(ErrorCode::kFileNotFound,
                  fmt::format("cannot write {}", (out_dir / name).string()));
    }
    f << body;
  };
  write("report.json", report_json(report));
  write("report.txt", report_text(report));
  write("raw.csv", raw_csv(report));
}

}  // namespace acbc

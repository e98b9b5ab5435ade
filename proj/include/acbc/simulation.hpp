#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "acbc/bias_correction.hpp"
#include "acbc/bootstrap.hpp"
#include "acbc/dataset.hpp"

namespace acbc {

// Latent (X~, Y~) with X~ ~ N(0, I_d), Y~ = rho X~_1 + sqrt(1 - rho^2) Z,
// pushed through the standard normal CDF componentwise.
struct CopulaConfig {
  Index n = 0;
  Index d = 0;
  double rho = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

double normal_cdf(double x);

Sample gen_gaussian_copula(const CopulaConfig& cfg);

// Population value of the dependence measure for the copula design:
// (3 / pi) asin((1 + rho^2) / 2) - 1 / 2.
double true_t(double rho);

struct CellSpec {
  double rho = 0.0;
  Index d = 0;
  Index n = 0;
};

struct ReplicationRecord {
  std::size_t cell_id = 0;
  int rep = 0;
  double t_hat = 0.0;
  double t_bc = 0.0;
  double ci_lo_t = 0.0;
  double ci_hi_t = 0.0;
  double ci_lo_tbc = 0.0;
  double ci_hi_tbc = 0.0;
  double true_t = 0.0;
};

struct CellSummary {
  CellSpec cell;
  int reps = 0;
  double true_t = 0.0;
  double rmse_t = 0.0;
  double rmse_tbc = 0.0;
  double ecp_t = 0.0;
  double ecp_tbc = 0.0;
  double mean_t = 0.0;
  double mean_tbc = 0.0;
  double sd_t = 0.0;
  double sd_tbc = 0.0;
};

struct SimReport {
  std::vector<CellSummary> cells;
  std::vector<ReplicationRecord> records;  // cell-major, replication order
  double alpha = 0.05;
  double wall_time = 0.0;  // seconds
};

struct StudyOptions {
  int reps = 200;
  double alpha = 0.05;
  int b_reps = 200;  // 0 skips the bootstrap; intervals are then degenerate
  std::uint64_t seed = 0;
  PipelineConfig pipeline;
  bool with_replacement = true;
  IntervalKind interval = IntervalKind::kNormal;
  TbcVariance tbc_variance = TbcVariance::kShared;
  unsigned threads = 0;  // 0 = default_threads()
};

// Seeds for replication `rep` of cell `cell`: data and bootstrap streams.
std::uint64_t replication_data_seed(std::uint64_t master, std::size_t cell, int rep);
std::uint64_t replication_bootstrap_seed(std::uint64_t master, std::size_t cell, int rep);

// One replication: fresh copula data, both estimators, bootstrap intervals.
ReplicationRecord run_replication(const CellSpec& cell, std::size_t cell_id, int rep,
                                  const StudyOptions& options);

// Aggregates the records of one cell (all must carry the same true_t).
CellSummary summarize_cell(const CellSpec& cell, std::span<const ReplicationRecord> records);

SimReport run_study(std::span<const CellSpec> grid, const StudyOptions& options);

// Serialisations. JSON and CSV use 17 significant digits and a fixed key
// order so identical runs produce identical bytes.
std::string report_json(const SimReport& report);
std::string report_text(const SimReport& report);
std::string raw_csv(const SimReport& report);

void write_report(const SimReport& report, const std::filesystem::path& out_dir);

}  // namespace acbc

// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.

#include <fmt/format.h>

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "acbc/bias_correction.hpp"
#include "acbc/bootstrap.hpp"
#include "acbc/cli.hpp"
#include "acbc/selftest.hpp"
#include "acbc/simulation.hpp"
#include "oracles.hpp"

namespace acbc {
namespace {

namespace fs = std::filesystem;

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, std::string note) {
    pass = pass && ok;
    notes.push_back(fmt::format("{} {}", ok ? "ok  " : "FAIL", std::move(note)));
  }
};

bool within(double value, double target, double rel) {
  return std::abs(value - target) <= rel * target;
}

CellSummary run_cell(double rho, Index d, Index n, int b_reps, std::uint64_t seed) {
  StudyOptions o;
  o.reps = 200;
  o.b_reps = b_reps;
  o.seed = seed;
  const std::vector<CellSpec> grid{{rho, d, n}};
  return run_study(grid, o).cells.front();
}

std::string cell_note(const CellSummary& c) {
  return fmt::format("rmse_t={:.4f} rmse_tbc={:.4f} ecp_t={:.3f} ecp_tbc={:.3f}", c.rmse_t,
                     c.rmse_tbc, c.ecp_t, c.ecp_tbc);
}

Verdict criterion_strong_dependence() {
  Verdict v;
  const CellSummary c = run_cell(0.9, 6, 300, 200, 2024);
  v.notes.push_back(cell_note(c));
  v.check(within(c.rmse_t, 0.1128, 0.30), "rmse_t within 30% of 0.1128");
  v.check(within(c.rmse_tbc, 0.0532, 0.30), "rmse_tbc within 30% of 0.0532");
  v.check(c.ecp_t <= 0.75, "ecp_t <= 0.75");
  v.check(c.ecp_tbc >= 0.90 && c.ecp_tbc <= 1.0, "ecp_tbc in [0.90, 1]");
  return v;
}

Verdict criterion_independence() {
  Verdict v;
  const CellSummary c = run_cell(0.0, 6, 300, 200, 2025);
  v.notes.push_back(cell_note(c));
  v.check(within(c.rmse_t, 0.0627, 0.30), "rmse_t within 30% of 0.0627");
  v.check(within(c.rmse_tbc, 0.0635, 0.30), "rmse_tbc within 30% of 0.0635");
  v.check(c.ecp_t >= 0.90, "ecp_t >= 0.90");
  v.check(c.ecp_tbc >= 0.90, "ecp_tbc >= 0.90");
  return v;
}

Verdict criterion_bias_domination() {
  Verdict v;
  const CellSummary c = run_cell(0.9, 8, 600, 0, 2026);
  v.notes.push_back(fmt::format("rmse_t={:.4f} rmse_tbc={:.4f} bias_t={:.4f} bias_tbc={:.4f}",
                                c.rmse_t, c.rmse_tbc, c.mean_t - c.true_t,
                                c.mean_tbc - c.true_t));
  v.check(c.rmse_tbc < 0.5 * c.rmse_t, "rmse_tbc < rmse_t / 2");
  v.check(std::abs(c.mean_tbc - c.true_t) < std::abs(c.mean_t - c.true_t), "bias reduced");
  return v;
}

Verdict criterion_truth() {
  Verdict v;
  using Big = boost::multiprecision::cpp_dec_float_50;
  const Big ref = Big(3) / boost::math::constants::pi<Big>() *
                      boost::multiprecision::asin(Big("0.625")) - Big("0.5");
  const double err = std::abs(true_t(0.5) - ref.convert_to<double>());
  v.check(true_t(0.0) == 0.0, "true_t(0) == 0");
  v.check(true_t(1.0) == 1.0, "true_t(1) == 1");
  v.check(err <= 1e-10, fmt::format("|true_t(0.5) - ref| = {:.1e}", err));
  return v;
}

Verdict criterion_selftest() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const auto results = run_selftest();
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const SuiteResult& r : results) {
    v.check(r.passed, fmt::format("{}: {}/{} ok", r.name, r.instances - r.failures, r.instances));
  }
  v.check(seconds <= 60.0, fmt::format("{:.2f} s", seconds));
  return v;
}

Verdict criterion_properties() {
  Verdict v;
  std::mt19937_64 rng(6);
  int monotone_ok = 0, rotation_ok = 0, degree0_ok = 0, shrink_ok = 0, perm_ok = 0;
  constexpr int kInstances = 20;
  for (int inst = 0; inst < kInstances; ++inst) {
    const Index d = 1 + inst % 5;
    const Sample s = gen_gaussian_copula({200, d, 0.6, rng()});
    const double t = nn_rank_correlation(s);

    Sample mono = s;
    mono.y = s.y.unaryExpr([](double y) { return std::exp(5.0 * y) + y * y * y; });
    if (nn_rank_correlation(mono) == t) ++monotone_ok;

    Sample rot = s;
    rot.x = s.x * testing::random_orthogonal(d, rng);
    if (nn_rank_correlation(rot) == t) ++rotation_ok;

    PipelineConfig c0;
    c0.degree = 0;
    const EstimateResult r0 = estimate(s, c0);
    if (r0.t_bc == r0.t_hat) ++degree0_ok;

    const Matrix p = design_matrix(s.x, basis_index_set(d, 2));
    double prev = std::numeric_limits<double>::infinity();
    bool shrinks = true;
    for (double lambda : {1e-6, 1e-4, 1e-2, 1.0, 100.0}) {
      const double norm = ridge_fit_all(p, s.y, lambda).betas.norm();
      shrinks = shrinks && norm <= prev;
      prev = norm;
    }
    if (shrinks) ++shrink_ok;

    std::vector<Index> perm(static_cast<std::size_t>(s.n()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const double lambda = ridge_penalty(s.n(), 0.85);
    const Matrix g = ghat_matrix(fit_series(s, 2, lambda, true).ridge);
    const Matrix gp = ghat_matrix(fit_series(take_rows(s, perm), 2, lambda, true).ridge);
    double worst = 0.0;
    for (Index i = 0; i < s.n(); ++i) {
      for (Index j = 0; j < s.n(); ++j) {
        worst = std::max(worst, std::abs(gp(i, j) - g(perm[i], perm[j])));
      }
    }
    if (worst <= 1e-9) ++perm_ok;
  }
  v.check(monotone_ok == kInstances, fmt::format("monotone y {}/{}", monotone_ok, kInstances));
  v.check(rotation_ok == kInstances, fmt::format("rotation {}/{}", rotation_ok, kInstances));
  v.check(degree0_ok == kInstances, fmt::format("degree 0 {}/{}", degree0_ok, kInstances));
  v.check(shrink_ok == kInstances, fmt::format("shrinkage {}/{}", shrink_ok, kInstances));
  v.check(perm_ok == kInstances, fmt::format("permutation {}/{}", perm_ok, kInstances));
  return v;
}

Verdict criterion_root_n() {
  Verdict v;
  const double sd_small = run_cell(0.5, 6, 300, 0, 7001).sd_tbc;
  const double sd_large = run_cell(0.5, 6, 1200, 0, 7002).sd_tbc;
  const double ratio = sd_large / sd_small;
  v.check(ratio >= 0.35 && ratio <= 0.65, fmt::format("sd ratio {:.3f}", ratio));

  const double z975 = normal_quantile(0.975);
  int passing = 0;
  std::string pvalues;
  for (int batch = 0; batch < 10; ++batch) {
    StudyOptions o;
    o.reps = 200;
    o.b_reps = 200;
    o.seed = 7100 + static_cast<std::uint64_t>(batch);
    const std::vector<CellSpec> grid{{0.5, 6, 300}};
    const SimReport r = run_study(grid, o);
    std::vector<double> z;
    for (const ReplicationRecord& rec : r.records) {
      const double se = (rec.ci_hi_tbc - rec.ci_lo_tbc) / (2.0 * z975);
      z.push_back((rec.t_bc - rec.true_t) / se);
    }
    const double p = testing::ks_normal_pvalue(z);
    if (p >= 0.01) ++passing;
    pvalues += fmt::format(" {:.3f}", p);
  }
  v.check(passing >= 8, fmt::format("KS batches passing {}/10, p:{}", passing, pvalues));
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Verdict criterion_determinism() {
  Verdict v;
  const fs::path dir = fs::temp_directory_path() / "acbc_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path input = dir / "sample.csv";
  save_csv(input, gen_gaussian_copula({300, 6, 0.9, 8}));

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::string> estimates, reports, raws;
  for (unsigned threads : {1u, 4u, hw}) {
    std::ostringstream out, err;
    const int code = cli::run({"estimate", "--input", input.string(), "--seed", "11", "--threads",
                               std::to_string(threads)},
                              out, err);
    v.check(code == 0, fmt::format("estimate --threads {} exit {}", threads, code));
    estimates.push_back(out.str());

    const fs::path sim = dir / fmt::format("sim{}", threads);
    const int sim_code =
        cli::run({"simulate", "--rho", "0", "--rho", "0.9", "--d", "3", "--n", "100", "--reps",
                  "20", "--bootstrap-reps", "30", "--seed", "12", "--threads",
                  std::to_string(threads), "--out-dir", sim.string()},
                 out, err);
    v.check(sim_code == 0, fmt::format("simulate --threads {} exit {}", threads, sim_code));
    reports.push_back(slurp(sim / "report.json"));
    raws.push_back(slurp(sim / "raw.csv"));
  }
  const auto all_same = [](const std::vector<std::string>& xs) {
    return !xs.front().empty() && std::all_of(xs.begin(), xs.end(),
                                              [&](const std::string& x) { return x == xs.front(); });
  };
  v.check(all_same(estimates), fmt::format("estimate JSON identical for threads 1,4,{}", hw));
  v.check(all_same(reports), "report.json identical");
  v.check(all_same(raws), "raw.csv identical");
  fs::remove_all(dir);
  return v;
}

}  // namespace
}  // namespace acbc

int main() {
  using Criterion = std::pair<const char*, std::function<acbc::Verdict()>>;
  const std::vector<Criterion> criteria{
      {"strong dependence cell (rho=0.9, d=6, n=300)", acbc::criterion_strong_dependence},
      {"independence cell (rho=0, d=6, n=300)", acbc::criterion_independence},
      {"bias domination (rho=0.9, d=8, n=600)", acbc::criterion_bias_domination},
      {"closed-form truth", acbc::criterion_truth},
      {"oracle equivalence selftest", acbc::criterion_selftest},
      {"property suite", acbc::criterion_properties},
      {"root-n scaling and normality", acbc::criterion_root_n},
      {"CLI determinism across thread counts", acbc::criterion_determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    acbc::Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v.check(false, fmt::format("exception: {}", e.what()));
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fmt::print("[{}] criterion {}: {} ({:.1f} s)\n", v.pass ? "PASS" : "FAIL", k + 1,
               criteria[k].first, seconds);
    for (const auto& note : v.notes) fmt::print("        {}\n", note);
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

// Acceptance gate: one [PASS]/[FAIL] line per criterion, exit code equal to
// the number of failed criteria. A4 runs the full replicated study once; A5,
// A6, and A8 reuse its output.

#include "odl/checkpoint.hpp"
#include "odl/csv.hpp"
#include "odl/engine.hpp"
#include "odl/metrics.hpp"
#include "odl/simulate.hpp"
#include "odl/solver.hpp"
#include "odl/suffstats.hpp"

#include "oracles.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

using odl::BatchData;
using odl::Matrix;
using odl::Vector;

namespace {

int failures = 0;

void report(const std::string& id, bool ok, const std::string& measured) {
    std::printf("[%s] %s (%s)\n", ok ? "PASS" : "FAIL", id.c_str(), measured.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <typename Fn>
void criterion(const std::string& id, Fn&& fn) {
    try {
        std::pair<bool, std::string> r = fn();
        report(id, r.first, r.second);
    } catch (const std::exception& e) {
        report(id, false, std::string("threw: ") + e.what());
    }
}

std::string num(double v, int digits = 3) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

// ---------------------------------------------------------------- A1 -----

std::pair<bool, std::string> a1_solver_equivalence() {
    odl::SolverConfig cfg;
    cfg.tol = 1e-10;
    cfg.max_iter = 2000000;

    std::mt19937_64 rng(90001);
    double worst_gap = 0.0;
    bool all_converged = true;
    for (int k = 0; k < 100; ++k) {
        const long p = 2 + static_cast<long>(rng() % 49);  // 2..50
        const long n = 2 * p + static_cast<long>(rng() % (501 - 2 * p));
        const long nnz = std::max<long>(1, p / 5);
        const double lambda = 0.05 + 0.35 * (static_cast<double>(rng() % 1000) / 1000.0);
        const auto inst = oracle::random_instance(1000 + k, n, p, nnz);

        odl::CumulativeStats stats;
        BatchData batch;
        batch.X = inst.X;
        batch.y = inst.y;
        batch.batch_index = 1;
        stats.ingest(batch);

        const odl::SolveReport fit =
            odl::solve_l1(stats.S(), stats.U(), static_cast<double>(n), lambda,
                          Vector::Zero(p), cfg);
        all_converged = all_converged && fit.converged;

        const Vector ref = oracle::lasso_raw(inst.X, inst.y, lambda, 1e-12);
        const double gap =
            std::abs(oracle::lasso_objective(inst.X, inst.y, lambda, fit.coefficients) -
                     oracle::lasso_objective(inst.X, inst.y, lambda, ref));
        worst_gap = std::max(worst_gap, gap);
    }

    double worst_uni = 0.0;
    for (int k = 0; k < 20; ++k) {
        const long n = 5 + static_cast<long>(rng() % 96);
        const auto inst = oracle::random_instance(2000 + k, n, 1, 1);
        const double lambda = 0.02 + 0.03 * k;

        odl::CumulativeStats stats;
        BatchData batch;
        batch.X = inst.X;
        batch.y = inst.y;
        batch.batch_index = 1;
        stats.ingest(batch);

        const odl::SolveReport fit =
            odl::solve_l1(stats.S(), stats.U(), static_cast<double>(n), lambda,
                          Vector::Zero(1), cfg);
        const double closed = odl::soft_threshold(stats.U()[0] / static_cast<double>(n),
                                                  lambda) /
                              (stats.S()(0, 0) / static_cast<double>(n));
        worst_uni = std::max(worst_uni, std::abs(fit.coefficients[0] - closed));
    }

    const bool ok = all_converged && worst_gap <= 1e-6 && worst_uni <= 1e-8;
    return {ok, "max objective gap " + num(worst_gap) + " vs 1e-6, max univariate error " +
                    num(worst_uni) + " vs 1e-8"};
}

// ---------------------------------------------------------------- A2 -----

std::pair<bool, std::string> a2_single_batch_identity() {
    std::mt19937_64 rng(90002);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const long n = 40 + static_cast<long>(rng() % 81);
        const long p = 4 + static_cast<long>(rng() % 9);
        const double lambda = 0.08 + 0.01 * k;
        const auto inst = oracle::random_instance(3000 + k, n, p, 2);

        odl::EngineConfig cfg;
        cfg.grid = {lambda};
        cfg.solver.tol = 1e-12;
        cfg.solver.max_iter = 4000000;
        odl::Engine engine(cfg);

        BatchData batch;
        batch.X = inst.X;
        batch.y = inst.y;
        batch.batch_index = 1;
        const odl::BatchOutput out = engine.process_batch(batch);

        const double q = oracle::norm_quantile(0.975);
        for (long r : {0L, p / 2, p - 1}) {
            const auto ref = oracle::debias_raw(inst.X, inst.y, lambda, r, q);
            const auto& res = out.results[static_cast<std::size_t>(r)];
            worst = std::max(worst, std::abs(res.estimate - ref.estimate));
            worst = std::max(worst, std::abs(res.se - ref.se));
            worst = std::max(worst, std::abs(res.ci_low - ref.ci_low));
            worst = std::max(worst, std::abs(res.ci_high - ref.ci_high));
        }
    }
    return {worst <= 1e-8, "max offline/online deviation " + num(worst) + " vs 1e-8"};
}

// ---------------------------------------------------------------- A3 -----

std::pair<bool, std::string> a3_schedule_bounds() {
    std::mt19937_64 rng(90003);
    double worst_margin1 = -1e300;
    double worst_margin2 = -1e300;
    bool ok = true;
    for (int s = 0; s < 1000; ++s) {
        const int b = 1 + static_cast<int>(rng() % 30);
        std::vector<double> n(static_cast<std::size_t>(b));
        for (double& v : n) v = 1.0 + static_cast<double>(rng() % 50);

        double cum = 0.0, sum_ratio = 0.0, sum_root = 0.0;
        for (double v : n) {
            cum += v;
            sum_ratio += v / cum;
            sum_root += v / std::sqrt(cum);
        }
        const double bound1 = 1.0 + std::log(cum / n.front());
        const double bound2 = 2.0 * std::sqrt(cum);
        ok = ok && sum_ratio <= bound1 && sum_root <= bound2;
        worst_margin1 = std::max(worst_margin1, sum_ratio - bound1);
        worst_margin2 = std::max(worst_margin2, sum_root - bound2);
    }
    return {ok, "1000 schedules, worst margins " + num(worst_margin1) + " and " +
                    num(worst_margin2) + " (<= 0 required)"};
}

// ------------------------------------------------------- A4 simulation ---

struct StudyArtifacts {
    odl::SimDesign design;
    odl::SimOutput sim;
    odl::MetricsReport metrics;
    double seconds = 0.0;
};

StudyArtifacts run_study() {
    StudyArtifacts art;
    odl::SimDesign& d = art.design;
    d.p = 100;
    d.s0 = 4; // two coefficients at 1, two at 0.01
    d.n_sched.assign(12, 20);
    d.sigma_eps = 1.0;
    d.cov = odl::CovKind::identity;
    d.seed = 1;
    d.replications = 200;
    d.grid = {0.15, 0.20, 0.25, 0.30};
    d.grid_mode = odl::GridMode::fixed;
    d.coords = {0, 1, 2, 3, 4, 5}; // two tracked coordinates per group
    d.alpha = 0.05;
    odl::finalize_design(d);

    odl::EngineConfig base;
    base.audit_every = 100; // 1% audit

    const auto t0 = std::chrono::steady_clock::now();
    art.sim = odl::run_replications(d, base);
    const auto t1 = std::chrono::steady_clock::now();
    art.seconds = std::chrono::duration<double>(t1 - t0).count();
    art.metrics = odl::summarize(art.sim.rows, d);
    return art;
}

std::pair<bool, std::string> a4_coverage_study(const StudyArtifacts& art) {
    bool ok = art.sim.failures.empty();
    ok = ok && art.sim.rows.size() == 200u * 12u * 6u;
    ok = ok && art.seconds <= 900.0;

    // batch-12 cells, one per truth group (descending truth: 1, 0.01, 0)
    std::vector<const odl::GroupMetrics*> last;
    for (const auto& cell : art.metrics.cells) {
        if (cell.batch == 12) last.push_back(&cell);
    }
    ok = ok && last.size() == 3;

    std::string cps;
    double bias_strong = -1.0;
    for (const auto* cell : last) {
        ok = ok && cell->cp >= 0.91 && cell->cp <= 0.98;
        if (!cps.empty()) cps += "/";
        cps += num(cell->cp);
        if (cell->truth == 1.0) bias_strong = cell->a_bias;
    }
    ok = ok && bias_strong >= 0.0 && bias_strong <= 0.05;

    // ASE must shrink from batch to batch within every group
    bool ase_decreasing = true;
    for (double truth : {1.0, 0.01, 0.0}) {
        double prev = 1e300;
        for (const auto& cell : art.metrics.cells) {
            if (cell.truth != truth) continue;
            ase_decreasing = ase_decreasing && cell.ase < prev;
            prev = cell.ase;
        }
    }
    ok = ok && ase_decreasing;

    return {ok, "CP " + cps + " in [0.91,0.98], bias(beta=1) " + num(bias_strong) +
                    " vs 0.05, ASE decreasing: " + (ase_decreasing ? "yes" : "no") + ", " +
                    std::to_string(art.sim.failures.size()) + " failed reps, " +
                    num(art.seconds, 4) + " s vs 900 s"};
}

std::pair<bool, std::string> a5_normality(const StudyArtifacts& art) {
    const double critical = 1.63 / std::sqrt(200.0);
    int good = 0;
    double min_corr = 1.0, max_ks = 0.0;
    for (const auto& diag : art.metrics.diagnostics) {
        min_corr = std::min(min_corr, diag.qq_correlation);
        max_ks = std::max(max_ks, diag.ks);
        if (diag.qq_correlation >= 0.99 && diag.ks < critical) ++good;
    }
    const bool ok = art.metrics.diagnostics.size() == 6 && good >= 5;
    return {ok, std::to_string(good) + "/6 coordinates pass (min QQ corr " + num(min_corr) +
                    ", max KS " + num(max_ks) + " vs " + num(critical) + ")"};
}

std::pair<bool, std::string> a6_sigma2(const StudyArtifacts& art) {
    double sum = 0.0;
    long n = 0;
    for (const auto& row : art.sim.rows) {
        if (row.batch == 12 && row.res.r == 1) {
            sum += row.sigma2;
            ++n;
        }
    }
    const double mean = sum / static_cast<double>(n);
    const bool ok = n == 200 && std::abs(mean - 1.0) <= 0.1;
    return {ok, "mean sigma2 over " + std::to_string(n) + " replications " + num(mean) +
                    ", |mean - 1| vs 0.1"};
}

std::pair<bool, std::string> a8_optimality(const StudyArtifacts& art) {
    const double limit = 10.0 * 1e-6; // solver ran at its default tolerance
    const bool ok = art.sim.audit.checked > 0 && art.sim.audit.max_violation <= limit;
    return {ok, std::to_string(art.sim.audit.checked) + " solutions audited, max violation " +
                    num(art.sim.audit.max_violation) + " vs " + num(limit)};
}

// ---------------------------------------------------------------- A7 -----

int run_cmd(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::pair<bool, std::string> a7_resume_equivalence() {
    const char* bin = std::getenv("ODL_BIN");
    if (bin == nullptr) return {false, "ODL_BIN is not set"};
    const std::string exe = std::string("\"") + bin + "\"";

    odl::SimDesign d;
    d.p = 8;
    d.s0 = 2;
    d.n_sched = {10, 10, 10, 10};
    d.seed = 99;
    odl::finalize_design(d);

    const auto dir = std::filesystem::temp_directory_path() /
                     ("odl_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);

    std::vector<std::string> files;
    for (long j = 1; j <= 4; ++j) {
        const BatchData batch = odl::gen_batch(d, 1, j, nullptr);
        std::vector<std::string> fields;
        for (long c = 0; c < d.p; ++c) fields.push_back("x" + std::to_string(c + 1));
        fields.push_back("y");
        std::string csv = odl::join_csv(fields) + "\n";
        for (long i = 0; i < batch.rows(); ++i) {
            fields.clear();
            for (long c = 0; c < d.p; ++c) fields.push_back(odl::format_double(batch.X(i, c)));
            fields.push_back(odl::format_double(batch.y[i]));
            csv += odl::join_csv(fields) + "\n";
        }
        const auto path = dir / ("b" + std::to_string(j) + ".csv");
        std::ofstream(path, std::ios::binary) << csv;
        files.push_back("\"" + path.string() + "\"");
    }

    bool ok = true;
    std::string detail;
    const std::string straight_dir = (dir / "straight").string();
    ok = run_cmd(exe + " fit " + files[0] + " " + files[1] + " " + files[2] + " " + files[3] +
                 " --out \"" + straight_dir + "\"") == 0;
    const std::string straight = slurp(dir / "straight/results.csv");

    for (int split = 1; split <= 3 && ok; ++split) {
        const std::string head_dir = (dir / ("head" + std::to_string(split))).string();
        const std::string tail_dir = (dir / ("tail" + std::to_string(split))).string();
        std::string head_cmd = exe + " fit";
        for (int j = 0; j < split; ++j) head_cmd += " " + files[static_cast<std::size_t>(j)];
        head_cmd += " --out \"" + head_dir + "\"";
        std::string tail_cmd = exe + " fit";
        for (int j = split; j < 4; ++j) tail_cmd += " " + files[static_cast<std::size_t>(j)];
        tail_cmd += " --resume \"" + head_dir + "/checkpoint.odl\" --out \"" + tail_dir + "\"";

        ok = ok && run_cmd(head_cmd) == 0 && run_cmd(tail_cmd) == 0;
        const std::string head = slurp(dir / ("head" + std::to_string(split)) / "results.csv");
        std::string tail = slurp(dir / ("tail" + std::to_string(split)) / "results.csv");
        tail.erase(0, tail.find('\n') + 1); // drop the duplicate header
        if (head + tail != straight) {
            ok = false;
            detail = "split after batch " + std::to_string(split) + " differs";
        }
    }

    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
    return {ok, ok ? "all 3 boundary splits bit-identical to the straight run"
                   : (detail.empty() ? "a run exited nonzero" : detail)};
}

} // namespace

int main() {
    criterion("A1 lasso solver matches the raw-data oracle", a1_solver_equivalence);
    criterion("A2 single-batch pipeline equals the offline debiased lasso",
              a2_single_batch_identity);
    criterion("A3 batch-schedule cumulative bounds", a3_schedule_bounds);

    std::optional<StudyArtifacts> art;
    std::string study_error;
    try {
        art = run_study();
    } catch (const std::exception& e) {
        study_error = e.what();
    }

    const auto with_study =
        [&](std::pair<bool, std::string> (*check)(const StudyArtifacts&)) {
            return [&, check]() -> std::pair<bool, std::string> {
                if (!art) return {false, "simulation study failed: " + study_error};
                return check(*art);
            };
        };

    criterion("A4 coverage study at scale", with_study(&a4_coverage_study));
    criterion("A5 normality of standardized estimates", with_study(&a5_normality));
    criterion("A6 noise-variance consistency", with_study(&a6_sigma2));
    criterion("A7 checkpoint resume equivalence", a7_resume_equivalence);
    criterion("A8 subgradient optimality audit", with_study(&a8_optimality));

    return failures;
}

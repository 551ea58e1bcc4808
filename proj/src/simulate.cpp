#include "odl/simulate.hpp"

#include "odl/csv.hpp"
#include "odl/errors.hpp"
#include "odl/rng.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace odl {

void finalize_design(SimDesign& design) {
    if (design.p < 1) throw UsageError("design: p must be at least 1");
    if (design.n_sched.empty()) throw UsageError("design: batch schedule is empty");
    for (long n : design.n_sched) {
        if (n < 1) throw UsageError("design: batch sizes must be at least 1");
    }
    if (design.replications < 1) throw UsageError("design: replications must be at least 1");
    if (design.sigma_eps < 0.0) throw UsageError("design: sigma_eps must be non-negative");
    if (design.cov == CovKind::ar1 && !(design.rho >= 0.0 && design.rho < 1.0)) {
        throw UsageError("design: ar1 correlation must lie in [0, 1)");
    }
    validate_grid(design.grid);
    if (!(design.alpha > 0.0 && design.alpha < 1.0)) {
        throw UsageError("design: alpha must lie in (0, 1)");
    }

    if (design.beta0.size() == 0) {
        if (design.s0 < 0 || design.s0 > design.p) {
            throw UsageError("design: s0 must lie in [0, p]");
        }
        design.beta0 = Vector::Zero(design.p);
        const long strong = (design.s0 + 1) / 2; // first half 1, second half 0.01
        for (long i = 0; i < design.s0; ++i) {
            design.beta0[i] = i < strong ? 1.0 : 0.01;
        }
    } else {
        if (design.beta0.size() != design.p) {
            throw UsageError("design: beta0 length must equal p");
        }
        long nonzeros = 0;
        for (long i = 0; i < design.p; ++i) {
            if (design.beta0[i] != 0.0) ++nonzeros;
        }
        if (design.s0 == 0) {
            design.s0 = nonzeros;
        } else if (nonzeros != design.s0) {
            throw UsageError("design: beta0 has " + std::to_string(nonzeros) +
                             " nonzeros but s0 = " + std::to_string(design.s0));
        }
    }

    if (design.coords.empty()) {
        if (design.p > 500) {
            throw UsageError("design: p exceeds 500; supply an explicit coords list");
        }
        for (long r = 0; r < design.p; ++r) design.coords.push_back(r);
    }
    for (long r : design.coords) {
        if (r < 0 || r >= design.p) {
            throw UsageError("design: coordinate " + std::to_string(r + 1) +
                             " out of range 1.." + std::to_string(design.p));
        }
    }
}

namespace {

std::vector<double> parse_double_list(const std::string& value, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto a = item.find_first_not_of(" \t");
        const auto b = item.find_last_not_of(" \t");
        if (a == std::string::npos) {
            throw UsageError("design key '" + key + "' has an empty entry");
        }
        out.push_back(parse_double(item.substr(a, b - a + 1), "design key '" + key + "'"));
    }
    if (out.empty()) {
        throw UsageError("design key '" + key + "' has no values");
    }
    return out;
}

std::vector<long> parse_schedule(const std::string& value) {
    // Either "NxB" (B batches of N rows) or an explicit comma list.
    const auto x = value.find('x');
    if (x != std::string::npos) {
        const double n = parse_double(value.substr(0, x), "design key 'nsched'");
        const double b = parse_double(value.substr(x + 1), "design key 'nsched'");
        if (n < 1 || b < 1 || n != std::floor(n) || b != std::floor(b)) {
            throw UsageError("design: nsched must use positive integers");
        }
        return std::vector<long>(static_cast<std::size_t>(b), static_cast<long>(n));
    }
    std::vector<long> out;
    for (double v : parse_double_list(value, "nsched")) {
        if (v < 1 || v != std::floor(v)) {
            throw UsageError("design: nsched entries must be positive integers");
        }
        out.push_back(static_cast<long>(v));
    }
    return out;
}

} // namespace

SimDesign parse_design_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open design file: " + path);
    }
    SimDesign design;
    bool grid_set = false, cgrid_set = false;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // strip comments and whitespace-only lines
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t");
        line = line.substr(first, last - first + 1);

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": expected key=value, got '" + line + "'");
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t");
            return s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string ctx = "design key '" + key + "'";

        if (key == "p") {
            design.p = static_cast<long>(parse_double(value, ctx));
        } else if (key == "s0") {
            design.s0 = static_cast<long>(parse_double(value, ctx));
        } else if (key == "reps") {
            design.replications = static_cast<long>(parse_double(value, ctx));
        } else if (key == "seed") {
            design.seed = static_cast<std::uint64_t>(parse_double(value, ctx));
        } else if (key == "sigma_eps") {
            design.sigma_eps = parse_double(value, ctx);
        } else if (key == "alpha") {
            design.alpha = parse_double(value, ctx);
        } else if (key == "nsched") {
            design.n_sched = parse_schedule(value);
        } else if (key == "cov") {
            if (value == "identity") {
                design.cov = CovKind::identity;
            } else if (value.rfind("ar1:", 0) == 0) {
                design.cov = CovKind::ar1;
                design.rho = parse_double(value.substr(4), ctx);
            } else {
                throw UsageError("design: cov must be 'identity' or 'ar1:<rho>'");
            }
        } else if (key == "grid") {
            design.grid = parse_double_list(value, key);
            design.grid_mode = GridMode::fixed;
            grid_set = true;
        } else if (key == "cgrid") {
            design.grid = parse_double_list(value, key);
            design.grid_mode = GridMode::scaled;
            cgrid_set = true;
        } else if (key == "coords") {
            design.coords.clear();
            for (double v : parse_double_list(value, key)) {
                design.coords.push_back(static_cast<long>(v) - 1); // 1-based in files
            }
        } else if (key == "beta0") {
            const auto values = parse_double_list(value, key);
            design.beta0.resize(static_cast<long>(values.size()));
            for (std::size_t i = 0; i < values.size(); ++i) {
                design.beta0[static_cast<long>(i)] = values[i];
            }
        } else {
            throw UsageError("design: unknown key '" + key + "'");
        }
    }
    if (grid_set && cgrid_set) {
        throw UsageError("design: grid and cgrid are mutually exclusive");
    }
    finalize_design(design);
    return design;
}

Matrix covariance_matrix(const SimDesign& design) {
    if (design.cov == CovKind::identity) {
        return Matrix::Identity(design.p, design.p);
    }
    Matrix sigma(design.p, design.p);
    for (long i = 0; i < design.p; ++i) {
        for (long j = 0; j < design.p; ++j) {
            sigma(i, j) = std::pow(design.rho, std::abs(i - j));
        }
    }
    return sigma;
}

Matrix covariance_cholesky(const SimDesign& design) {
    if (design.cov == CovKind::identity) {
        return Matrix::Identity(design.p, design.p);
    }
    Eigen::LLT<Matrix> llt(covariance_matrix(design));
    if (llt.info() != Eigen::Success) {
        throw NumericError("design covariance is not positive definite");
    }
    return llt.matrixL();
}

BatchData gen_batch(const SimDesign& design, long rep, long j, const Matrix* chol) {
    if (j < 1 || j > static_cast<long>(design.n_sched.size())) {
        throw UsageError("gen_batch: batch index out of schedule range");
    }
    const long n = design.n_sched[static_cast<std::size_t>(j - 1)];
    const long p = design.p;

    auto rng = make_rng(design.seed, static_cast<std::uint64_t>(rep),
                        static_cast<std::uint64_t>(j));
    std::normal_distribution<double> gauss(0.0, 1.0);

    BatchData batch;
    batch.batch_index = j;
    batch.X.resize(n, p);
    for (long i = 0; i < n; ++i) {
        for (long k = 0; k < p; ++k) {
            batch.X(i, k) = gauss(rng);
        }
    }
    if (design.cov != CovKind::identity) {
        if (chol == nullptr) {
            throw UsageError("gen_batch: Cholesky factor required for correlated designs");
        }
        batch.X = batch.X * chol->transpose();
    }
    batch.y = batch.X * design.beta0;
    for (long i = 0; i < n; ++i) {
        batch.y[i] += design.sigma_eps * gauss(rng);
    }
    return batch;
}

SimOutput run_replications(const SimDesign& design, const EngineConfig& base_cfg) {
    SimOutput out;
    const Matrix chol = covariance_cholesky(design);
    const long b = static_cast<long>(design.n_sched.size());

    for (long rep = 1; rep <= design.replications; ++rep) {
        EngineConfig cfg = base_cfg;
        cfg.grid = design.grid;
        cfg.grid_mode = design.grid_mode;
        cfg.coords = design.coords;
        cfg.alpha = design.alpha;
        cfg.seed = derive_seed(design.seed, static_cast<std::uint64_t>(rep), 0);

        // Buffer locally so a mid-stream failure leaves no partial replication
        // in the output.
        std::vector<RawResult> rep_rows;
        try {
            Engine engine(cfg);
            for (long j = 1; j <= b; ++j) {
                const BatchData batch = gen_batch(design, rep, j, &chol);
                BatchOutput bo = engine.process_batch(batch);
                for (const auto& res : bo.results) {
                    rep_rows.push_back({rep, bo.batch, bo.lambda, bo.sigma2, res});
                }
            }
            out.rows.insert(out.rows.end(), rep_rows.begin(), rep_rows.end());
            out.audit.checked += engine.audit().checked;
            if (engine.audit().max_violation > out.audit.max_violation) {
                out.audit.max_violation = engine.audit().max_violation;
            }
        } catch (const Error& e) {
            out.failures.push_back({rep, e.what()});
        }
    }
    return out;
}

} // namespace odl

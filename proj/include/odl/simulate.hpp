#pragma once

#include "odl/batch.hpp"
#include "odl/engine.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace odl {

enum class CovKind { identity, ar1 };

/// Data-generating configuration for one experiment: batches of multivariate
/// normal rows with y = X * beta0 + sigma_eps * eps. The default truth
/// vector has its first ceil(s0/2) nonzeros at 1 and the rest at 0.01, in the
/// first s0 coordinates.
struct SimDesign {
    long p = 0;
    long s0 = 0;
    Vector beta0;               ///< filled by finalize_design when empty
    std::vector<long> n_sched;  ///< batch sizes n_1..n_b
    double sigma_eps = 1.0;
    CovKind cov = CovKind::identity;
    double rho = 0.0;           ///< ar1 parameter
    std::uint64_t seed = 1;
    long replications = 1;

    // engine-facing settings carried with the design
    std::vector<double> grid = {0.15, 0.20, 0.25, 0.30};
    GridMode grid_mode = GridMode::fixed;
    std::vector<long> coords;   ///< 0-based; empty = all p while p <= 500
    double alpha = 0.05;
};

/// Parse the flat key=value design format (see README). Unknown keys are an
/// error. finalize_design is applied before returning.
SimDesign parse_design_file(const std::string& path);

/// Fill defaults (beta0 pattern, coordinate list) and check invariants.
void finalize_design(SimDesign& design);

/// Population covariance matrix of the design.
Matrix covariance_matrix(const SimDesign& design);

/// Lower Cholesky factor of the covariance (identity shortcut included).
Matrix covariance_cholesky(const SimDesign& design);

/// Generate batch j (1-based) of one replication. Reproducible from
/// (design.seed, rep, j) alone. chol may be null for identity covariance.
BatchData gen_batch(const SimDesign& design, long rep, long j, const Matrix* chol);

/// One emitted inference row of a replicated run.
struct RawResult {
    long rep = 0;
    long batch = 0;
    double lambda = 0.0;
    double sigma2 = 0.0;
    InferenceResult res;
};

struct RepFailure {
    long rep = 0;
    std::string message;
};

struct SimOutput {
    std::vector<RawResult> rows;
    std::vector<RepFailure> failures;
    AuditStats audit;
};

/// Stream every replication through a fresh engine. Engine-facing fields of
/// the design override the corresponding fields of base_cfg; solver settings
/// and audit preferences are taken from base_cfg. Replication failures are
/// recorded, not rethrown.
SimOutput run_replications(const SimDesign& design, const EngineConfig& base_cfg);

} // namespace odl

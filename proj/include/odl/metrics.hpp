#pragma once

#include "odl/simulate.hpp"

#include <string>
#include <vector>

namespace odl {

/// Metrics for one (batch, truth-group) cell, averaged over the group's
/// tracked coordinates and all successful replications.
struct GroupMetrics {
    long batch = 0;
    double truth = 0.0;  ///< the group's shared true coefficient
    double a_bias = 0.0; ///< mean |estimate - truth|
    double ase = 0.0;    ///< mean model-based standard error
    double ese = 0.0;    ///< per-coordinate sd of estimates (n-1), averaged;
                         ///< NaN when fewer than 2 replications
    double cp = 0.0;     ///< share of intervals covering the truth
    double acl = 0.0;    ///< mean interval width
};

/// Normality diagnostics for one tracked coordinate at the last batch:
/// sorted standardized estimates against normal plotting positions.
struct CoordinateDiagnostics {
    long r = 0;                       ///< 1-based coordinate
    std::vector<double> theoretical;  ///< norm_quantile((i - 0.5) / m)
    std::vector<double> standardized; ///< sorted (estimate - truth) / se
    double ks = 0.0;                  ///< sup distance to the standard normal CDF
    double qq_correlation = 0.0;
};

struct MetricsReport {
    long replications = 0; ///< replications contributing rows
    std::vector<GroupMetrics> cells; ///< batch-major; groups by descending truth
    std::vector<CoordinateDiagnostics> diagnostics; ///< empty when replications < 2
};

/// Reduce raw rows to per-(batch, group) metrics plus QQ diagnostics.
/// Groups are the distinct true coefficient values among the tracked
/// coordinates. The reduction walks a canonical (batch, coordinate,
/// replication) order, so the result is bitwise independent of row order.
/// Rows flagged non-identifiable are excluded from the averages.
MetricsReport summarize(const std::vector<RawResult>& rows, const SimDesign& design);

/// QQ pairs, KS statistic, and QQ correlation per tracked coordinate at the
/// last batch. Throws UsageError when fewer than 2 replications are present;
/// coordinates with fewer than 2 usable values are omitted.
std::vector<CoordinateDiagnostics> qq_data(const std::vector<RawResult>& rows,
                                           const SimDesign& design);

const char* status_label(InferenceStatus status);

// CSV renderings (full file contents, trailing newline included).
std::string metrics_csv(const MetricsReport& report);      // batch,group,metric,value
std::string qq_csv(const MetricsReport& report);           // coordinate,theoretical,standardized
std::string diagnostics_csv(const MetricsReport& report);  // coordinate,ks_statistic,qq_correlation
std::string raw_csv(const std::vector<RawResult>& rows);

/// Inverse of raw_csv, for the report subcommand. Throws DataError on
/// malformed files.
std::vector<RawResult> read_raw_csv(const std::string& path);

} // namespace odl

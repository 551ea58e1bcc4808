#include "odl/metrics.hpp"

#include "odl/csv.hpp"
#include "odl/debias.hpp"
#include "odl/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

namespace odl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Cell {
    double estimate = 0.0;
    double se = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool filled = false;
    bool usable = false; // status ok and all interval fields finite
};

// Raw rows rearranged into a dense (batch, coordinate slot, replication)
// grid. Reductions then walk a canonical order, making every statistic
// bitwise independent of the incoming row order.
struct DenseRaw {
    long batches = 0;
    long slots = 0;
    long reps = 0;
    long reps_present = 0;
    std::vector<Cell> cells;

    const Cell& at(long batch, long slot, long rep) const {
        return cells[static_cast<std::size_t>(((batch - 1) * slots + slot) * reps + rep)];
    }
    Cell& at(long batch, long slot, long rep) {
        return cells[static_cast<std::size_t>(((batch - 1) * slots + slot) * reps + rep)];
    }
};

DenseRaw densify(const std::vector<RawResult>& rows, const SimDesign& design) {
    DenseRaw d;
    d.batches = static_cast<long>(design.n_sched.size());
    d.slots = static_cast<long>(design.coords.size());
    d.reps = design.replications;
    d.cells.assign(static_cast<std::size_t>(d.batches * d.slots * d.reps), Cell{});

    std::unordered_map<long, long> slot_of; // 1-based coordinate -> slot
    for (long s = 0; s < d.slots; ++s) slot_of.emplace(design.coords[s] + 1, s);

    std::vector<char> rep_seen(static_cast<std::size_t>(d.reps), 0);
    for (const RawResult& row : rows) {
        if (row.rep < 1 || row.rep > d.reps) {
            throw DataError("raw results: replication " + std::to_string(row.rep) +
                            " outside [1, " + std::to_string(d.reps) + "]");
        }
        if (row.batch < 1 || row.batch > d.batches) {
            throw DataError("raw results: batch " + std::to_string(row.batch) +
                            " outside [1, " + std::to_string(d.batches) + "]");
        }
        auto it = slot_of.find(row.res.r);
        if (it == slot_of.end()) {
            throw DataError("raw results: coordinate " + std::to_string(row.res.r) +
                            " is not tracked by the design");
        }
        Cell& cell = d.at(row.batch, it->second, row.rep - 1);
        if (cell.filled) {
            throw DataError("raw results: duplicate row for replication " +
                            std::to_string(row.rep) + ", batch " + std::to_string(row.batch) +
                            ", coordinate " + std::to_string(row.res.r));
        }
        cell.estimate = row.res.estimate;
        cell.se = row.res.se;
        cell.lo = row.res.ci_low;
        cell.hi = row.res.ci_high;
        cell.filled = true;
        cell.usable = row.res.status == InferenceStatus::ok && std::isfinite(cell.estimate) &&
                      std::isfinite(cell.se) && std::isfinite(cell.lo) && std::isfinite(cell.hi);
        rep_seen[static_cast<std::size_t>(row.rep - 1)] = 1;
    }
    for (char seen : rep_seen) d.reps_present += seen;
    return d;
}

struct Group {
    double truth = 0.0;
    std::vector<long> slots; // in tracked-coordinate order
};

// Distinct true coefficients among the tracked coordinates, largest first
// (signals before nulls, matching the usual table layout).
std::vector<Group> make_groups(const SimDesign& design) {
    std::vector<double> truths;
    for (long coord : design.coords) {
        const double t = design.beta0[coord];
        if (std::find(truths.begin(), truths.end(), t) == truths.end()) truths.push_back(t);
    }
    std::sort(truths.begin(), truths.end(), std::greater<double>());

    std::vector<Group> groups(truths.size());
    for (std::size_t g = 0; g < truths.size(); ++g) groups[g].truth = truths[g];
    for (long s = 0; s < static_cast<long>(design.coords.size()); ++s) {
        const double t = design.beta0[design.coords[static_cast<std::size_t>(s)]];
        for (Group& group : groups) {
            if (group.truth == t) {
                group.slots.push_back(s);
                break;
            }
        }
    }
    return groups;
}

// Sample standard deviation (divisor n-1) of the usable estimates of one
// (batch, slot) column, walking replications in order. NaN when n < 2.
double column_sd(const DenseRaw& d, long batch, long slot) {
    long n = 0;
    double sum = 0.0;
    for (long rep = 0; rep < d.reps; ++rep) {
        const Cell& c = d.at(batch, slot, rep);
        if (!c.usable) continue;
        sum += c.estimate;
        ++n;
    }
    if (n < 2) return kNaN;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (long rep = 0; rep < d.reps; ++rep) {
        const Cell& c = d.at(batch, slot, rep);
        if (!c.usable) continue;
        const double dev = c.estimate - mean;
        ss += dev * dev;
    }
    return std::sqrt(ss / static_cast<double>(n - 1));
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) return kNaN;
    return sxy / std::sqrt(sxx * syy);
}

long parse_long_field(const std::string& text, const std::string& context) {
    long value = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw DataError(context + ": expected an integer, got \"" + text + "\"");
    }
    return value;
}

double parse_maybe_na(const std::string& text, const std::string& context) {
    if (text == "NA") return kNaN;
    return parse_double(text, context);
}

} // namespace

MetricsReport summarize(const std::vector<RawResult>& rows, const SimDesign& design) {
    if (rows.empty()) throw DataError("no raw results to summarize");
    const DenseRaw d = densify(rows, design);
    const std::vector<Group> groups = make_groups(design);

    MetricsReport report;
    report.replications = d.reps_present;
    for (long batch = 1; batch <= d.batches; ++batch) {
        for (const Group& group : groups) {
            GroupMetrics cell;
            cell.batch = batch;
            cell.truth = group.truth;

            long n = 0, covered = 0;
            double abs_bias = 0.0, se_sum = 0.0, width = 0.0;
            for (long slot : group.slots) {
                for (long rep = 0; rep < d.reps; ++rep) {
                    const Cell& c = d.at(batch, slot, rep);
                    if (!c.usable) continue;
                    ++n;
                    abs_bias += std::abs(c.estimate - group.truth);
                    se_sum += c.se;
                    width += c.hi - c.lo;
                    if (c.lo <= group.truth && group.truth <= c.hi) ++covered;
                }
            }
            if (n > 0) {
                cell.a_bias = abs_bias / static_cast<double>(n);
                cell.ase = se_sum / static_cast<double>(n);
                cell.cp = static_cast<double>(covered) / static_cast<double>(n);
                cell.acl = width / static_cast<double>(n);
            } else {
                cell.a_bias = cell.ase = cell.cp = cell.acl = kNaN;
            }

            long sd_count = 0;
            double sd_sum = 0.0;
            for (long slot : group.slots) {
                const double sd = column_sd(d, batch, slot);
                if (std::isnan(sd)) continue;
                sd_sum += sd;
                ++sd_count;
            }
            cell.ese = sd_count > 0 ? sd_sum / static_cast<double>(sd_count) : kNaN;

            report.cells.push_back(cell);
        }
    }
    if (report.replications >= 2) report.diagnostics = qq_data(rows, design);
    return report;
}

std::vector<CoordinateDiagnostics> qq_data(const std::vector<RawResult>& rows,
                                           const SimDesign& design) {
    if (rows.empty()) throw DataError("no raw results for QQ diagnostics");
    const DenseRaw d = densify(rows, design);
    if (d.reps_present < 2) {
        throw UsageError("QQ diagnostics need at least 2 replications");
    }

    std::vector<CoordinateDiagnostics> out;
    const long last = d.batches;
    for (long slot = 0; slot < d.slots; ++slot) {
        const long coord = design.coords[static_cast<std::size_t>(slot)];
        const double truth = design.beta0[coord];

        CoordinateDiagnostics diag;
        diag.r = coord + 1;
        for (long rep = 0; rep < d.reps; ++rep) {
            const Cell& c = d.at(last, slot, rep);
            if (!c.usable || !(c.se > 0.0)) continue;
            diag.standardized.push_back((c.estimate - truth) / c.se);
        }
        const long m = static_cast<long>(diag.standardized.size());
        if (m < 2) continue; // too many failures at this coordinate
        std::sort(diag.standardized.begin(), diag.standardized.end());

        diag.theoretical.resize(static_cast<std::size_t>(m));
        double ks = 0.0;
        for (long i = 1; i <= m; ++i) {
            const double q = (static_cast<double>(i) - 0.5) / static_cast<double>(m);
            diag.theoretical[static_cast<std::size_t>(i - 1)] = norm_quantile(q);
            const double s = diag.standardized[static_cast<std::size_t>(i - 1)];
            const double cdf = norm_cdf(s);
            ks = std::max(ks, cdf - (static_cast<double>(i) - 1.0) / static_cast<double>(m));
            ks = std::max(ks, static_cast<double>(i) / static_cast<double>(m) - cdf);
        }
        diag.ks = ks;
        diag.qq_correlation = pearson(diag.theoretical, diag.standardized);
        out.push_back(std::move(diag));
    }
    return out;
}

const char* status_label(InferenceStatus status) {
    return status == InferenceStatus::ok ? "ok" : "non_identifiable";
}

std::string metrics_csv(const MetricsReport& report) {
    static const char* const names[5] = {"a_bias", "ase", "ese", "cp", "acl"};
    std::string out = "batch,group,metric,value\n";
    for (const GroupMetrics& cell : report.cells) {
        const double values[5] = {cell.a_bias, cell.ase, cell.ese, cell.cp, cell.acl};
        for (int k = 0; k < 5; ++k) {
            out += join_csv({std::to_string(cell.batch), format_double(cell.truth), names[k],
                             format_double(values[k])});
            out += '\n';
        }
    }
    return out;
}

std::string qq_csv(const MetricsReport& report) {
    std::string out = "coordinate,theoretical,standardized\n";
    for (const CoordinateDiagnostics& diag : report.diagnostics) {
        for (std::size_t i = 0; i < diag.theoretical.size(); ++i) {
            out += join_csv({std::to_string(diag.r), format_double(diag.theoretical[i]),
                             format_double(diag.standardized[i])});
            out += '\n';
        }
    }
    return out;
}

std::string diagnostics_csv(const MetricsReport& report) {
    std::string out = "coordinate,ks_statistic,qq_correlation\n";
    for (const CoordinateDiagnostics& diag : report.diagnostics) {
        out += join_csv({std::to_string(diag.r), format_double(diag.ks),
                         format_double(diag.qq_correlation)});
        out += '\n';
    }
    return out;
}

static const char* const kRawHeader =
    "rep,batch,coordinate,estimate,se,ci_low,ci_high,lambda,sigma2,status";

std::string raw_csv(const std::vector<RawResult>& rows) {
    std::string out = std::string(kRawHeader) + "\n";
    for (const RawResult& row : rows) {
        out += join_csv({std::to_string(row.rep), std::to_string(row.batch),
                         std::to_string(row.res.r), format_double(row.res.estimate),
                         format_double(row.res.se), format_double(row.res.ci_low),
                         format_double(row.res.ci_high), format_double(row.lambda),
                         format_double(row.sigma2), status_label(row.res.status)});
        out += '\n';
    }
    return out;
}

std::vector<RawResult> read_raw_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::vector<RawResult> rows;
    std::size_t pos = 0;
    long line_no = 0;
    bool saw_header = false;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }

        const std::string context = path + ":" + std::to_string(line_no);
        if (!saw_header) {
            if (line != kRawHeader) {
                throw DataError(context + ": expected header \"" + kRawHeader + "\"");
            }
            saw_header = true;
            continue;
        }
        if (fields.size() != 10) {
            throw DataError(context + ": expected 10 fields, got " +
                            std::to_string(fields.size()));
        }
        RawResult row;
        row.rep = parse_long_field(fields[0], context);
        row.batch = parse_long_field(fields[1], context);
        row.res.r = parse_long_field(fields[2], context);
        row.res.estimate = parse_maybe_na(fields[3], context);
        row.res.se = parse_maybe_na(fields[4], context);
        row.res.ci_low = parse_maybe_na(fields[5], context);
        row.res.ci_high = parse_maybe_na(fields[6], context);
        row.lambda = parse_maybe_na(fields[7], context);
        row.sigma2 = parse_maybe_na(fields[8], context);
        if (fields[9] == "ok") {
            row.res.status = InferenceStatus::ok;
        } else if (fields[9] == "non_identifiable") {
            row.res.status = InferenceStatus::non_identifiable;
        } else {
            throw DataError(context + ": unknown status \"" + fields[9] + "\"");
        }
        rows.push_back(row);
    }
    if (!saw_header) throw DataError(path + ": empty file");
    return rows;
}

} // namespace odl

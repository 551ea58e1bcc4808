// Command-line front end: fit real batch streams, run simulation studies,
// rebuild reports from raw results, and inspect checkpoints.

#include "odl/checkpoint.hpp"
#include "odl/csv.hpp"
#include "odl/engine.hpp"
#include "odl/errors.hpp"
#include "odl/metrics.hpp"
#include "odl/simulate.hpp"
#include "odl/svg.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

struct CommonOpts {
    std::vector<double> grid;
    std::vector<double> cgrid;
    double alpha = 0.05;
    std::vector<long> coords; // 1-based on the command line
    double eta = 0.0;         // 0 = automatic step size
    double tol = 1e-6;
    long max_iter = 100000;
    std::uint64_t seed = 1;
    std::string out = ".";
    long cv_folds = 5;
    long audit_every = 0;
};

struct FlagPresence {
    bool grid = false;
    bool cgrid = false;
    bool alpha = false;
    bool coords = false;
    bool seed = false;
};

void add_common_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--grid", o.grid, "fixed lambda grid (comma separated)")->delimiter(',');
    cmd->add_option("--c-grid", o.cgrid,
                    "C grid for scaled penalties C*sqrt(log p / N)")
        ->delimiter(',');
    cmd->add_option("--alpha", o.alpha, "miscoverage level of the intervals");
    cmd->add_option("--coords", o.coords, "tracked coordinates, 1-based (comma separated)")
        ->delimiter(',');
    cmd->add_option("--eta", o.eta, "proximal step size (0 = automatic)");
    cmd->add_option("--tol", o.tol, "solver stopping tolerance");
    cmd->add_option("--max-iter", o.max_iter, "solver iteration cap");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--cv-folds", o.cv_folds, "first-batch cross-validation folds");
    cmd->add_option("--audit-every", o.audit_every,
                    "audit every n-th solve against the optimality conditions");
}

FlagPresence presence(const CLI::App* cmd) {
    FlagPresence f;
    f.grid = cmd->count("--grid") > 0;
    f.cgrid = cmd->count("--c-grid") > 0;
    f.alpha = cmd->count("--alpha") > 0;
    f.coords = cmd->count("--coords") > 0;
    f.seed = cmd->count("--seed") > 0;
    return f;
}

std::vector<long> to_zero_based(const std::vector<long>& coords) {
    std::vector<long> out;
    out.reserve(coords.size());
    for (long r : coords) {
        if (r < 1) {
            throw odl::UsageError("coordinates are 1-based; got " + std::to_string(r));
        }
        out.push_back(r - 1);
    }
    return out;
}

odl::EngineConfig make_config(const CommonOpts& o) {
    if (!o.grid.empty() && !o.cgrid.empty()) {
        throw odl::UsageError("--grid and --c-grid are mutually exclusive");
    }
    odl::EngineConfig cfg;
    if (!o.cgrid.empty()) {
        cfg.grid = o.cgrid;
        cfg.grid_mode = odl::GridMode::scaled;
    } else if (!o.grid.empty()) {
        cfg.grid = o.grid;
    }
    cfg.alpha = o.alpha;
    cfg.coords = to_zero_based(o.coords);
    cfg.solver.eta = o.eta;
    cfg.solver.tol = o.tol;
    cfg.solver.max_iter = o.max_iter;
    cfg.seed = o.seed;
    cfg.cv_folds = o.cv_folds;
    cfg.audit_every = o.audit_every;
    return cfg;
}

std::filesystem::path prepare_out_dir(const std::string& out) {
    std::filesystem::path dir(out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw odl::DataError("cannot create output directory " + out + ": " + ec.message());
    return dir;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw odl::DataError("cannot open " + path.string() + " for writing");
    f << content;
    if (!f) throw odl::DataError("failed writing " + path.string());
}

std::string doubles_field(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) s += ' ';
        s += odl::format_double(v[i]);
    }
    return s;
}

std::string config_info(const odl::EngineConfig& cfg) {
    std::string s;
    s += "grid mode: ";
    s += (cfg.grid_mode == odl::GridMode::fixed ? "fixed" : "scaled");
    s += "\ngrid: " + doubles_field(cfg.grid);
    s += "\nalpha: " + odl::format_double(cfg.alpha);
    s += "\ncoords (1-based): ";
    if (cfg.coords.empty()) {
        s += "all";
    } else {
        for (std::size_t i = 0; i < cfg.coords.size(); ++i) {
            if (i > 0) s += ' ';
            s += std::to_string(cfg.coords[i] + 1);
        }
    }
    s += "\neta: ";
    s += (cfg.solver.eta == 0.0 ? std::string("auto") : odl::format_double(cfg.solver.eta));
    s += "\ntol: " + odl::format_double(cfg.solver.tol);
    s += "\nmax iterations: " + std::to_string(cfg.solver.max_iter);
    s += "\nseed: " + std::to_string(cfg.seed);
    s += "\ncv folds: " + std::to_string(cfg.cv_folds);
    s += "\naudit every: " + std::to_string(cfg.audit_every);
    s += "\n";
    return s;
}

// ---------------------------------------------------------------- fit ----

void center_columns(odl::BatchData& batch) {
    for (long j = 0; j < batch.cols(); ++j) {
        batch.X.col(j).array() -= batch.X.col(j).mean();
    }
}

int cmd_fit(const std::vector<std::string>& files, const CommonOpts& opts,
            const std::string& resume_path, bool center) {
    const odl::EngineConfig cfg = make_config(opts);
    const std::filesystem::path out_dir = prepare_out_dir(opts.out);

    std::unique_ptr<odl::Engine> engine;
    if (resume_path.empty()) {
        engine = std::make_unique<odl::Engine>(cfg);
    } else {
        engine = std::make_unique<odl::Engine>(cfg, odl::read_checkpoint(resume_path));
    }

    std::string results = "batch,coordinate,estimate,se,ci_low,ci_high,lambda,sigma2,status\n";
    std::vector<std::string> schema; // feature names of the first batch
    long batches = 0;

    for (const std::string& path : files) {
        // One raw batch lives in memory at a time; the table and batch are
        // released before the next file is opened.
        std::vector<std::string> names;
        odl::BatchData batch = odl::table_to_batch(odl::read_csv(path), path, &names);
        if (schema.empty()) {
            schema = names;
        } else {
            if (names.size() != schema.size()) {
                throw odl::DataError(path + ": expected " + std::to_string(schema.size()) +
                                     " feature columns, got " + std::to_string(names.size()));
            }
            for (std::size_t i = 0; i < schema.size(); ++i) {
                if (names[i] != schema[i]) {
                    throw odl::DataError(path + ": schema drift, column \"" + schema[i] +
                                         "\" became \"" + names[i] + "\"");
                }
            }
        }
        if (center) center_columns(batch);

        const odl::BatchOutput bo = engine->process_batch(batch);
        ++batches;
        for (const odl::InferenceResult& res : bo.results) {
            results += odl::join_csv(
                {std::to_string(bo.batch), std::to_string(res.r),
                 odl::format_double(res.estimate), odl::format_double(res.se),
                 odl::format_double(res.ci_low), odl::format_double(res.ci_high),
                 odl::format_double(bo.lambda), odl::format_double(bo.sigma2),
                 odl::status_label(res.status)});
            results += '\n';
        }
    }

    write_file(out_dir / "results.csv", results);
    odl::write_checkpoint(engine->snapshot(), (out_dir / "checkpoint.odl").string());

    std::string info = "command: fit\n" + config_info(engine->config());
    info += "centered: ";
    info += (center ? "yes" : "no");
    info += "\nresumed from: " + (resume_path.empty() ? std::string("-") : resume_path);
    info += "\nbatches this run: " + std::to_string(batches);
    info += "\nstream batches: " + std::to_string(engine->stats().batches());
    info += "\nstream rows: " + std::to_string(engine->stats().N());
    if (engine->config().audit_every > 0) {
        info += "\naudit checked: " + std::to_string(engine->audit().checked);
        info += "\naudit max violation: " + odl::format_double(engine->audit().max_violation);
    }
    info += "\n";
    write_file(out_dir / "run_info.txt", info);
    return 0;
}

// ----------------------------------------------------------- simulate ----

void write_report_files(const odl::MetricsReport& report, const odl::SimDesign& design,
                        const std::filesystem::path& out_dir) {
    write_file(out_dir / "metrics.csv", odl::metrics_csv(report));
    write_file(out_dir / "qq.csv", odl::qq_csv(report));
    write_file(out_dir / "diagnostics.csv", odl::diagnostics_csv(report));

    std::vector<odl::PlotSeries> qq_series;
    for (const odl::CoordinateDiagnostics& diag : report.diagnostics) {
        odl::PlotSeries s;
        s.label = "coord " + std::to_string(diag.r);
        s.x = diag.theoretical;
        s.y = diag.standardized;
        qq_series.push_back(std::move(s));
    }
    write_file(out_dir / "qq.svg",
               odl::svg_scatter("Standardized estimates vs normal quantiles",
                                "theoretical quantile", "standardized estimate", qq_series,
                                true));

    // One average-CI-length trajectory per truth group, batch on the x axis.
    std::vector<odl::PlotSeries> acl_series;
    for (const odl::GroupMetrics& cell : report.cells) {
        odl::PlotSeries* series = nullptr;
        const std::string label = "beta=" + odl::format_double(cell.truth);
        for (odl::PlotSeries& s : acl_series) {
            if (s.label == label) series = &s;
        }
        if (series == nullptr) {
            acl_series.push_back({label, {}, {}});
            series = &acl_series.back();
        }
        series->x.push_back(static_cast<double>(cell.batch));
        series->y.push_back(cell.acl);
    }
    write_file(out_dir / "ci_width.svg",
               odl::svg_lines("Average confidence-interval length by batch", "batch",
                              "average CI length", acl_series));

    (void)design;
}

std::string report_info(const odl::MetricsReport& report, const odl::SimDesign& design) {
    std::string s;
    s += "replications with results: " + std::to_string(report.replications);
    s += "\nzero group: averaged over all tracked zero coordinates\n";
    s += "design p: " + std::to_string(design.p);
    s += "\ndesign s0: " + std::to_string(design.s0);
    s += "\ndesign batches: " + std::to_string(design.n_sched.size());
    s += "\n";
    return s;
}

int cmd_simulate(const std::string& design_path, const CommonOpts& opts,
                 const FlagPresence& given) {
    odl::SimDesign design = odl::parse_design_file(design_path);
    if (given.grid && given.cgrid) {
        throw odl::UsageError("--grid and --c-grid are mutually exclusive");
    }
    if (given.grid) {
        design.grid = opts.grid;
        design.grid_mode = odl::GridMode::fixed;
    }
    if (given.cgrid) {
        design.grid = opts.cgrid;
        design.grid_mode = odl::GridMode::scaled;
    }
    if (given.alpha) design.alpha = opts.alpha;
    if (given.coords) design.coords = to_zero_based(opts.coords);
    if (given.seed) design.seed = opts.seed;
    odl::finalize_design(design);

    odl::EngineConfig base;
    base.solver.eta = opts.eta;
    base.solver.tol = opts.tol;
    base.solver.max_iter = opts.max_iter;
    base.cv_folds = opts.cv_folds;
    base.audit_every = opts.audit_every;

    const std::filesystem::path out_dir = prepare_out_dir(opts.out);
    const odl::SimOutput sim = odl::run_replications(design, base);
    if (sim.rows.empty()) {
        std::string why = sim.failures.empty() ? std::string("no rows produced")
                                               : sim.failures.front().message;
        throw odl::NumericError("all replications failed: " + why);
    }

    const odl::MetricsReport report = odl::summarize(sim.rows, design);
    write_file(out_dir / "raw.csv", odl::raw_csv(sim.rows));
    write_report_files(report, design, out_dir);

    std::string info = "command: simulate\ndesign: " + design_path + "\n";
    info += report_info(report, design);
    info += "replications requested: " + std::to_string(design.replications);
    info += "\nfailed replications: " + std::to_string(sim.failures.size());
    for (const odl::RepFailure& f : sim.failures) {
        info += "\n  rep " + std::to_string(f.rep) + ": " + f.message;
    }
    if (base.audit_every > 0) {
        info += "\naudit checked: " + std::to_string(sim.audit.checked);
        info += "\naudit max violation: " + odl::format_double(sim.audit.max_violation);
    }
    info += "\n";
    write_file(out_dir / "run_info.txt", info);
    return 0;
}

// ------------------------------------------------------------- report ----

int cmd_report(const std::string& raw_path, const std::string& design_path,
               const CommonOpts& opts) {
    const odl::SimDesign design = odl::parse_design_file(design_path);
    const std::vector<odl::RawResult> rows = odl::read_raw_csv(raw_path);
    const odl::MetricsReport report = odl::summarize(rows, design);

    const std::filesystem::path out_dir = prepare_out_dir(opts.out);
    write_report_files(report, design, out_dir);

    std::string info = "command: report\nraw: " + raw_path + "\ndesign: " + design_path + "\n";
    info += report_info(report, design);
    write_file(out_dir / "run_info.txt", info);
    return 0;
}

// ----------------------------------------------------- checkpoint-info ----

long nonzeros(const odl::Vector& v) {
    long n = 0;
    for (long i = 0; i < v.size(); ++i) {
        if (v[i] != 0.0) ++n;
    }
    return n;
}

int cmd_checkpoint_info(const std::string& path) {
    const odl::EngineState st = odl::read_checkpoint(path);
    std::string s;
    s += "checkpoint: " + path + "\n";
    s += "p: " + std::to_string(st.p) + "\n";
    s += "batches: " + std::to_string(st.b) + "\n";
    s += "rows: " + std::to_string(st.N) + "\n";
    s += "grid mode: ";
    s += (st.mode == odl::GridMode::fixed ? "fixed" : "scaled");
    s += "\ngrid: " + doubles_field(st.grid) + "\n";
    s += "selected lambdas: " + doubles_field(st.selected) + "\n";
    s += "sigma2: " + odl::format_double(st.sigma2) + "\n";
    s += "lasso tracks: " + std::to_string(st.lasso.size()) + "\n";
    for (const odl::LassoTrack& t : st.lasso) {
        s += "  lambda " + odl::format_double(t.lambda) + ": nonzeros " +
             std::to_string(nonzeros(t.beta)) + ", sigma2 " + odl::format_double(t.sigma2) +
             "\n";
    }
    s += "projection tracks: " + std::to_string(st.projections.size()) + "\n";
    for (const odl::ProjectionTrack& t : st.projections) {
        s += "  coordinate " + std::to_string(t.r + 1) + ": a1 " + odl::format_double(t.a1) +
             ", gamma nonzeros " + std::to_string(nonzeros(t.gamma)) + "\n";
    }
    std::cout << s;
    return 0;
}

int exit_code_for(const odl::Error& e) {
    switch (e.kind()) {
    case odl::ErrorKind::usage:
        return 1;
    case odl::ErrorKind::data:
    case odl::ErrorKind::checkpoint:
        return 2;
    case odl::ErrorKind::numeric:
        return 3;
    }
    return 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online debiased lasso: streaming confidence intervals for "
                 "high-dimensional regression"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* fit = app.add_subcommand("fit", "process an ordered stream of batch CSV files");
    std::vector<std::string> fit_files;
    std::string resume_path;
    bool center = false;
    fit->add_option("files", fit_files, "batch CSV files, in stream order")
        ->required()
        ->expected(-1);
    add_common_options(fit, opts);
    fit->add_option("--resume", resume_path, "checkpoint to resume from");
    fit->add_flag("--center", center, "center feature columns within each batch");

    auto* simulate = app.add_subcommand("simulate", "run a replicated simulation study");
    std::string design_path;
    simulate->add_option("--design", design_path, "design file (key=value lines)")->required();
    add_common_options(simulate, opts);

    auto* report = app.add_subcommand("report", "recompute metrics from raw results");
    std::string raw_path;
    std::string report_design;
    report->add_option("--raw", raw_path, "raw.csv from a simulate run")->required();
    report->add_option("--design", report_design, "design file the raw results came from")
        ->required();
    report->add_option("--out", opts.out, "output directory");

    auto* info = app.add_subcommand("checkpoint-info", "print a checkpoint summary");
    std::string info_path;
    info->add_option("checkpoint", info_path, "checkpoint file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (app.got_subcommand(fit)) return cmd_fit(fit_files, opts, resume_path, center);
        if (app.got_subcommand(simulate)) {
            return cmd_simulate(design_path, opts, presence(simulate));
        }
        if (app.got_subcommand(report)) return cmd_report(raw_path, report_design, opts);
        if (app.got_subcommand(info)) return cmd_checkpoint_info(info_path);
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const odl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 3;
    }
}

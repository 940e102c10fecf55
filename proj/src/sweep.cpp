#include "phi4/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "phi4/svg.hpp"

namespace phi4 {

namespace {

GreenSequence build_start(const std::string& label, double lambda, int n_work,
                          bool include_j2_zero, double d0) {
    if (label == "max") return build_h_max(lambda, n_work, d0);
    if (label == "min") return build_h_min(lambda, n_work);
    if (label == "h0") return build_h0(lambda, n_work, include_j2_zero, d0);
    throw std::invalid_argument("unknown start label: " + label);
}

std::string lambda_tag(double lambda) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", lambda);
    return buf;
}

std::string row_status(const IterationTrace& trace, int nu, int last_nu) {
    switch (trace.status) {
        case TraceStatus::converged:
            return nu == trace.nu_event ? "converged" : "ok";
        case TraceStatus::diverged:
            return nu == trace.nu_event ? "diverged" : "ok";
        case TraceStatus::singular:
            return nu == last_nu ? "singular" : "ok";
        case TraceStatus::running:
            return "ok";
    }
    return "ok";
}

void append_trace_rows(std::vector<SweepRow>& rows, const IterationTrace& trace,
                       int n_max) {
    const int n_top = std::min(25, n_max);
    const int last_nu = static_cast<int>(trace.snapshots.size()) - 1;
    for (int nu = 0; nu <= last_nu; ++nu) {
        const TraceSnapshot& snap = trace.snapshots[static_cast<std::size_t>(nu)];
        for (int n = 7; n <= n_top; n += 2) {
            SweepRow row;
            row.lambda = trace.lambda;
            row.n = n;
            row.nu = nu;
            row.start = trace.start_label;
            row.delta = snap.delta.at(n);
            row.h_sign = snap.h.at(n).sign;
            row.h_log10_abs = snap.h.at(n).log10_mag;
            row.status = row_status(trace, nu, last_nu);
            rows.push_back(std::move(row));
        }
    }
}

void sort_rows(std::vector<SweepRow>& rows) {
    std::sort(rows.begin(), rows.end(),
              [](const SweepRow& a, const SweepRow& b) {
                  if (a.lambda != b.lambda) return a.lambda < b.lambda;
                  if (a.start != b.start) return a.start < b.start;
                  if (a.nu != b.nu) return a.nu < b.nu;
                  return a.n < b.n;
              });
}

/// Figure-set coupling grids (caption inventories).
const std::vector<double>& set1_lambdas() {
    static const std::vector<double> v = {0.0005, 0.001, 0.01, 0.015,
                                          0.02, 0.025, 0.03, 0.05,
                                          0.07, 0.09, 0.1, 0.15};
    return v;
}
const std::vector<double>& set2_lambdas() {
    static const std::vector<double> v = {0.001, 0.01, 0.02, 0.03, 0.1, 0.15};
    return v;
}

struct SummaryRange {
    double lo, hi;
};
const std::vector<SummaryRange>& set3_ranges() {
    static const std::vector<SummaryRange> v = {{0.001, 0.01}, {0.001, 0.03}};
    return v;
}

std::vector<const SweepRow*> select_rows(const std::vector<SweepRow>& rows,
                                         double lambda,
                                         const std::string& start, int nu_top) {
    std::vector<const SweepRow*> out;
    for (const auto& r : rows) {
        if (r.lambda == lambda && r.start == start && r.nu <= nu_top) {
            out.push_back(&r);
        }
    }
    return out;
}

/// One per-coupling convergence figure: delta_n versus the iteration index,
/// a colored line pair per order (solid upper start, dashed lower start).
bool per_lambda_figure(const std::vector<SweepRow>& rows, double lambda,
                       const std::string& path) {
    std::vector<svg::LineSeries> series;
    bool any_points = false;
    const auto& pal = svg::palette10();
    for (int n = 7; n <= 25; n += 2) {
        const std::string color = pal[static_cast<std::size_t>((n - 7) / 2)];
        for (const std::string start : {"max", "min"}) {
            svg::LineSeries s;
            s.color = color;
            s.dashed = (start == "min");
            if (start == "max") s.label = "n=" + std::to_string(n);
            for (const SweepRow* r : select_rows(rows, lambda, start, 6)) {
                if (r->n != n) continue;
                s.points.push_back({static_cast<double>(r->nu), r->delta});
                any_points = true;
            }
            if (!s.points.empty()) series.push_back(std::move(s));
        }
    }
    if (!any_points) return false;
    svg::ChartSpec spec;
    spec.title = "delta_n per iteration, lambda=" + lambda_tag(lambda) +
                 " (solid: upper start, dashed: lower start)";
    spec.x_label = "iteration nu";
    spec.y_label = "delta_n";
    svg::write_chart(spec, series, path);
    return true;
}

bool summary_figure(const std::vector<SweepRow>& rows, const SummaryRange& rng,
                    const std::string& path) {
    // Couplings present in the data that fall inside the summary window.
    std::set<double> lambdas;
    for (const auto& r : rows) {
        if (r.lambda >= rng.lo - 1e-15 && r.lambda <= rng.hi + 1e-15) {
            lambdas.insert(r.lambda);
        }
    }
    if (lambdas.empty()) return false;

    std::vector<svg::LineSeries> series;
    bool any_points = false;
    const auto& pal = svg::palette10();
    std::size_t li = 0;
    for (double lambda : lambdas) {
        const std::string color = pal[li % pal.size()];
        ++li;
        bool labeled = false;
        for (int n = 7; n <= 25; n += 2) {
            for (const std::string start : {"max", "min"}) {
                svg::LineSeries s;
                s.color = color;
                s.dashed = (start == "min");
                if (!labeled && start == "max") {
                    s.label = "lambda=" + lambda_tag(lambda);
                    labeled = true;
                }
                for (const SweepRow* r : select_rows(rows, lambda, start, 6)) {
                    if (r->n != n) continue;
                    s.points.push_back({static_cast<double>(r->nu), r->delta});
                    any_points = true;
                }
                if (!s.points.empty()) series.push_back(std::move(s));
            }
        }
    }
    if (!any_points) return false;
    svg::ChartSpec spec;
    spec.title = "Summary of delta_n iterations, lambda in [" +
                 lambda_tag(rng.lo) + ", " + lambda_tag(rng.hi) +
                 "] (solid: upper start, dashed: lower start)";
    spec.x_label = "iteration nu";
    spec.y_label = "delta_n";
    svg::write_chart(spec, series, path);
    return true;
}

}  // namespace

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::vector<SweepRow> sorted = rows;
    sort_rows(sorted);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("emit_csv: cannot open " + path);
    f << "lambda,n,nu,start,delta,h_sign,h_log10_abs,status\n";
    for (const auto& r : sorted) {
        f << format_real(r.lambda) << ',' << r.n << ',' << r.nu << ','
          << r.start << ',' << format_real(r.delta) << ',' << r.h_sign << ','
          << format_real(r.h_log10_abs) << ',' << r.status << '\n';
    }
    if (!f) throw std::runtime_error("emit_csv: write failed for " + path);
}

std::vector<std::string> emit_svg(const std::vector<SweepRow>& rows,
                                  int set_id, const std::string& path_prefix) {
    std::vector<std::string> files;
    if (set_id == 1 || set_id == 2) {
        const auto& lambdas = (set_id == 1) ? set1_lambdas() : set2_lambdas();
        for (double lambda : lambdas) {
            const std::string path = path_prefix + "set" +
                                     std::to_string(set_id) + "_lambda" +
                                     lambda_tag(lambda) + ".svg";
            if (per_lambda_figure(rows, lambda, path)) {
                files.push_back(path);
            } else {
                std::cerr << "emit_svg: no data for lambda=" << lambda_tag(lambda)
                          << ", skipping " << path << "\n";
            }
        }
    } else if (set_id == 3) {
        for (const auto& rng : set3_ranges()) {
            const std::string path = path_prefix + "set3_summary" +
                                     lambda_tag(rng.lo) + "_" +
                                     lambda_tag(rng.hi) + ".svg";
            if (summary_figure(rows, rng, path)) {
                files.push_back(path);
            } else {
                std::cerr << "emit_svg: no data in [" << rng.lo << ", "
                          << rng.hi << "], skipping " << path << "\n";
            }
        }
    } else {
        throw std::invalid_argument("emit_svg: set_id must be 1, 2 or 3");
    }
    return files;
}

SweepResult run_sweep(const SweepConfig& config) {
    if (config.lambda_list.empty()) {
        throw std::invalid_argument("run_sweep: empty coupling grid");
    }
    for (double l : config.lambda_list) {
        if (!(l > 0.0)) throw std::invalid_argument("run_sweep: lambda <= 0");
    }
    if (config.n_max < 7 || config.n_max % 2 == 0) {
        throw std::invalid_argument("run_sweep: n_max must be odd and >= 7");
    }
    if (config.nu_max < 1) {
        throw std::invalid_argument("run_sweep: nu_max must be >= 1");
    }

    // Effective grid: the configured list, extended by the figure couplings
    // when figures are requested.
    std::set<double> grid(config.lambda_list.begin(), config.lambda_list.end());
    if (config.write_svg) {
        grid.insert(config.figure_lambdas.begin(), config.figure_lambdas.end());
    }

    IterateConfig run_cfg;
    run_cfg.nu_max = config.nu_max;
    run_cfg.tol_converge = config.tol_converge;
    run_cfg.div_threshold = config.div_threshold;
    run_cfg.map.include_j2_zero = config.include_j2_zero;
    run_cfg.map.pad = config.pad;
    run_cfg.map.d0 = config.d0;
    const int n_work = config.n_max + 4;

    struct Cell {
        double lambda;
        std::string start;
    };
    std::vector<Cell> cells;
    for (double lambda : grid) {
        for (const auto& start : config.starts) cells.push_back({lambda, start});
    }

    std::vector<std::future<IterationTrace>> futures;
    futures.reserve(cells.size());
    for (const auto& cell : cells) {
        futures.push_back(std::async(std::launch::async, [cell, &config,
                                                          &run_cfg, n_work]() {
            const GreenSequence start =
                build_start(cell.start, cell.lambda, n_work,
                            config.include_j2_zero, config.d0);
            return iterate(start, cell.start, run_cfg);
        }));
    }

    SweepResult result;
    for (auto& fut : futures) {
        const IterationTrace trace = fut.get();
        if (trace.status == TraceStatus::diverged ||
            trace.status == TraceStatus::singular) {
            result.any_divergence = true;
        }
        append_trace_rows(result.rows, trace, config.n_max);
    }
    sort_rows(result.rows);

    if (config.write_csv || config.write_svg) {
        std::filesystem::create_directories(config.out_dir);
    }
    if (config.write_csv) {
        const std::string path = config.out_dir + "/sweep.csv";
        emit_csv(result.rows, path);
        result.files_written.push_back(path);
    }
    if (config.write_svg) {
        for (int set_id : {1, 2, 3}) {
            auto files =
                emit_svg(result.rows, set_id, config.out_dir + "/fig_");
            result.files_written.insert(result.files_written.end(),
                                        files.begin(), files.end());
        }
    }
    return result;
}

}  // namespace phi4

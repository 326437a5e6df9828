#include "entropic/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

namespace entropic {

namespace {

// Margins tighter than this are within sampling noise of a criterion tie.
constexpr double kNearTieMargin = 0.01;

double order_margin(const FitResult& fit) {
    double best_score = std::numeric_limits<double>::infinity();
    for (const auto& [order, h] : fit.best_by_order)
        if (order == fit.r_n) best_score = h;
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& [order, h] : fit.best_by_order)
        if (order != fit.r_n) margin = std::min(margin, h - best_score);
    return margin;
}

TableResult run_table(FamilyKind kind, const std::vector<double>& mu_factors,
                      const ExperimentConfig& cfg, bool seven_component) {
    TableResult table;
    for (double factor : mu_factors) {
        TableCell cell;
        cell.mu_factor = factor;
        cell.family = family_id(kind);
        const MixtureSpec spec = seven_component ? spec_r7(factor * kTwoSqrt3)
                                                 : spec_r2(factor * kTwoSqrt3);
        std::map<std::size_t, std::size_t> votes;
        for (std::uint64_t seed : cfg.seeds) {
            const auto t0 = std::chrono::steady_clock::now();
            const LabeledSample draw = sample_mixture(spec, cfg.n, seed);
            const WeightedSample w = ingest(draw.values);
            const Family family = bind_family(kind, w, cfg.alpha, cfg.lambda_cap,
                                              cfg.sigma2_floor_scale);
            SearchConfig sc = cfg.search;
            sc.seed = seed;
            const FitResult fit = search(w, family, sc, cfg.jobs);
            const auto t1 = std::chrono::steady_clock::now();
            CellRun run;
            run.seed = seed;
            run.r_n = fit.r_n;
            run.best_H = fit.best_H;
            run.order_margin = order_margin(fit);
            run.wallclock_ms =
                std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
            cell.runs.push_back(run);
            ++votes[fit.r_n];
        }
        std::size_t best_count = 0;
        for (const auto& [rn, count] : votes) {
            if (count > best_count) {
                best_count = count;
                cell.majority_r_n = rn;
            }
        }
        cell.agreement =
            static_cast<double>(best_count) / static_cast<double>(cell.runs.size());
        cell.unstable = cell.agreement < 0.8;
        for (const CellRun& run : cell.runs)
            if (run.order_margin < kNearTieMargin) cell.unstable = true;
        table.cells.push_back(std::move(cell));
    }
    return table;
}

}  // namespace

TableResult run_table1(FamilyKind kind, const std::vector<double>& mu_factors,
                       const ExperimentConfig& cfg) {
    return run_table(kind, mu_factors, cfg, false);
}

TableResult run_table2(FamilyKind kind, const std::vector<double>& mu_factors,
                       const ExperimentConfig& cfg) {
    return run_table(kind, mu_factors, cfg, true);
}

void write_cell_csv(std::ostream& os, const TableResult& table) {
    os << "mu_factor,family,seed,r_n,best_H,wallclock_ms\n";
    char buf[64];
    for (const TableCell& cell : table.cells) {
        for (const CellRun& run : cell.runs) {
            std::snprintf(buf, sizeof buf, "%.17g", cell.mu_factor);
            os << buf << ',' << cell.family << ',' << run.seed << ',' << run.r_n << ',';
            std::snprintf(buf, sizeof buf, "%.17g", run.best_H);
            os << buf << ',' << run.wallclock_ms << '\n';
        }
    }
}

ClassHistogram class_histograms(const FitResult& result, const WeightedSample& w,
                                std::size_t bins) {
    if (bins < 1) throw std::invalid_argument("bins must be >= 1");
    if (result.best_assignment.label.size() != w.size())
        throw std::invalid_argument("fit result does not match the sample");

    ClassHistogram hist;
    const double lo = w.values.front();
    const double hi = w.values.back();
    const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
    for (std::size_t b = 0; b <= bins; ++b)
        hist.edges.push_back(lo + width * static_cast<double>(b));
    hist.counts.assign(result.best_assignment.r,
                       std::vector<std::int64_t>(bins, 0));
    for (std::size_t i = 0; i < w.size(); ++i) {
        std::size_t bin =
            static_cast<std::size_t>((w.values[i] - lo) / width);
        if (bin >= bins) bin = bins - 1;  // right edge closes the last bin
        hist.counts[result.best_assignment.label[i]][bin] += w.counts[i];
    }
    return hist;
}

void write_histogram_csv(std::ostream& os, const ClassHistogram& hist) {
    const std::size_t bins = hist.edges.size() - 1;
    os << "bin_lo,bin_hi";
    for (std::size_t x = 0; x < hist.counts.size(); ++x) os << ",class_" << (x + 1);
    os << '\n';
    char buf[64];
    for (std::size_t b = 0; b < bins; ++b) {
        std::snprintf(buf, sizeof buf, "%.17g", hist.edges[b]);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", hist.edges[b + 1]);
        os << buf;
        for (const auto& row : hist.counts) os << ',' << row[b];
        os << '\n';
    }
}

}  // namespace entropic

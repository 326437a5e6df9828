#ifndef ENTROPIC_EXPERIMENTS_HPP
#define ENTROPIC_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "entropic/search.hpp"
#include "entropic/synth.hpp"

namespace entropic {

struct CellRun {
    std::uint64_t seed = 0;
    std::size_t r_n = 0;
    double best_H = 0.0;
    // winner's score lead over the closest other class count; small values
    // mean the seed could not really tell the orders apart
    double order_margin = 0.0;
    std::int64_t wallclock_ms = 0;
};

struct TableCell {
    double mu_factor = 0.0;  // mu* = mu_factor * 2 sqrt(3)
    std::string family;
    std::vector<CellRun> runs;
    std::size_t majority_r_n = 0;
    double agreement = 0.0;  // fraction of seeds voting the majority
    // agreement below 4/5, or some seed's order margin within noise
    bool unstable = false;
};

struct TableResult {
    std::vector<TableCell> cells;
};

struct ExperimentConfig {
    std::int64_t n = 10000;
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
    SearchConfig search;
    double alpha = 0.005;
    double lambda_cap = 1e8;
    double sigma2_floor_scale = 1e-12;
    unsigned jobs = 1;
};

// One cell per mu factor: fit fresh samples of the two-component target for
// every seed and vote on r_n.
TableResult run_table1(FamilyKind kind, const std::vector<double>& mu_factors,
                       const ExperimentConfig& cfg);
// Same over the seven-component target.
TableResult run_table2(FamilyKind kind, const std::vector<double>& mu_factors,
                       const ExperimentConfig& cfg);

// Fixed header: mu_factor,family,seed,r_n,best_H,wallclock_ms
void write_cell_csv(std::ostream& os, const TableResult& table);

struct ClassHistogram {
    std::vector<double> edges;                        // bins + 1 edges
    std::vector<std::vector<std::int64_t>> counts;    // [class][bin]
};

// Per-class counts over equal-width bins spanning the sample range.
ClassHistogram class_histograms(const FitResult& result, const WeightedSample& w,
                                std::size_t bins);

// Header: bin_lo,bin_hi,class_1,...,class_r
void write_histogram_csv(std::ostream& os, const ClassHistogram& hist);

}  // namespace entropic

#endif

#include <doctest.h>

#include <sstream>

#include "entropic/experiments.hpp"

using namespace entropic;

namespace {
ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.n = 600;
    cfg.seeds = {0, 1, 2};
    cfg.search.n_init = 9;
    cfg.search.stop_em = 10;
    cfg.search.stop_r = 2;
    cfg.search.r_max_guard = 6;
    cfg.jobs = 2;
    return cfg;
}
}  // namespace

TEST_CASE("table harness votes, reports margins, and emits fixed-header csv") {
    const TableResult t =
        run_table1(FamilyKind::gaussian, {0.70, 1.60}, small_config());
    REQUIRE(t.cells.size() == 2);
    for (const TableCell& cell : t.cells) {
        CHECK(cell.runs.size() == 3);
        CHECK(cell.agreement >= 1.0 / 3.0);
        CHECK(cell.family == "gaussian");
    }
    // far past the threshold the pair must split even at this small n
    CHECK(t.cells[1].majority_r_n == 2);

    std::ostringstream os;
    write_cell_csv(os, t);
    const std::string csv = os.str();
    CHECK(csv.rfind("mu_factor,family,seed,r_n,best_H,wallclock_ms\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 1 + 2 * 3);
}

TEST_CASE("table cells are seed-deterministic") {
    const ExperimentConfig cfg = small_config();
    const TableResult a = run_table1(FamilyKind::gaussian, {1.60}, cfg);
    const TableResult b = run_table1(FamilyKind::gaussian, {1.60}, cfg);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells[0].runs.size(); ++i) {
        CHECK(a.cells[0].runs[i].r_n == b.cells[0].runs[i].r_n);
        CHECK(a.cells[0].runs[i].best_H == b.cells[0].runs[i].best_H);
    }
}

TEST_CASE("seven-component spec wiring") {
    ExperimentConfig cfg = small_config();
    cfg.seeds = {0};
    const TableResult t = run_table2(FamilyKind::gaussian, {0.30}, cfg);
    REQUIRE(t.cells.size() == 1);
    CHECK(t.cells[0].majority_r_n == 1);  // heavily merged layout
}

TEST_CASE("class histogram partitions the sample") {
    const LabeledSample draw = sample_mixture(spec_r2(1.2 * kTwoSqrt3), 4000, 11);
    const WeightedSample w = ingest(draw.values);
    const Family f = bind_family(FamilyKind::gaussian, w);
    SearchConfig sc;
    sc.seed = 11;
    sc.n_init = 9;
    const FitResult fit = search(w, f, sc, 2);

    const ClassHistogram hist = class_histograms(fit, w, 24);
    REQUIRE(hist.edges.size() == 25);
    std::int64_t total = 0;
    for (const auto& row : hist.counts)
        for (std::int64_t c : row) total += c;
    CHECK(total == w.n);

    SUBCASE("one-class result equals the plain histogram") {
        FitResult merged = fit;
        merged.best_assignment.r = 1;
        merged.best_assignment.label.assign(w.size(), 0);
        const ClassHistogram all = class_histograms(merged, w, 24);
        std::vector<std::int64_t> flat(24, 0);
        for (std::size_t b = 0; b < 24; ++b)
            for (const auto& row : hist.counts) flat[b] += row[b];
        CHECK(all.counts.size() == 1);
        CHECK(all.counts[0] == flat);
    }

    SUBCASE("well-separated split has nearly disjoint class supports") {
        REQUIRE(fit.r_n == 2);
        // overlap mass: bins where both classes hold counts
        std::int64_t overlap = 0;
        std::vector<std::size_t> occupied;
        for (std::size_t x = 0; x < hist.counts.size(); ++x)
            for (std::int64_t c : hist.counts[x])
                if (c > 0) {
                    occupied.push_back(x);
                    break;
                }
        REQUIRE(occupied.size() >= 2);
        const auto& a = hist.counts[occupied[0]];
        const auto& b = hist.counts[occupied[1]];
        for (std::size_t bin = 0; bin < 24; ++bin)
            if (a[bin] > 0 && b[bin] > 0) overlap += std::min(a[bin], b[bin]);
        CHECK(overlap < w.n / 20);
    }

    SUBCASE("histogram csv shape") {
        std::ostringstream os;
        write_histogram_csv(os, hist);
        const std::string csv = os.str();
        CHECK(csv.rfind("bin_lo,bin_hi", 0) == 0);
    }
}

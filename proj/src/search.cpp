#include "entropic/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

namespace entropic {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const SearchConfig& cfg) {
    if (cfg.n_init < 1 || cfg.stop_em < 1 || cfg.stop_r < 1 || cfg.r_start < 1)
        throw std::invalid_argument("search config: counts must be >= 1");
    if (cfg.r_max_guard < cfg.r_start)
        throw std::invalid_argument("search config: r_max_guard < r_start");
}

// Soft partition pulled toward r randomly chosen data points through
// per-class Gaussian kernels. Exchangeable row-wise inits leave every class
// mean at the grand mean, a near-fixed point the EM updates take thousands
// of iterations to leave; anchoring breaks that symmetry.
SoftAssignment anchored_initial_assignment(std::size_t r, const WeightedSample& w,
                                           Rng& rng, bool spread_anchors) {
    const std::size_t m = w.size();
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) mean += w.weight(i) * w.values[i];
    double var = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double d = w.values[i] - mean;
        var += w.weight(i) * d * d;
    }
    if (var <= 0.0) var = 1.0;

    // Anchor draws: spread_anchors weights later draws by squared distance
    // to the anchors already placed, covering every clump; otherwise anchors
    // fall uniformly on data values, which can land on neighboring points.
    std::vector<double> anchors(r);
    anchors[0] = w.values[rng.next_u64() % m];
    std::vector<double> d2(m);
    for (std::size_t x = 1; x < r; ++x) {
        if (!spread_anchors) {
            anchors[x] = w.values[rng.next_u64() % m];
            continue;
        }
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < x; ++j) {
                const double d = w.values[i] - anchors[j];
                nearest = std::min(nearest, d * d);
            }
            d2[i] = nearest * w.weight(i);
            total += d2[i];
        }
        if (total <= 0.0) {
            anchors[x] = w.values[rng.next_u64() % m];
            continue;
        }
        double u = rng.uniform() * total;
        std::size_t pick = m - 1;
        for (std::size_t i = 0; i < m; ++i) {
            u -= d2[i];
            if (u <= 0.0) {
                pick = i;
                break;
            }
        }
        anchors[x] = w.values[pick];
    }

    // Kernel widths. Spread anchors take the gap to their nearest sibling,
    // matching the clump scale the anchor layout implies. Uniform draws use
    // one common width, so the induced partition is a softened Voronoi of
    // the anchors no matter the width; on a small support the width cycles
    // down to the finest data gap, because the best decompositions of a
    // handful of points isolate single values and a clump-scale kernel can
    // never hand one point its own class.
    std::vector<double> inv2w2(r);
    if (spread_anchors) {
        for (std::size_t x = 0; x < r; ++x) {
            double nearest2 = var * 4.0 / static_cast<double>(r * r);
            for (std::size_t j = 0; j < r; ++j) {
                if (j == x) continue;
                const double d = anchors[x] - anchors[j];
                if (d != 0.0) nearest2 = std::min(nearest2, d * d);
            }
            inv2w2[x] = 1.0 / (2.0 * std::max(nearest2 / 16.0, 1e-30));
        }
    } else {
        const double range = w.values.back() - w.values.front();
        double width = range > 0.0 ? range / (4.0 * static_cast<double>(r)) : 1.0;
        if (m <= 64) {
            double min_gap = range > 0.0 ? range : 1.0;
            for (std::size_t i = 1; i < m; ++i)
                min_gap = std::min(min_gap, w.values[i] - w.values[i - 1]);
            double scaled = min_gap / 4.0;
            const std::uint64_t steps = rng.next_u64() % 8;
            for (std::uint64_t j = 0; j < steps && scaled * 2.0 < width; ++j)
                scaled *= 2.0;
            width = std::min(width, scaled);
        }
        const double inv = 1.0 / (2.0 * std::max(width * width, 1e-30));
        for (std::size_t x = 0; x < r; ++x) inv2w2[x] = inv;
    }

    SoftAssignment s;
    s.r = r;
    s.phi.assign(m * r, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < r; ++x) {
            const double d = w.values[i] - anchors[x];
            const double a = -d * d * inv2w2[x];
            s.at(i, x) = a;
            if (a > mx) mx = a;
        }
        double sum = 0.0;
        for (std::size_t x = 0; x < r; ++x) {
            const double e = std::exp(s(i, x) - mx);
            s.at(i, x) = e;
            sum += e;
        }
        for (std::size_t x = 0; x < r; ++x) s.at(i, x) /= sum;
    }
    return s;
}

}  // namespace

SoftAssignment random_initial_assignment(std::size_t r, const WeightedSample& w,
                                         Rng& rng) {
    if (r < 1) throw std::invalid_argument("r must be >= 1");
    const std::size_t m = w.size();
    SoftAssignment s;
    s.r = r;
    s.phi.assign(m * r, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double sum = 0.0;
        for (std::size_t x = 0; x < r; ++x) {
            const double e = rng.exponential();
            s.at(i, x) = e;
            sum += e;
        }
        for (std::size_t x = 0; x < r; ++x) s.at(i, x) /= sum;
    }
    return s;
}

FitResult search(const WeightedSample& w, const Family& family,
                 const SearchConfig& cfg, unsigned jobs) {
    validate(cfg);

    FitResult result;
    result.best_H = kInf;
    double best_soft = kInf;
    std::map<std::size_t, double> best_by_order;

    CemOptions cem_opts;
    cem_opts.stop_em = cfg.stop_em;
    cem_opts.detail = TraceDetail::hard_only;

    std::int64_t ind_r = 0;
    std::size_t r = cfg.r_start;
    while (ind_r < cfg.stop_r) {
        if (r > cfg.r_max_guard) {
            result.guard_hit = true;
            break;
        }
        ++ind_r;
        result.r_searched = r;

        // Every restart in this block gates its patience on the best value
        // known when the block started; blocks stay order-independent.
        cem_opts.improvement_gate = best_soft;
        std::vector<CemResult> runs(static_cast<std::size_t>(cfg.n_init));
        auto run_one = [&](std::size_t k) {
            Rng rng(derive_stream(cfg.seed, r, k));
            SoftAssignment init;
            switch (k % 3) {
                case 0: init = anchored_initial_assignment(r, w, rng, true); break;
                case 1: init = anchored_initial_assignment(r, w, rng, false); break;
                default: init = random_initial_assignment(r, w, rng);
            }
            runs[k] = run_em_scored(init, w, family, cem_opts);
        };
        if (jobs <= 1 || cfg.n_init == 1) {
            for (std::size_t k = 0; k < runs.size(); ++k) run_one(k);
        } else {
            std::atomic<std::size_t> next{0};
            const unsigned workers =
                std::min<unsigned>(jobs, static_cast<unsigned>(runs.size()));
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (unsigned t = 0; t < workers; ++t)
                pool.emplace_back([&] {
                    for (std::size_t k = next.fetch_add(1); k < runs.size();
                         k = next.fetch_add(1))
                        run_one(k);
                });
            for (auto& th : pool) th.join();
        }

        // Merge in restart order: parallel execution stays bit-identical to
        // the sequential pass.
        bool improved_this_r = false;
        for (std::size_t k = 0; k < runs.size(); ++k) {
            const CemResult& run = runs[k];
            for (const IterationRecord& rec : run.trace.records) {
                auto [it, inserted] = best_by_order.try_emplace(rec.occupied, rec.score);
                if (!inserted && rec.score < it->second) it->second = rec.score;
            }
            RestartRecord log;
            log.r = r;
            log.restart_index = static_cast<std::int64_t>(k);
            log.run_best_H = run.best_soft_H;
            log.iterations = run.trace.records.size();
            if (run.best_soft_H < best_soft - kImprovementEps) {
                best_soft = run.best_soft_H;
                result.best_assignment = run.best_assignment;
                improved_this_r = true;
                log.improved_global = true;
            }
            log.global_best_after = best_soft;
            result.restarts_log.push_back(log);
        }
        if (improved_this_r) ind_r = 0;
        ++r;
    }

    const MStepResult refit = m_step(result.best_assignment, w, family);
    result.best_H = refit.criterion.value;
    result.model = refit.state;
    std::vector<bool> seen(result.best_assignment.r, false);
    for (std::size_t lab : result.best_assignment.label) seen[lab] = true;
    result.r_n = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true));

    for (const auto& [order, h] : best_by_order) {
        result.best_by_order.emplace_back(order, h);
        if (h <= best_soft + kImprovementEps) result.tied_orders.push_back(order);
    }
    result.order_tied = result.tied_orders.size() > 1;
    return result;
}

}  // namespace entropic

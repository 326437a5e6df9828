#ifndef ENTROPIC_SEARCH_HPP
#define ENTROPIC_SEARCH_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "entropic/cem.hpp"
#include "entropic/rng.hpp"

namespace entropic {

struct SearchConfig {
    std::int64_t n_init = 20;
    std::int64_t stop_em = 40;
    std::int64_t stop_r = 7;
    std::size_t r_start = 1;
    std::size_t r_max_guard = 32;
    std::uint64_t seed = 0;
};

struct RestartRecord {
    std::size_t r = 0;
    std::int64_t restart_index = 0;
    double run_best_H = 0.0;
    std::size_t iterations = 0;
    bool improved_global = false;
    double global_best_after = 0.0;
};

struct FitResult {
    double best_H = 0.0;
    HardAssignment best_assignment;
    ModelState model;  // refit of best_assignment
    std::size_t r_searched = 0;
    std::size_t r_n = 0;  // occupied classes of best_assignment
    bool guard_hit = false;
    // Orders whose best score ties best_H within kImprovementEps. More than
    // one entry flags an order tie (the binary case produces one by design).
    bool order_tied = false;
    std::vector<std::size_t> tied_orders;
    // Best posterior criterion seen per occupied-class count.
    std::vector<std::pair<std::size_t, double>> best_by_order;
    std::vector<RestartRecord> restarts_log;
};

// Each row drawn from the flat Dirichlet over r classes.
SoftAssignment random_initial_assignment(std::size_t r, const WeightedSample& w,
                                         Rng& rng);

// Order-growing multi-restart search: for r = r_start, r_start+1, ... run
// n_init seeded restarts of the CEM loop, score every MAP snapshot, and keep
// the global best. Stops after stop_r consecutive class counts produce no
// improvement beyond kImprovementEps, or when r exceeds r_max_guard (then
// guard_hit is set). Restart RNG streams depend only on (seed, r, index), so
// jobs > 1 cannot change the result.
FitResult search(const WeightedSample& w, const Family& family,
                 const SearchConfig& cfg, unsigned jobs = 1);

}  // namespace entropic

#endif

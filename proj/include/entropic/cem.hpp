#ifndef ENTROPIC_CEM_HPP
#define ENTROPIC_CEM_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "entropic/data_model.hpp"
#include "entropic/entropy.hpp"
#include "entropic/families.hpp"

namespace entropic {

// Strict-improvement threshold shared by the engine and the order search;
// smaller deltas are floating noise and must not reset stopping counters.
inline constexpr double kImprovementEps = 1e-12;

struct ModelState {
    ProbVector nu;
    std::vector<FamilyParams> params;

    std::size_t r() const { return nu.size(); }
};

bool state_equal(const ModelState& a, const ModelState& b);

// One engine iteration, recorded. hard_H is the criterion of the MAP
// assignment; soft_H the criterion of the posterior it was cut from;
// soft_H_at_refit scores that posterior against the state refit from the
// MAP (the -Q(omega_next; omega)/n cross term). The last two are NaN when
// the trace is kept hard-only.
struct IterationRecord {
    double hard_H = 0.0;
    double soft_H = 0.0;
    double soft_H_at_refit = 0.0;
    // What the improvement gate saw: hard_H in the CEM loop; in the EM loop
    // the posterior criterion, or the corner criterion when the posterior
    // sits on one.
    double score = 0.0;
    std::size_t occupied = 0;
};

struct IterationTrace {
    std::vector<IterationRecord> records;
};

enum class TraceDetail { hard_only, full };

struct CemOptions {
    std::int64_t stop_em = 5;
    TraceDetail detail = TraceDetail::full;
    std::size_t max_iterations = 100000;
    // Best criterion known before this run starts. The stop_em counter only
    // resets when a snapshot beats this gate (then the gate follows the
    // snapshots), mirroring the global coupling of the order search's
    // improvement counters. +inf gives a standalone run full patience.
    double improvement_gate = std::numeric_limits<double>::infinity();
};

struct CemResult {
    // Criterion of best_assignment. run_cem selects by this value directly;
    // run_em_scored selects by best_soft_H and reports the matching MAP here.
    double best_H = 0.0;
    HardAssignment best_assignment;
    // Best posterior criterion seen (run_em_scored only; NaN from run_cem).
    double best_soft_H = 0.0;
    ModelState final_state;
    IterationTrace trace;
    bool hit_iteration_cap = false;
};

// Posterior responsibilities phi_x(z) = nu(x) g_x(z) / sum_x' nu(x') g_x'(z),
// computed in log space with a per-value max shift. Throws if some value has
// zero density under every class.
SoftAssignment e_step(const ModelState& state, const WeightedSample& w,
                      const Family& family);

// MAP hardening; ties break to the smallest class index.
HardAssignment c_step(const SoftAssignment& s);

struct MStepResult {
    ModelState state;
    CriterionValue criterion;
};

// Refit (nu, theta) from an assignment: nu is the class mass, params the
// per-class weighted MLE. Empty classes get nu = 0 and placeholder params.
// The attained criterion equals the assignment's own mixing entropy.
MStepResult m_step(const SoftAssignment& s, const WeightedSample& w,
                   const Family& family);
MStepResult m_step(const HardAssignment& h, const WeightedSample& w,
                   const Family& family);

// Iterates E -> C -> M from the given start, tracking the best MAP criterion.
// Stops when the assignment repeats, the state reaches a fixed point, or
// stop_em consecutive iterations fail to improve by more than
// kImprovementEps.
CemResult run_cem(const SoftAssignment& init, const WeightedSample& w,
                  const Family& family, const CemOptions& opts = {});
CemResult run_cem(const ModelState& init, const WeightedSample& w,
                  const Family& family, const CemOptions& opts = {});

// The order search's inner loop: classical EM updates (the M-step consumes
// the posterior, not the MAP). Each iteration scores the posterior's own
// mixing entropy, which gates improvement counters and selects the winner;
// the MAP classifier of the winning posterior is kept for reporting. Gating
// on MAP criteria instead would let a lucky hardening snapshot win on the
// strength of trimmed outlier classes riding the variance floor, a
// concentration the soft sequence never converges to from diffuse starts.
CemResult run_em_scored(const SoftAssignment& init, const WeightedSample& w,
                        const Family& family, const CemOptions& opts = {});

}  // namespace entropic

#endif

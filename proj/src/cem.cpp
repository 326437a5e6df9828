#include "entropic/cem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace entropic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t occupied_classes(const ProbVector& nu) {
    std::size_t k = 0;
    for (double v : nu.weights)
        if (v > 0.0) ++k;
    return k;
}

// -Q(next; state that produced phi)/n: the posterior phi scored against a
// refit state. +inf when the refit kills a class the posterior still uses.
double soft_cross_criterion(const SoftAssignment& phi, const WeightedSample& w,
                            const Family& family, const ModelState& next) {
    const std::size_t m = w.size();
    std::vector<double> log_nu(phi.r);
    std::vector<PreparedLogDensity> dens;
    dens.reserve(phi.r);
    for (std::size_t x = 0; x < phi.r; ++x) {
        log_nu[x] = next.nu[x] > 0.0 ? std::log(next.nu[x]) : -kInf;
        dens.emplace_back(family, next.params[x]);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double pz = w.weight(i);
        for (std::size_t x = 0; x < phi.r; ++x) {
            const double p = phi(i, x);
            if (p <= 0.0) continue;
            if (log_nu[x] == -kInf) return kInf;
            const double term = log_nu[x] + dens[x](w.values[i]);
            if (term == -kInf) return kInf;
            acc -= pz * p * term;
        }
    }
    return acc;
}

bool params_equal(const FamilyParams& a, const FamilyParams& b) {
    if (a.index() != b.index()) return false;
    if (const auto* g = std::get_if<GaussianParams>(&a)) {
        const auto& h = std::get<GaussianParams>(b);
        return g->mu == h.mu && g->sigma2 == h.sigma2;
    }
    if (const auto* e = std::get_if<BiExpParams>(&a)) {
        const auto& h = std::get<BiExpParams>(b);
        return e->p == h.p && e->a_left == h.a_left && e->a_right == h.a_right &&
               e->lambda_left == h.lambda_left && e->lambda_right == h.lambda_right;
    }
    const auto& p = std::get<BernoulliParams>(a);
    const auto& q = std::get<BernoulliParams>(b);
    return p.mu0 == q.mu0 && p.mu1 == q.mu1;
}

MStepResult m_step_from_subsamples(std::vector<WeightedSubsample> subs, double n,
                                   const Family& family) {
    const std::size_t r = subs.size();
    MStepResult out;
    out.state.params.assign(r, placeholder_params(family));
    out.criterion.per_class_cross_entropy.assign(r, 0.0);

    std::vector<double> nu(r, 0.0);
    for (std::size_t x = 0; x < r; ++x) nu[x] = subs[x].mass / n;
    out.state.nu = make_prob_vector(std::move(nu));
    out.criterion.nu_entropy = shannon_entropy(out.state.nu);

    double value = out.criterion.nu_entropy;
    for (std::size_t x = 0; x < r; ++x) {
        if (!(subs[x].mass > 0.0)) continue;  // class extinction is legal
        const FitOutcome fit = fit_weighted(family, subs[x]);
        out.state.params[x] = fit.params;
        out.criterion.per_class_cross_entropy[x] = fit.cross_entropy;
        if (fit.degenerate) out.criterion.degenerate_classes.push_back(x);
        value += out.state.nu[x] * fit.cross_entropy;
    }
    out.criterion.value = value;
    return out;
}

CemResult run_loop(ModelState state, const WeightedSample& w, const Family& family,
                   const CemOptions& opts) {
    if (opts.stop_em < 1) throw std::invalid_argument("stop_em must be >= 1");
    CemResult result;
    result.best_H = kInf;
    result.best_soft_H = kNaN;
    double gate = opts.improvement_gate;

    HardAssignment prev;
    bool have_prev = false;
    std::int64_t ind_em = 0;
    std::size_t iterations = 0;

    while (ind_em < opts.stop_em) {
        if (iterations >= opts.max_iterations) {
            result.hit_iteration_cap = true;
            break;
        }
        ++ind_em;
        ++iterations;

        const SoftAssignment phi = e_step(state, w, family);
        const HardAssignment hard = c_step(phi);
        MStepResult refit = m_step(hard, w, family);

        IterationRecord rec;
        rec.hard_H = refit.criterion.value;
        rec.score = refit.criterion.value;
        rec.occupied = occupied_classes(refit.state.nu);
        if (opts.detail == TraceDetail::full) {
            rec.soft_H = m_step(phi, w, family).criterion.value;
            rec.soft_H_at_refit = soft_cross_criterion(phi, w, family, refit.state);
        } else {
            rec.soft_H = kNaN;
            rec.soft_H_at_refit = kNaN;
        }
        result.trace.records.push_back(rec);

        if (rec.hard_H < gate - kImprovementEps) {
            gate = rec.hard_H;
            ind_em = 0;
        }
        if (rec.hard_H < result.best_H - kImprovementEps ||
            result.best_assignment.label.empty()) {
            result.best_H = rec.hard_H;
            result.best_assignment = hard;
        }

        const bool assignment_repeats = have_prev && hard == prev;
        const bool state_fixed = state_equal(refit.state, state);
        prev = hard;
        have_prev = true;
        state = std::move(refit.state);
        if (assignment_repeats || state_fixed) break;
    }
    result.final_state = std::move(state);
    return result;
}

}  // namespace

bool state_equal(const ModelState& a, const ModelState& b) {
    if (a.r() != b.r()) return false;
    for (std::size_t x = 0; x < a.r(); ++x)
        if (a.nu[x] != b.nu[x] || !params_equal(a.params[x], b.params[x]))
            return false;
    return true;
}

SoftAssignment e_step(const ModelState& state, const WeightedSample& w,
                      const Family& family) {
    const std::size_t m = w.size();
    const std::size_t r = state.r();
    SoftAssignment phi;
    phi.r = r;
    phi.phi.assign(m * r, 0.0);

    std::vector<double> log_nu(r);
    std::vector<PreparedLogDensity> dens;
    dens.reserve(r);
    for (std::size_t x = 0; x < r; ++x) {
        log_nu[x] = state.nu[x] > 0.0 ? std::log(state.nu[x]) : -kInf;
        dens.emplace_back(family, state.params[x]);
    }

    std::vector<double> logs(r);
    for (std::size_t i = 0; i < m; ++i) {
        double mx = -kInf;
        for (std::size_t x = 0; x < r; ++x) {
            double a = -kInf;
            if (log_nu[x] != -kInf) {
                const double ld = dens[x](w.values[i]);
                if (ld != -kInf) a = log_nu[x] + ld;
            }
            logs[x] = a;
            if (a > mx) mx = a;
        }
        if (mx == -kInf)
            throw std::runtime_error("unexplainable point z = " +
                                     std::to_string(w.values[i]));
        double sum = 0.0;
        for (std::size_t x = 0; x < r; ++x) {
            const double e = logs[x] == -kInf ? 0.0 : std::exp(logs[x] - mx);
            phi.at(i, x) = e;
            sum += e;
        }
        for (std::size_t x = 0; x < r; ++x) phi.at(i, x) /= sum;
    }
    return phi;
}

HardAssignment c_step(const SoftAssignment& s) {
    const std::size_t m = s.num_values();
    HardAssignment h;
    h.r = s.r;
    h.label.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        double best = s(i, 0);
        std::size_t arg = 0;
        for (std::size_t x = 1; x < s.r; ++x) {
            if (s(i, x) > best) {
                best = s(i, x);
                arg = x;
            }
        }
        h.label[i] = arg;
    }
    return h;
}

MStepResult m_step(const SoftAssignment& s, const WeightedSample& w,
                   const Family& family) {
    const std::size_t m = w.size();
    if (s.num_values() != m)
        throw std::invalid_argument("assignment and sample value sets differ in size");
    std::vector<WeightedSubsample> subs(s.r);
    for (std::size_t x = 0; x < s.r; ++x) {
        subs[x].values.reserve(m);
        subs[x].weights.reserve(m);
    }
    for (std::size_t i = 0; i < m; ++i) {
        const double nz = static_cast<double>(w.counts[i]);
        for (std::size_t x = 0; x < s.r; ++x) {
            const double wt = nz * s(i, x);
            if (wt <= 0.0) continue;
            subs[x].values.push_back(w.values[i]);
            subs[x].weights.push_back(wt);
            subs[x].mass += wt;
        }
    }
    return m_step_from_subsamples(std::move(subs), static_cast<double>(w.n), family);
}

MStepResult m_step(const HardAssignment& h, const WeightedSample& w,
                   const Family& family) {
    const std::size_t m = w.size();
    if (h.label.size() != m)
        throw std::invalid_argument("assignment and sample value sets differ in size");
    std::vector<WeightedSubsample> subs(h.r);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t x = h.label[i];
        if (x >= h.r) throw std::invalid_argument("label out of range");
        const double nz = static_cast<double>(w.counts[i]);
        subs[x].values.push_back(w.values[i]);
        subs[x].weights.push_back(nz);
        subs[x].mass += nz;
    }
    return m_step_from_subsamples(std::move(subs), static_cast<double>(w.n), family);
}

CemResult run_cem(const SoftAssignment& init, const WeightedSample& w,
                  const Family& family, const CemOptions& opts) {
    return run_loop(m_step(init, w, family).state, w, family, opts);
}

CemResult run_em_scored(const SoftAssignment& init, const WeightedSample& w,
                        const Family& family, const CemOptions& opts) {
    if (opts.stop_em < 1) throw std::invalid_argument("stop_em must be >= 1");
    CemResult result;
    result.best_H = std::numeric_limits<double>::infinity();
    result.best_soft_H = std::numeric_limits<double>::infinity();
    double gate = opts.improvement_gate;

    MStepResult cur = m_step(init, w, family);  // state fit from the start posterior
    std::int64_t ind_em = 0;
    std::size_t iterations = 0;

    while (ind_em < opts.stop_em) {
        if (iterations >= opts.max_iterations) {
            result.hit_iteration_cap = true;
            break;
        }
        ++ind_em;
        ++iterations;

        const SoftAssignment phi = e_step(cur.state, w, family);
        MStepResult next = m_step(phi, w, family);
        const HardAssignment hard = c_step(phi);

        IterationRecord rec;
        rec.soft_H = next.criterion.value;
        std::vector<bool> seen(hard.r, false);
        for (std::size_t lab : hard.label) seen[lab] = true;
        rec.occupied = static_cast<std::size_t>(
            std::count(seen.begin(), seen.end(), true));

        // A saturated family can leave EM on a flat ridge a hair away from a
        // 0/1 corner of Phi_r; the corner is then a scoreable candidate in
        // its own right. Posteriors that are genuinely soft anywhere do not
        // qualify, so hardened snapshots cannot sneak in on trimmed-class
        // criteria.
        double confidence = 1.0;
        for (std::size_t i = 0; i < hard.label.size(); ++i)
            confidence = std::min(confidence, phi(i, hard.label[i]));
        const bool at_corner = confidence >= 1.0 - 1e-3;

        // The MAP refit is what the trace reports; the gate only needs it at
        // corners, so the hard-only mode skips it elsewhere.
        rec.hard_H = kNaN;
        if (opts.detail == TraceDetail::full || at_corner)
            rec.hard_H = m_step(hard, w, family).criterion.value;
        rec.soft_H_at_refit = opts.detail == TraceDetail::full
                                  ? soft_cross_criterion(phi, w, family, next.state)
                                  : kNaN;

        double score = rec.soft_H;
        if (at_corner && rec.hard_H < score) score = rec.hard_H;
        rec.score = score;
        result.trace.records.push_back(rec);

        if (score < gate - kImprovementEps) {
            gate = score;
            ind_em = 0;
        }
        if (score < result.best_soft_H - kImprovementEps ||
            result.best_assignment.label.empty()) {
            result.best_soft_H = score;
            result.best_assignment = hard;
        }

        const bool fixed_point = state_equal(next.state, cur.state);
        cur = std::move(next);
        if (fixed_point) break;
    }
    if (!result.best_assignment.label.empty())
        result.best_H = m_step(result.best_assignment, w, family).criterion.value;
    result.final_state = std::move(cur.state);
    return result;
}

CemResult run_cem(const ModelState& init, const WeightedSample& w,
                  const Family& family, const CemOptions& opts) {
    if (init.nu.size() != init.params.size())
        throw std::invalid_argument("model state: nu/params length mismatch");
    return run_loop(init, w, family, opts);
}

}  // namespace entropic

#include "entropic/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "entropic/cem.hpp"
#include "entropic/errors.hpp"

namespace entropic {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112353;

// Relabels classes in order of first appearance over the (ascending) values.
std::vector<std::size_t> canonical_labels(const std::vector<std::size_t>& label,
                                          std::size_t r) {
    std::vector<std::size_t> remap(r, r);
    std::vector<std::size_t> out(label.size());
    std::size_t next = 0;
    for (std::size_t i = 0; i < label.size(); ++i) {
        if (remap[label[i]] == r) remap[label[i]] = next++;
        out[i] = remap[label[i]];
    }
    return out;
}

}  // namespace

BruteForceResult brute_force_min(const WeightedSample& w, const Family& family,
                                 std::size_t r, std::uint64_t guard) {
    if (r < 1) throw std::invalid_argument("r must be >= 1");
    const std::size_t m = w.size();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < m; ++i) {
        if (total > guard / r)
            throw GuardError("brute force guard exceeded: r^m > " +
                                     std::to_string(guard));
        total *= r;
    }

    HardAssignment h;
    h.r = r;
    h.label.assign(m, 0);

    BruteForceResult result;
    result.assignments_enumerated = total;
    result.min_H = std::numeric_limits<double>::infinity();

    // pass 1: exact minimum
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t code = idx;
        for (std::size_t i = 0; i < m; ++i) {
            h.label[i] = static_cast<std::size_t>(code % r);
            code /= r;
        }
        const double H = m_step(h, w, family).criterion.value;
        if (H < result.min_H) result.min_H = H;
    }

    // pass 2: every optimum within kImprovementEps, label permutations merged
    std::set<std::vector<std::size_t>> seen;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t code = idx;
        for (std::size_t i = 0; i < m; ++i) {
            h.label[i] = static_cast<std::size_t>(code % r);
            code /= r;
        }
        const double H = m_step(h, w, family).criterion.value;
        if (H <= result.min_H + kImprovementEps) {
            auto canon = canonical_labels(h.label, r);
            if (seen.insert(canon).second)
                result.optima.push_back(HardAssignment{r, std::move(canon)});
        }
    }
    return result;
}

BinarySolution binary_closed_form(double mu0, double mu1) {
    if (!(mu0 >= 0.0) || !(mu1 >= 0.0) || std::abs(mu0 + mu1 - 1.0) > kProbTol)
        throw std::invalid_argument("(mu0, mu1) must lie on the simplex");

    BinarySolution sol;
    sol.min_H = 0.0;
    if (mu0 > 0.0) sol.min_H -= mu0 * std::log(mu0);
    if (mu1 > 0.0) sol.min_H -= mu1 * std::log(mu1);
    sol.r_nu = 1;

    sol.optimal_decompositions.push_back(
        BinaryDecomposition{{1.0}, {BinaryComponent{mu0, mu1}}});
    if (mu0 > 0.0 && mu0 < 1.0) {
        sol.optimal_decompositions.push_back(BinaryDecomposition{
            {mu0, mu1}, {BinaryComponent{1.0, 0.0}, BinaryComponent{0.0, 1.0}}});
        sol.optimal_decompositions.push_back(BinaryDecomposition{
            {mu1, mu0}, {BinaryComponent{0.0, 1.0}, BinaryComponent{1.0, 0.0}}});
    }
    return sol;
}

GaussianThresholdReport gaussian_split_test(double nu1, double mu1, double sigma1,
                                            double nu2, double mu2, double sigma2) {
    if (std::abs(nu1 + nu2 - 1.0) > kProbTol || nu1 < 0.0 || nu2 < 0.0)
        throw std::invalid_argument("(nu1, nu2) must lie on the simplex");
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0))
        throw std::invalid_argument("sigmas must be positive");

    GaussianThresholdReport rep;
    const double dmu = mu1 - mu2;
    rep.sigma_star2 =
        nu1 * sigma1 * sigma1 + nu2 * sigma2 * sigma2 + nu1 * nu2 * dmu * dmu;
    rep.lhs = 0.5 * std::log(rep.sigma_star2);
    rep.rhs = 0.0;
    if (nu1 > 0.0) rep.rhs += nu1 * std::log(sigma1 / nu1);
    if (nu2 > 0.0) rep.rhs += nu2 * std::log(sigma2 / nu2);
    rep.split_is_strictly_better = rep.lhs > rep.rhs;

    rep.merged_H = 0.5 * (std::log(rep.sigma_star2) + kLog2Pi + 1.0);
    double hnu = 0.0;
    if (nu1 > 0.0) hnu -= nu1 * std::log(nu1);
    if (nu2 > 0.0) hnu -= nu2 * std::log(nu2);
    rep.split_H = hnu +
                  0.5 * (nu1 * std::log(sigma1 * sigma1) +
                         nu2 * std::log(sigma2 * sigma2)) +
                  0.5 * (kLog2Pi + 1.0);
    return rep;
}

}  // namespace entropic

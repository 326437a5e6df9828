#ifndef ENTROPIC_ORACLES_HPP
#define ENTROPIC_ORACLES_HPP

#include <cstdint>
#include <vector>

#include "entropic/data_model.hpp"
#include "entropic/entropy.hpp"

namespace entropic {

struct BruteForceResult {
    double min_H = 0.0;
    // All optima within kImprovementEps of min_H, canonicalized so classes
    // appear in order of their smallest member (label permutations collapse).
    std::vector<HardAssignment> optima;
    std::uint64_t assignments_enumerated = 0;
};

// Exhaustive minimum of the assignment criterion over {1..r}^(distinct
// values). Throws if r^m exceeds the guard, naming the count.
BruteForceResult brute_force_min(const WeightedSample& w, const Family& family,
                                 std::size_t r, std::uint64_t guard = 2000000);

struct BinaryComponent {
    double g0 = 0.0;
    double g1 = 0.0;
};

struct BinaryDecomposition {
    std::vector<double> nu;
    std::vector<BinaryComponent> components;
};

// Closed-form minimizers of the mixing entropy for the Bernoulli family on
// {0,1} with target mu0*delta_0 + mu1*delta_1.
struct BinarySolution {
    double min_H = 0.0;  // equals the binary entropy of (mu0, mu1)
    std::vector<BinaryDecomposition> optimal_decompositions;
    std::size_t r_nu = 1;  // pivot class index of the optimal fill
};

BinarySolution binary_closed_form(double mu0, double mu1);

// Population-level comparison of the merged decomposition against the given
// two-Gaussian split. split_is_strictly_better iff lhs > rhs, where
//   lhs = log sigma*,  rhs = nu1 log(sigma1/nu1) + nu2 log(sigma2/nu2),
// and sigma*^2 = nu1 sigma1^2 + nu2 sigma2^2 + nu1 nu2 (mu1 - mu2)^2.
struct GaussianThresholdReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool split_is_strictly_better = false;
    double sigma_star2 = 0.0;
    double merged_H = 0.0;  // mixing entropy of (1, (P*))
    double split_H = 0.0;   // mixing entropy of the two-component split
};

GaussianThresholdReport gaussian_split_test(double nu1, double mu1, double sigma1,
                                            double nu2, double mu2, double sigma2);

}  // namespace entropic

#endif

#ifndef ENTROPIC_ENTROPY_HPP
#define ENTROPIC_ENTROPY_HPP

#include <vector>

#include "entropic/data_model.hpp"
#include "entropic/families.hpp"

namespace entropic {

// A mixing entropy broken into its two terms. Always holds
//   value == nu_entropy + sum_x nu(x) * per_class_cross_entropy[x]
// with classes at nu(x) == 0 contributing exactly 0 (their slot stores 0).
// value may be +-inf; comparisons treat -inf as best.
struct CriterionValue {
    double value = 0.0;
    std::vector<double> per_class_cross_entropy;
    double nu_entropy = 0.0;
    std::vector<std::size_t> degenerate_classes;  // floor/cap bound these fits
};

// -sum nu(x) log nu(x), natural log, 0 log 0 = 0.
double shannon_entropy(const ProbVector& nu);

// -sum_z g(z) log g_theta(values[z]); +inf if g puts mass where the density
// vanishes.
double cross_entropy(const std::vector<double>& g, const std::vector<double>& values,
                     const Family& family, const FamilyParams& params);

struct MixingFit {
    CriterionValue criterion;
    std::vector<FamilyParams> params;  // placeholders where nu(x) == 0
};

// H(nu) + sum_x nu(x) min_theta H(G_x || g_theta): one weighted MLE per
// positive-mass class.
MixingFit mixing_entropy_fit(const Decomposition& d, const std::vector<double>& values,
                             const Family& family);
CriterionValue mixing_entropy(const Decomposition& d, const std::vector<double>& values,
                              const Family& family);

struct AssignmentCriterion {
    CriterionValue criterion;
    std::vector<FamilyParams> params;
    // classification log-likelihood: always -n * criterion.value
    double log_likelihood = 0.0;
};

AssignmentCriterion criterion_of_assignment(const HardAssignment& h,
                                            const WeightedSample& w,
                                            const Family& family);

}  // namespace entropic

#endif

#ifndef ENTROPIC_SYNTH_HPP
#define ENTROPIC_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "entropic/data_model.hpp"
#include "entropic/families.hpp"
#include "entropic/rng.hpp"

namespace entropic {

// mu* spacing of the synthetic targets sits at 2*sqrt(3), the population
// threshold for an equal, unit-variance pair.
inline constexpr double kTwoSqrt3 = 3.4641016151377543863532718;

struct MixtureSpec {
    ProbVector weights;
    std::vector<GaussianParams> components;
};

struct LabeledSample {
    std::vector<double> values;
    std::vector<std::size_t> labels;  // generating component per draw
};

// i.i.d. draws: component from weights, then the component's Gaussian via
// inverse-CDF sampling. Labels are diagnostics only and never reach a fitter.
LabeledSample sample_mixture(const MixtureSpec& spec, std::int64_t n,
                             std::uint64_t seed);

// Two equal components at 0 and mu_star, unit variances.
MixtureSpec spec_r2(double mu_star);
// Seven equal components at (x-1)*mu_star for x = 1..7, unit variances.
MixtureSpec spec_r7(double mu_star);

// n draws from {0,1} with P(1) = mu1.
std::vector<double> sample_bernoulli(double mu1, std::int64_t n, std::uint64_t seed);

}  // namespace entropic

#endif

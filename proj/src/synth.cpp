#include "entropic/synth.hpp"

#include <cmath>
#include <stdexcept>

namespace entropic {

LabeledSample sample_mixture(const MixtureSpec& spec, std::int64_t n,
                             std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample size must be >= 1");
    if (spec.weights.size() != spec.components.size())
        throw std::invalid_argument("mixture spec: weights/components mismatch");
    Rng rng(seed);
    LabeledSample out;
    out.values.reserve(static_cast<std::size_t>(n));
    out.labels.reserve(static_cast<std::size_t>(n));
    const std::size_t r = spec.weights.size();
    for (std::int64_t k = 0; k < n; ++k) {
        const double u = rng.uniform();
        std::size_t x = r - 1;
        double acc = 0.0;
        for (std::size_t j = 0; j < r; ++j) {
            acc += spec.weights[j];
            if (u < acc) {
                x = j;
                break;
            }
        }
        const auto& comp = spec.components[x];
        out.values.push_back(comp.mu + std::sqrt(comp.sigma2) * rng.normal());
        out.labels.push_back(x);
    }
    return out;
}

MixtureSpec spec_r2(double mu_star) {
    if (!(mu_star > 0.0)) throw std::invalid_argument("mu_star must be positive");
    MixtureSpec spec;
    spec.weights = make_prob_vector({0.5, 0.5});
    spec.components = {GaussianParams{0.0, 1.0}, GaussianParams{mu_star, 1.0}};
    return spec;
}

MixtureSpec spec_r7(double mu_star) {
    if (!(mu_star > 0.0)) throw std::invalid_argument("mu_star must be positive");
    MixtureSpec spec;
    std::vector<double> w(7, 1.0 / 7.0);
    spec.weights = make_prob_vector(std::move(w));
    for (int x = 1; x <= 7; ++x)
        spec.components.push_back(GaussianParams{(x - 1) * mu_star, 1.0});
    return spec;
}

std::vector<double> sample_bernoulli(double mu1, std::int64_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample size must be >= 1");
    if (!(mu1 >= 0.0 && mu1 <= 1.0))
        throw std::invalid_argument("mu1 must lie in [0,1]");
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k)
        out.push_back(rng.uniform() < mu1 ? 1.0 : 0.0);
    return out;
}

}  // namespace entropic

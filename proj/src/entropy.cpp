#include "entropic/entropy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace entropic {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double shannon_entropy(const ProbVector& nu) {
    double h = 0.0;
    for (double v : nu.weights)
        if (v > 0.0) h -= v * std::log(v);
    // entries may sit an ulp above 1 after accumulation
    return h < 0.0 ? 0.0 : h;
}

double cross_entropy(const std::vector<double>& g, const std::vector<double>& values,
                     const Family& family, const FamilyParams& params) {
    if (g.size() != values.size())
        throw std::invalid_argument("distribution/value size mismatch");
    const PreparedLogDensity ld(family, params);
    double h = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] <= 0.0) continue;
        const double l = ld(values[i]);
        if (l == -kInf) return kInf;
        h -= g[i] * l;
    }
    return h;
}

MixingFit mixing_entropy_fit(const Decomposition& d, const std::vector<double>& values,
                             const Family& family) {
    MixingFit out;
    const std::size_t r = d.r();
    out.criterion.nu_entropy = shannon_entropy(d.nu);
    out.criterion.per_class_cross_entropy.assign(r, 0.0);
    out.params.assign(r, placeholder_params(family));

    double value = out.criterion.nu_entropy;
    for (std::size_t x = 0; x < r; ++x) {
        if (d.nu[x] <= 0.0) continue;
        WeightedSubsample sub;
        sub.values = values;
        sub.weights = d.components[x];
        sub.mass = 0.0;
        for (double g : sub.weights) sub.mass += g;
        const FitOutcome fit = fit_weighted(family, sub);
        out.criterion.per_class_cross_entropy[x] = fit.cross_entropy;
        out.params[x] = fit.params;
        if (fit.degenerate) out.criterion.degenerate_classes.push_back(x);
        value += d.nu[x] * fit.cross_entropy;
    }
    out.criterion.value = value;
    return out;
}

CriterionValue mixing_entropy(const Decomposition& d, const std::vector<double>& values,
                              const Family& family) {
    return mixing_entropy_fit(d, values, family).criterion;
}

AssignmentCriterion criterion_of_assignment(const HardAssignment& h,
                                            const WeightedSample& w,
                                            const Family& family) {
    const Decomposition d = decomposition_from_assignment(soft_from_hard(h), w);
    MixingFit fit = mixing_entropy_fit(d, w.values, family);
    AssignmentCriterion out;
    out.criterion = std::move(fit.criterion);
    out.params = std::move(fit.params);
    out.log_likelihood = -static_cast<double>(w.n) * out.criterion.value;
    return out;
}

}  // namespace entropic

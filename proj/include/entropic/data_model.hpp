#ifndef ENTROPIC_DATA_MODEL_HPP
#define ENTROPIC_DATA_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace entropic {

// Absolute tolerance for probability vectors built in one accumulation pass.
inline constexpr double kProbTol = 1e-12;
// Looser tolerance for decompositions, which go through two rounding layers.
inline constexpr double kDecompTol = 1e-10;

// Empirical distribution of a sample: distinct values with multiplicities.
// Values are strictly increasing; weight(i) = counts[i] / n.
struct WeightedSample {
    std::vector<double> values;
    std::vector<std::int64_t> counts;
    std::int64_t n = 0;

    std::size_t size() const { return values.size(); }
    double weight(std::size_t i) const {
        return static_cast<double>(counts[i]) / static_cast<double>(n);
    }
};

// Probability vector over class labels. Entries are >= 0 and sum to 1
// within kProbTol; construction checks this.
struct ProbVector {
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    double operator[](std::size_t x) const { return weights[x]; }
};

ProbVector make_prob_vector(std::vector<double> weights);

// Row-stochastic matrix phi over (distinct value, class). Rows sum to 1
// within kProbTol.
struct SoftAssignment {
    std::size_t r = 0;
    std::vector<double> phi;  // row-major, size values * r

    std::size_t num_values() const { return r == 0 ? 0 : phi.size() / r; }
    double operator()(std::size_t value_idx, std::size_t x) const {
        return phi[value_idx * r + x];
    }
    double& at(std::size_t value_idx, std::size_t x) {
        return phi[value_idx * r + x];
    }
};

// Classification rule: one class label (0-based, < r) per distinct value.
struct HardAssignment {
    std::size_t r = 0;
    std::vector<std::size_t> label;

    bool operator==(const HardAssignment& o) const {
        return r == o.r && label == o.label;
    }
};

// Mixture decomposition (nu, (G_x)) of a weighted sample. components[x] is a
// distribution over the sample's distinct values. Classes with nu(x) == 0
// hold a uniform placeholder and are skipped by every criterion.
struct Decomposition {
    ProbVector nu;
    std::vector<std::vector<double>> components;
    std::vector<bool> placeholder;  // true where nu(x) == 0

    std::size_t r() const { return nu.size(); }
};

void check_soft_assignment(const SoftAssignment& s);
void check_hard_assignment(const HardAssignment& h);

// Verifies sum_x nu(x) G_x(z) == weight(z) within tol for every value.
bool decomposition_matches_sample(const Decomposition& d,
                                  const WeightedSample& w,
                                  double tol = kDecompTol);

// Groups raw observations into a WeightedSample. tolerance == 0 groups by
// exact bit equality; tolerance > 0 groups values equal after rounding to
// the nearest multiple of tolerance.
WeightedSample ingest(const std::vector<double>& raw, double grouping_tolerance = 0.0);

// Reads one numeric value per line. A non-numeric first line is treated as a
// header; any later non-numeric line raises an error naming its line number.
std::vector<double> read_values_csv(const std::string& path);

SoftAssignment soft_from_hard(const HardAssignment& h);

Decomposition decomposition_from_assignment(const SoftAssignment& s,
                                            const WeightedSample& w);

}  // namespace entropic

#endif

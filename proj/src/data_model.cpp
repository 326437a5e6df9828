#include "entropic/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "entropic/errors.hpp"

namespace entropic {

ProbVector make_prob_vector(std::vector<double> weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("probability vector: negative entry");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kProbTol)
        throw std::invalid_argument("probability vector: entries sum to " + std::to_string(sum));
    return ProbVector{std::move(weights)};
}

void check_soft_assignment(const SoftAssignment& s) {
    if (s.r == 0) throw std::invalid_argument("assignment: r must be >= 1");
    if (s.phi.size() % s.r != 0) throw std::invalid_argument("assignment: ragged phi matrix");
    const std::size_t m = s.num_values();
    for (std::size_t i = 0; i < m; ++i) {
        double row = 0.0;
        for (std::size_t x = 0; x < s.r; ++x) {
            const double v = s(i, x);
            if (!(v >= 0.0) || v > 1.0 + kProbTol)
                throw std::invalid_argument("assignment: phi entry outside [0,1]");
            row += v;
        }
        if (std::abs(row - 1.0) > kProbTol)
            throw std::invalid_argument("assignment: row " + std::to_string(i) +
                                        " sums to " + std::to_string(row));
    }
}

void check_hard_assignment(const HardAssignment& h) {
    if (h.r == 0) throw std::invalid_argument("assignment: r must be >= 1");
    for (std::size_t lab : h.label)
        if (lab >= h.r) throw std::invalid_argument("assignment: label out of range");
}

bool decomposition_matches_sample(const Decomposition& d, const WeightedSample& w,
                                  double tol) {
    const std::size_t m = w.size();
    for (std::size_t x = 0; x < d.r(); ++x)
        if (d.components[x].size() != m) return false;
    for (std::size_t i = 0; i < m; ++i) {
        double mix = 0.0;
        for (std::size_t x = 0; x < d.r(); ++x) mix += d.nu[x] * d.components[x][i];
        if (std::abs(mix - w.weight(i)) > tol) return false;
    }
    return true;
}

WeightedSample ingest(const std::vector<double>& raw, double grouping_tolerance) {
    if (raw.empty()) throw EmptySampleError("empty sample");
    if (!(grouping_tolerance >= 0.0))
        throw std::invalid_argument("grouping tolerance must be >= 0");

    std::vector<double> keyed(raw);
    if (grouping_tolerance > 0.0)
        for (double& z : keyed) z = std::round(z / grouping_tolerance) * grouping_tolerance;
    std::sort(keyed.begin(), keyed.end());

    WeightedSample w;
    w.n = static_cast<std::int64_t>(keyed.size());
    for (double z : keyed) {
        if (!w.values.empty() && z == w.values.back()) {
            ++w.counts.back();
        } else {
            w.values.push_back(z);
            w.counts.push_back(1);
        }
    }
    return w;
}

std::vector<double> read_values_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        std::size_t e = line.find_last_not_of(" \t");
        const std::string token = line.substr(b, e - b + 1);

        const char* begin = token.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        const bool parsed = end == begin + token.size() && end != begin;
        if (!parsed) {
            if (first_content_line) {  // header row
                first_content_line = false;
                continue;
            }
            throw ParseError("line " + std::to_string(lineno) +
                                     ": not a number: '" + token + "'");
        }
        first_content_line = false;
        out.push_back(v);
    }
    return out;
}

SoftAssignment soft_from_hard(const HardAssignment& h) {
    check_hard_assignment(h);
    SoftAssignment s;
    s.r = h.r;
    s.phi.assign(h.label.size() * h.r, 0.0);
    for (std::size_t i = 0; i < h.label.size(); ++i) s.at(i, h.label[i]) = 1.0;
    return s;
}

Decomposition decomposition_from_assignment(const SoftAssignment& s,
                                            const WeightedSample& w) {
    const std::size_t m = w.size();
    if (s.num_values() != m)
        throw std::invalid_argument("assignment and sample value sets differ in size");

    Decomposition d;
    d.placeholder.assign(s.r, false);
    std::vector<double> nu(s.r, 0.0);
    d.components.assign(s.r, std::vector<double>(m, 0.0));
    for (std::size_t x = 0; x < s.r; ++x) {
        double mass = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double joint = w.weight(i) * s(i, x);
            d.components[x][i] = joint;
            mass += joint;
        }
        nu[x] = mass;
        if (mass > 0.0) {
            for (double& g : d.components[x]) g /= mass;
        } else {
            // inert placeholder; 0 log 0 = 0 keeps it out of every criterion
            d.placeholder[x] = true;
            d.components[x].assign(m, 1.0 / static_cast<double>(m));
        }
    }
    // nu sums to 1 up to one rounding pass; renormalization would hide bugs,
    // so build the ProbVector through the checking constructor.
    d.nu = make_prob_vector(std::move(nu));
    return d;
}

}  // namespace entropic

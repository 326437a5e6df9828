#include <doctest.h>

#include <cmath>
#include <set>

#include "entropic/errors.hpp"
#include "entropic/oracles.hpp"
#include "entropic/rng.hpp"
#include "entropic/synth.hpp"

using namespace entropic;

namespace {
Family make(FamilyKind kind) {
    Family f;
    f.kind = kind;
    if (kind == FamilyKind::gaussian) f.sigma2_floor = 1e-12;
    return f;
}

WeightedSample binary_counts(std::int64_t zeros, std::int64_t ones) {
    std::vector<double> raw;
    for (std::int64_t i = 0; i < zeros; ++i) raw.push_back(0.0);
    for (std::int64_t i = 0; i < ones; ++i) raw.push_back(1.0);
    return ingest(raw);
}
}  // namespace

TEST_CASE("brute force on the 1+1 binary sample") {
    const auto res = brute_force_min(binary_counts(1, 1), make(FamilyKind::bernoulli), 2);
    CHECK(res.assignments_enumerated == 4);
    CHECK(res.min_H == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    // merged and split both optimal once label permutations collapse
    CHECK(res.optima.size() == 2);
}

TEST_CASE("brute force with r = 1 is the merged criterion") {
    const WeightedSample w = ingest({0.5, 1.5, 2.5});
    const Family f = make(FamilyKind::gaussian);
    const auto res = brute_force_min(w, f, 1);
    const auto merged =
        criterion_of_assignment(HardAssignment{1, {0, 0, 0}}, w, f);
    CHECK(res.min_H == merged.criterion.value);
    CHECK(res.optima.size() == 1);
}

TEST_CASE("brute force on the 70/30 sample never occupies three classes") {
    const auto res = brute_force_min(binary_counts(7, 3), make(FamilyKind::bernoulli), 3);
    CHECK(res.min_H == doctest::Approx(0.6108643020548935).epsilon(1e-13));
    for (const auto& opt : res.optima) {
        std::set<std::size_t> used(opt.label.begin(), opt.label.end());
        CHECK(used.size() <= 2);
    }
}

TEST_CASE("brute force guard names the count") {
    const WeightedSample w = ingest({1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0});
    CHECK_THROWS_AS(brute_force_min(w, make(FamilyKind::gaussian), 9, 1000),
                    GuardError);
}

TEST_CASE("binary closed form: symmetric case") {
    const BinarySolution sol = binary_closed_form(0.5, 0.5);
    CHECK(sol.min_H == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(sol.optimal_decompositions.size() == 3);  // merged + split + swap
    CHECK(sol.r_nu == 1);
}

TEST_CASE("binary closed form: degenerate corner keeps only the merged optimum") {
    const BinarySolution sol = binary_closed_form(1.0, 0.0);
    CHECK(sol.min_H == 0.0);
    CHECK(sol.optimal_decompositions.size() == 1);
    CHECK(sol.optimal_decompositions[0].nu == std::vector<double>{1.0});
}

TEST_CASE("binary closed form matches brute force on 70/30") {
    const BinarySolution sol = binary_closed_form(0.7, 0.3);
    const auto res = brute_force_min(binary_counts(7, 3), make(FamilyKind::bernoulli), 2);
    CHECK(sol.min_H == doctest::Approx(res.min_H).epsilon(1e-15));
    CHECK(sol.min_H == doctest::Approx(0.6108643020548935).epsilon(1e-14));
}

TEST_CASE("binary closed form rejects off-simplex input") {
    CHECK_THROWS(binary_closed_form(0.7, 0.4));
    CHECK_THROWS(binary_closed_form(-0.1, 1.1));
}

TEST_CASE("gaussian threshold: separation boundary at 2 sqrt 3") {
    const auto rep = gaussian_split_test(0.5, 0.0, 1.0, 0.5, kTwoSqrt3, 1.0);
    CHECK(std::abs(rep.lhs - rep.rhs) < 1e-12);
    CHECK(std::abs(rep.lhs - std::log(2.0)) < 1e-12);
    CHECK(std::abs(rep.sigma_star2 - 4.0) < 1e-12);
    CHECK_FALSE(rep.split_is_strictly_better);
    CHECK(std::abs(rep.merged_H - rep.split_H) < 1e-12);
}

TEST_CASE("gaussian threshold: scale boundaries at 4 +- sqrt 15") {
    for (double s2 : {4.0 - std::sqrt(15.0), 4.0 + std::sqrt(15.0)}) {
        const auto rep = gaussian_split_test(0.5, 0.0, 1.0, 0.5, 0.0, s2);
        CHECK(std::abs(rep.lhs - rep.rhs) < 1e-12);
    }
}

TEST_CASE("gaussian threshold: wide separation favors the split") {
    const auto rep = gaussian_split_test(0.5, 0.0, 1.0, 0.5, 1.1 * kTwoSqrt3, 1.0);
    CHECK(rep.split_is_strictly_better);
    CHECK(rep.merged_H > rep.split_H);
    // inside the threshold the merged version wins
    const auto inside = gaussian_split_test(0.5, 0.0, 1.0, 0.5, 0.9 * kTwoSqrt3, 1.0);
    CHECK_FALSE(inside.split_is_strictly_better);
}

TEST_CASE("gaussian threshold symmetry") {
    Rng rng(71);
    for (int t = 0; t < 20; ++t) {
        const double nu1 = 0.05 + 0.9 * rng.uniform();
        const double mu1 = 3.0 * rng.normal(), mu2 = 3.0 * rng.normal();
        const double s1 = 0.2 + 2.0 * rng.uniform(), s2 = 0.2 + 2.0 * rng.uniform();
        const auto a = gaussian_split_test(nu1, mu1, s1, 1.0 - nu1, mu2, s2);
        const auto b = gaussian_split_test(1.0 - nu1, mu2, s2, nu1, mu1, s1);
        CHECK(a.lhs == doctest::Approx(b.lhs).epsilon(1e-13));
        CHECK(a.rhs == doctest::Approx(b.rhs).epsilon(1e-13));
        const double shift = rng.normal();
        const auto c =
            gaussian_split_test(nu1, mu1 + shift, s1, 1.0 - nu1, mu2 + shift, s2);
        CHECK(a.lhs == doctest::Approx(c.lhs).epsilon(1e-12));
        CHECK(a.rhs == c.rhs);
    }
}

TEST_CASE("brute force equals the closed form on all small binary splits") {
    // subset here; the acceptance suite sweeps every n <= 12, r <= 4
    for (std::int64_t n = 2; n <= 6; ++n) {
        for (std::int64_t k = 0; k <= n; ++k) {
            const WeightedSample w = binary_counts(k, n - k);
            const double mu0 = static_cast<double>(k) / static_cast<double>(n);
            const BinarySolution sol = binary_closed_form(mu0, 1.0 - mu0);
            for (std::size_t r = 1; r <= 3; ++r) {
                const auto res = brute_force_min(w, make(FamilyKind::bernoulli), r);
                if (r == 1) {
                    CHECK(res.min_H == doctest::Approx(sol.min_H).epsilon(1e-12));
                } else {
                    CHECK(std::abs(res.min_H - sol.min_H) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("brute force minima are non-increasing and settle in r") {
    Rng rng(83);
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<double> raw;
        const int n = 4 + static_cast<int>(rng.next_u64() % 3);
        for (int i = 0; i < n; ++i) raw.push_back(rng.normal());
        const WeightedSample w = ingest(raw);
        const Family f = bind_family(FamilyKind::gaussian, w);
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t r = 1; r <= 4; ++r) {
            const auto res = brute_force_min(w, f, r);
            CHECK(res.min_H <= prev + 1e-12);
            prev = res.min_H;
        }
    }
}

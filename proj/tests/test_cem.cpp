#include <doctest.h>

#include <cmath>
#include <limits>

#include "entropic/cem.hpp"
#include "entropic/rng.hpp"
#include "entropic/search.hpp"
#include "entropic/synth.hpp"
#include "oracle_helpers.hpp"

using namespace entropic;

namespace {
Family make(FamilyKind kind) {
    Family f;
    f.kind = kind;
    if (kind == FamilyKind::gaussian) f.sigma2_floor = 1e-12;
    return f;
}

WeightedSample gaussian_sample(std::uint64_t seed, int n, double scale = 1.0) {
    Rng rng(seed);
    std::vector<double> raw;
    for (int i = 0; i < n; ++i) raw.push_back(scale * rng.normal());
    return ingest(raw);
}
}  // namespace

TEST_CASE("e_step with one class is all ones") {
    const WeightedSample w = gaussian_sample(1, 20);
    ModelState state{make_prob_vector({1.0}), {GaussianParams{0.0, 1.0}}};
    const SoftAssignment phi = e_step(state, w, make(FamilyKind::gaussian));
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(phi(i, 0) == 1.0);
}

TEST_CASE("e_step at the symmetric midpoint is a coin flip") {
    const WeightedSample w = ingest({1.0});
    ModelState state{make_prob_vector({0.5, 0.5}),
                     {GaussianParams{0.0, 1.0}, GaussianParams{2.0, 1.0}}};
    const SoftAssignment phi = e_step(state, w, make(FamilyKind::gaussian));
    CHECK(phi(0, 0) == 0.5);
    CHECK(phi(0, 1) == 0.5);
}

TEST_CASE("e_step with equal densities returns the prior") {
    const WeightedSample w = ingest({0.3, 0.8});
    ModelState state{make_prob_vector({0.9, 0.1}),
                     {GaussianParams{0.5, 2.0}, GaussianParams{0.5, 2.0}}};
    const SoftAssignment phi = e_step(state, w, make(FamilyKind::gaussian));
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(phi(i, 0) == doctest::Approx(0.9).epsilon(1e-15));
        CHECK(phi(i, 1) == doctest::Approx(0.1).epsilon(1e-15));
    }
}

TEST_CASE("e_step reports a point no class explains") {
    const WeightedSample w = ingest({1.0});
    BiExpParams gap;
    gap.a_left = 0.0;
    gap.a_right = 2.0;
    ModelState state{make_prob_vector({1.0}), {FamilyParams{gap}}};
    CHECK_THROWS_WITH(e_step(state, w, make(FamilyKind::biexp)),
                      "unexplainable point z = 1.000000");
}

TEST_CASE("e_step rows stay normalized across extreme density ratios") {
    const WeightedSample w = ingest({-1000.0, 0.0, 1000.0});
    ModelState state{make_prob_vector({0.5, 0.5}),
                     {GaussianParams{-1000.0, 1e-6}, GaussianParams{1000.0, 1e6}}};
    const SoftAssignment phi = e_step(state, w, make(FamilyKind::gaussian));
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double row = phi(i, 0) + phi(i, 1);
        CHECK(std::abs(row - 1.0) <= 1e-12);
    }
}

TEST_CASE("c_step picks the max and breaks ties low") {
    SoftAssignment s;
    s.r = 2;
    s.phi = {0.6, 0.4, 0.5, 0.5, 0.1, 0.9};
    const HardAssignment h = c_step(s);
    CHECK(h.label == std::vector<std::size_t>{0, 0, 1});
}

TEST_CASE("c_step is idempotent on hard input") {
    const HardAssignment h{3, {2, 0, 1, 1}};
    CHECK(c_step(soft_from_hard(h)) == h);
}

TEST_CASE("m_step on the one-class assignment recovers sample moments") {
    const WeightedSample w = ingest({1.0, 2.0, 3.0, 3.0});
    const auto res = m_step(HardAssignment{1, {0, 0, 0}}, w, make(FamilyKind::gaussian));
    CHECK(res.state.nu[0] == 1.0);
    const auto& p = std::get<GaussianParams>(res.state.params[0]);
    CHECK(p.mu == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(p.sigma2 == doctest::Approx((1.5625 + 0.0625 + 2 * 0.5625) / 4.0));
}

TEST_CASE("m_step on a binary split yields dirac components") {
    const WeightedSample w = ingest({0.0, 0.0, 0.0, 1.0, 1.0});
    const auto res = m_step(HardAssignment{2, {0, 1}}, w, make(FamilyKind::bernoulli));
    CHECK(res.state.nu[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(res.state.nu[1] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(std::get<BernoulliParams>(res.state.params[0]).mu0 == 1.0);
    CHECK(std::get<BernoulliParams>(res.state.params[1]).mu1 == 1.0);
    CHECK(res.criterion.value ==
          doctest::Approx(shannon_entropy(res.state.nu)).epsilon(1e-14));
}

TEST_CASE("m_step tolerates class extinction") {
    const WeightedSample w = ingest({0.0, 1.0});
    const auto res = m_step(HardAssignment{3, {0, 0}}, w, make(FamilyKind::gaussian));
    CHECK(res.state.nu[1] == 0.0);
    CHECK(res.state.nu[2] == 0.0);
    CHECK(res.criterion.per_class_cross_entropy[1] == 0.0);
}

TEST_CASE("oracle midpoint split beats merged past the threshold") {
    const double mu = 1.1 * kTwoSqrt3;
    const LabeledSample draw = sample_mixture(spec_r2(mu), 10000, 7);
    const WeightedSample w = ingest(draw.values);
    const Family f = bind_family(FamilyKind::gaussian, w);
    HardAssignment split;
    split.r = 2;
    for (double z : w.values) split.label.push_back(z < mu / 2 ? 0 : 1);
    const double split_H = m_step(split, w, f).criterion.value;
    const double merged_H =
        m_step(HardAssignment{1, std::vector<std::size_t>(w.size(), 0)}, w, f)
            .criterion.value;
    CHECK(split_H < merged_H);
}

TEST_CASE("run_cem from a converged state stops after one iteration") {
    const WeightedSample w = gaussian_sample(9, 60);
    const Family f = make(FamilyKind::gaussian);
    Rng rng(17);
    const SoftAssignment init = random_initial_assignment(2, w, rng);
    const CemResult first = run_cem(init, w, f);
    const CemResult again = run_cem(first.final_state, w, f);
    CHECK(again.trace.records.size() == 1);
    CHECK(again.best_H == doctest::Approx(first.best_H).epsilon(1e-12));
}

TEST_CASE("run_cem with r = 1 returns the merged criterion immediately") {
    const WeightedSample w = gaussian_sample(11, 40);
    const Family f = make(FamilyKind::gaussian);
    Rng rng(3);
    const CemResult res = run_cem(random_initial_assignment(1, w, rng), w, f);
    const double merged =
        m_step(HardAssignment{1, std::vector<std::size_t>(w.size(), 0)}, w, f)
            .criterion.value;
    CHECK(res.best_H == doctest::Approx(merged).epsilon(1e-14));
    CHECK(res.trace.records.size() <= 2);
}

TEST_CASE("cem trace is monotone and satisfies the per-iteration bounds") {
    Rng seeds(101);
    int checked_iterations = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const FamilyKind kind = trial % 3 == 0   ? FamilyKind::bernoulli
                                : trial % 3 == 1 ? FamilyKind::gaussian
                                                 : FamilyKind::biexp;
        Rng rng(seeds.next_u64());
        std::vector<double> raw;
        const int n = 80 + static_cast<int>(rng.next_u64() % 320);
        for (int i = 0; i < n; ++i)
            raw.push_back(kind == FamilyKind::bernoulli
                              ? static_cast<double>(rng.next_u64() % 2)
                              : rng.normal() + (i % 3) * 1.8);
        const WeightedSample w = ingest(raw);
        const Family f = kind == FamilyKind::gaussian
                             ? bind_family(kind, w)
                             : make(kind);
        const std::size_t r = 1 + rng.next_u64() % 5;
        const SoftAssignment init = random_initial_assignment(r, w, rng);
        const CemResult res = run_cem(init, w, f);
        const auto& recs = res.trace.records;
        for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
            CHECK(recs[i + 1].hard_H <= recs[i].hard_H + 1e-9);
            CHECK(recs[i + 1].hard_H <= recs[i].soft_H_at_refit + 1e-9);
            CHECK(recs[i + 1].hard_H <= recs[i].soft_H + 1e-9);
            ++checked_iterations;
        }
        for (const auto& rec : recs) {
            CHECK(rec.hard_H <= rec.soft_H + 1e-9);
            CHECK(rec.soft_H <= rec.soft_H_at_refit + 1e-9);
        }
    }
    CHECK(checked_iterations > 100);
}

TEST_CASE("run_cem is deterministic") {
    const WeightedSample w = gaussian_sample(13, 100, 2.0);
    const Family f = bind_family(FamilyKind::gaussian, w);
    Rng rng1(77), rng2(77);
    const CemResult a = run_cem(random_initial_assignment(3, w, rng1), w, f);
    const CemResult b = run_cem(random_initial_assignment(3, w, rng2), w, f);
    REQUIRE(a.trace.records.size() == b.trace.records.size());
    for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
        CHECK(a.trace.records[i].hard_H == b.trace.records[i].hard_H);
        CHECK(a.trace.records[i].soft_H == b.trace.records[i].soft_H);
    }
    CHECK(a.best_assignment == b.best_assignment);
    CHECK(a.best_H == b.best_H);
}

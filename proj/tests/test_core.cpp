#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "exaul/estimators.hpp"
#include "exaul/grid.hpp"
#include "exaul/loss.hpp"
#include "exaul/rng.hpp"
#include "exaul/unlock.hpp"
#include "oracles.hpp"

using namespace exaul;

namespace {

std::vector<double> random_policy(std::size_t n, Rng& rng) {
    std::vector<double> p(n);
    double s = 0.0;
    for (auto& v : p) {
        v = rng.uniform() + 1e-3;
        s += v;
    }
    for (auto& v : p) v /= s;
    // push residual into the last arm so the sum is 1 within 1e-12
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) total += p[i];
    p[n - 1] = 1.0 - total;
    return p;
}

}  // namespace

TEST_CASE("grid values are exact endpoints and single divisions") {
    HypothesisGrid g5(5);
    CHECK(g5.value(0) == 0.0);
    CHECK(g5.value(4) == 1.0);
    HypothesisGrid g1000(1000);
    CHECK(g1000.value(500) == 500.0 / 999.0);
    CHECK_THROWS_AS((void)g5.value(5), std::out_of_range);
    CHECK_THROWS_AS(HypothesisGrid(1), std::invalid_argument);
}

TEST_CASE("grid endpoints always accept / always abstain") {
    HypothesisGrid g(7);
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const double s = clamp_score(rng.uniform());
        CHECK(accepts(g.value(0), s));
        CHECK_FALSE(accepts(g.value(6), s));
    }
    CHECK(clamp_score(1.0) == kMaxScore);
    CHECK(clamp_score(2.5) == kMaxScore);
    CHECK(clamp_score(-0.5) == 0.0);
}

TEST_CASE("acceptance is non-strict and monotone in the threshold") {
    CHECK(accepts(0.0, 0.0));
    CHECK_FALSE(accepts(1.0, 0.999));
    CHECK(accepts(0.5, 0.5));  // tie accepts
    HypothesisGrid g(101);
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const double s = clamp_score(rng.uniform());
        bool prev = true;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const bool a = accepts(g.value(k), s);
            CHECK((prev || !a));  // once false, stays false
            prev = a;
        }
    }
}

TEST_CASE("cut index matches the exact grid comparison everywhere") {
    Rng rng(17);
    for (std::size_t size : {2u, 3u, 5u, 64u, 1000u}) {
        HypothesisGrid g(size);
        for (int i = 0; i < 500; ++i) {
            const double s = clamp_score(rng.uniform());
            const std::size_t cut = g.cut_index(s);
            CHECK(g.value(cut) <= s);
            if (cut + 1 < size) CHECK(g.value(cut + 1) > s);
        }
        for (std::size_t k = 0; k + 1 < size; ++k) {
            CHECK(g.cut_index(g.value(k)) == k);
            const double just_below = std::nextafter(g.value(k), -1.0);
            if (k > 0) CHECK(g.cut_index(just_below) == k - 1);
        }
    }
}

TEST_CASE("loss terms: worked values") {
    {
        const auto l = compute_loss(true, 0.0, {0.1, 1.0});
        CHECK(l.inefficiency == 0.0);
        CHECK(l.fdr_margin == 0.0);
        CHECK(l.combined == 0.0);
    }
    {
        const auto l = compute_loss(false, 0.7, {0.2, 1.0});
        CHECK(l.inefficiency == 1.0);
        CHECK(l.fdr_margin == 0.2);
        CHECK(l.combined == doctest::Approx(0.6).epsilon(1e-15));
    }
    {
        // stepping through the procedure: a=0, d=1, combined=(0+3)/4
        const auto l = compute_loss(true, 1.0, {0.05, 3.0});
        CHECK(l.inefficiency == 0.0);
        CHECK(l.fdr_margin == 1.0);
        CHECK(l.combined == 0.75);
    }
    CHECK_THROWS_AS(compute_loss(true, 1.5, {0.1, 1.0}), std::domain_error);
    CHECK_THROWS_AS(compute_loss(true, -0.1, {0.1, 1.0}), std::domain_error);
    CHECK_THROWS_AS(compute_loss(true, 0.5, {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(compute_loss(true, 0.5, {0.5, -1.0}), std::invalid_argument);
}

TEST_CASE("loss range and exact closed-form equivalence on random inputs") {
    Rng rng(23);
    for (int i = 0; i < 20000; ++i) {
        const LossParams params{0.001 + 0.998 * rng.uniform(), rng.uniform() * 200.0};
        const bool answered = rng.bernoulli(0.5);
        const double e = rng.uniform();
        const auto l = compute_loss(answered, e, params);
        CHECK((l.inefficiency == 0.0 || l.inefficiency == 1.0));
        CHECK(l.fdr_margin >= 0.0);
        CHECK(l.fdr_margin <= 1.0);
        CHECK(l.combined >= 0.0);
        CHECK(l.combined <= 1.0);
        CHECK(l.combined == oracles::loss_closed_form(answered, e, params));
    }
}

TEST_CASE("unlock sets: worked values") {
    HypothesisGrid g(5);
    {
        const auto u = unlock_set(g, 2, 0.6);
        CHECK(u.answered);
        CHECK(u.lo == 0);
        CHECK(u.hi == 2);
    }
    {
        const auto u = unlock_set(g, 4, 0.6);
        CHECK_FALSE(u.answered);
        CHECK(u.lo == 3);
        CHECK(u.hi == 4);
    }
    {
        HypothesisGrid big(1000);
        const auto u = unlock_set(big, 0, 0.0);
        CHECK(u.answered);
        CHECK(u.lo == 0);
        CHECK(u.hi == 0);
    }
}

TEST_CASE("unlock-set algebra: self-inclusion, partition, complement, swap") {
    Rng rng(29);
    for (std::size_t size : {2u, 3u, 17u, 64u}) {
        HypothesisGrid g(size);
        for (int trial = 0; trial < 300; ++trial) {
            const double s = clamp_score(rng.uniform());
            const std::size_t chosen = rng.uniform_index(size);
            const auto u = unlock_set(g, chosen, s);
            CHECK(u.contains(chosen));
            for (std::size_t j = 0; j < size; ++j) {
                const auto uj = unlock_set(g, j, s);
                if (u.contains(j)) {
                    CHECK(uj.lo == u.lo);
                    CHECK(uj.hi == u.hi);
                } else {
                    CHECK(uj.lo == (u.answered ? u.hi + 1 : 0));
                    CHECK(uj.hi == (u.answered ? size - 1 : u.lo - 1));
                    CHECK(u.count() + uj.count() == size);
                }
                CHECK(u.contains(j) == uj.contains(chosen));  // swap
            }
        }
    }
}

TEST_CASE("unlocking estimator: worked values") {
    HypothesisGrid g(5);
    const std::vector<double> uniform(5, 0.2);
    {
        const auto u = unlock_set(g, 2, 0.6);
        const LossTerms l{0.0, 0.5, 0.5};
        const auto est = estimate_loss_exaul(u, l, uniform, 0.05);
        for (std::size_t k = 0; k <= 2; ++k)
            CHECK(est[k] == doctest::Approx(0.5 / 0.65).epsilon(1e-14));
        CHECK(est[3] == 0.0);
        CHECK(est[4] == 0.0);
    }
    {
        const UnlockSet full{true, 4, 0, 4};
        const auto est = estimate_loss_exaul(full, LossTerms{0, 0, 0.0}, uniform, 0.3);
        for (double v : est) CHECK(v == 0.0);
    }
}

TEST_CASE("singleton estimator: worked values and zero loss") {
    const std::vector<double> uniform(5, 0.2);
    const auto est = estimate_loss_ix(2, 0.5, uniform, 0.05);
    CHECK(est[2] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(est[0] == 0.0);
    CHECK(est[4] == 0.0);
    const auto zero = estimate_loss_ix(1, 0.0, uniform, 0.05);
    for (double v : zero) CHECK(v == 0.0);
}

TEST_CASE("estimator input validation") {
    std::vector<double> bad(4, 0.3);  // sums to 1.2
    CHECK_THROWS_AS(estimate_loss_ix(0, 0.5, bad, 0.1), std::invalid_argument);
    std::vector<double> ok(4, 0.25);
    CHECK_THROWS_AS(estimate_loss_ix(0, 0.5, ok, -0.1), std::invalid_argument);
    std::vector<double> corner{0.0, 0.0, 0.5, 0.5};
    HypothesisGrid g(4);
    const auto u = unlock_set(g, 0, 0.1);  // members {0}
    CHECK(u.lo == 0);
    CHECK(u.hi == 0);
    CHECK_THROWS_AS(estimate_loss_exaul(u, LossTerms{0, 0.5, 0.5}, corner, 0.0),
                    std::domain_error);
    CHECK_THROWS_AS(estimate_loss_ix(0, 0.5, corner, 0.0), std::domain_error);
}

TEST_CASE("literal double-indicator estimator agrees exactly with the simplified form") {
    Rng rng(31);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t size = 2 + rng.uniform_index(63);
        HypothesisGrid g(size);
        const auto policy = random_policy(size, rng);
        const double s = clamp_score(rng.uniform());
        const std::size_t chosen = rng.uniform_index(size);
        const double gamma = rng.bernoulli(0.3) ? 0.0 : rng.uniform() * 0.2;
        const double loss_value = rng.uniform();

        const auto u = unlock_set(g, chosen, s);
        const auto fast = estimate_loss_exaul(u, LossTerms{0, 0, loss_value}, policy, gamma);
        const auto literal = oracles::estimate_literal(g, chosen, s, loss_value, policy, gamma);
        for (std::size_t k = 0; k < size; ++k) CHECK(fast[k] == literal[k]);
    }
}

TEST_CASE("estimator is unbiased per arm at gamma = 0") {
    Rng rng(37);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t size = 2 + rng.uniform_index(63);
        HypothesisGrid g(size);
        const auto policy = random_policy(size, rng);
        const LossParams params{0.001 + 0.998 * rng.uniform(), rng.uniform() * 10.0};
        RoundOutcome round;
        round.score = clamp_score(rng.uniform());
        round.correctness = rng.bernoulli(0.5) ? 1.0 : 0.0;

        for (std::size_t k = 0; k < size; ++k) {
            double expectation = 0.0;
            for (std::size_t chosen = 0; chosen < size; ++chosen) {
                const auto u = unlock_set(g, chosen, round.score);
                const double e_side = u.answered ? 1.0 - round.correctness : 1.0;
                const auto loss = compute_loss(u.answered, e_side, params);
                const auto est = estimate_loss_exaul(u, loss, policy, 0.0);
                expectation += policy[chosen] * est[k];
            }
            CHECK(expectation ==
                  doctest::Approx(oracles::arm_loss(g, k, round, params)).epsilon(1e-10));
        }
    }
}

TEST_CASE("singleton estimator is unbiased per arm at gamma = 0") {
    Rng rng(41);
    HypothesisGrid g(5);
    const auto policy = random_policy(5, rng);
    const LossParams params{0.1, 2.0};
    RoundOutcome round;
    round.score = 0.62;
    round.correctness = 0.0;
    for (std::size_t k = 0; k < 5; ++k) {
        double expectation = 0.0;
        for (std::size_t chosen = 0; chosen < 5; ++chosen) {
            const bool answered = accepts(g.value(chosen), round.score);
            const auto loss = compute_loss(answered, 1.0, params);
            const auto est = estimate_loss_ix(chosen, loss.combined, policy, 0.0);
            expectation += policy[chosen] * est[k];
        }
        const bool answered_k = accepts(g.value(k), round.score);
        const double expected = compute_loss(answered_k, 1.0, params).combined;
        CHECK(expectation == doctest::Approx(expected).epsilon(1e-10));
    }
}

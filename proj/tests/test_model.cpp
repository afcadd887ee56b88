#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "phardy/errors.hpp"
#include "phardy/model.hpp"

using namespace phardy;

namespace {

ProblemParams hs(int N, double p, double mu = 0.0, double s = 0.0)
{
    return ProblemParams{.N = N, .p = p, .mu = mu, .s = s, .variant = Variant::HardySobolev};
}

} // namespace

TEST_CASE("hardy_best_constant matches ((N-p)/p)^p")
{
    CHECK(hardy_best_constant(hs(5, 2.0)) == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(hardy_best_constant(hs(4, 2.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(hardy_best_constant(hs(6, 3.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(hardy_best_constant(hs(5, 5.0)), ValidationError);
    CHECK_THROWS_AS(hardy_best_constant(hs(5, 1.0)), ValidationError);
}

TEST_CASE("critical exponents")
{
    CHECK(critical_exponents(hs(6, 2.0)).p_star == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(critical_exponents(hs(5, 2.0, 0.0, 1.0)).p_s ==
          doctest::Approx(8.0 / 3.0).epsilon(1e-15));

    ProblemParams wh{.N = 5, .p = 2.0, .mu = 0.0, .s = 0.0, .sigma = 4.0,
                     .variant = Variant::WeightedHartree};
    const auto e = critical_exponents(wh);
    REQUIRE(e.p_s_sigma.has_value());
    CHECK(*e.p_s_sigma == doctest::Approx(2.0).epsilon(1e-15)); // endpoint: reduces to Hartree
    CHECK_FALSE(critical_exponents(hs(5, 2.0)).p_s_sigma.has_value());
}

TEST_CASE("decay_roots: mu = 0 gives the exact endpoints")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dimN(2, 12);
    std::uniform_real_distribution<double> un(0.05, 0.95);
    for (int k = 0; k < 50; ++k) {
        const int N = dimN(rng);
        const double p = 1.0 + (N - 1.0) * un(rng);
        const auto [g1, g2] = decay_roots(hs(N, p));
        CHECK(g1 == 0.0);
        CHECK(g2 == (N - p) / (p - 1.0));
    }
}

TEST_CASE("decay_roots: p = 2 agrees with the quadratic closed form")
{
    for (double mu : {0.1, 0.5, 1.0, 1.7, 2.0, 2.2}) {
        const auto [g1, g2] = decay_roots(hs(5, 2.0, mu), 1e-14);
        const auto [e1, e2] = oracles::quadratic_roots(5.0, mu);
        CHECK(g1 == doctest::Approx(e1).epsilon(1e-12));
        CHECK(g2 == doctest::Approx(e2).epsilon(1e-12));
    }
    const auto [g1, g2] = decay_roots(hs(5, 2.0, 1.0));
    CHECK(g1 == doctest::Approx(0.3819660112501051).epsilon(1e-12));
    CHECK(g2 == doctest::Approx(2.618033988749895).epsilon(1e-12));
}

TEST_CASE("decay_roots: degenerate limit mu -> mu_bar")
{
    const double mu = 2.25 * (1.0 - 1e-10);
    const auto [g1, g2] = decay_roots(hs(5, 2.0, mu));
    CHECK(std::abs(g1 - 1.5) <= 1e-4);
    CHECK(std::abs(g2 - 1.5) <= 1e-4);
    CHECK_THROWS_AS(decay_roots(hs(5, 2.0, 2.25)), ValidationError);
    CHECK_THROWS_AS(decay_roots(hs(5, 2.0, 3.0)), ValidationError);
}

TEST_CASE("decay_roots: ordering chain and residual on random instances")
{
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> dimN(2, 12);
    std::uniform_real_distribution<double> un(0.0, 1.0);
    const double tol = 1e-12;
    for (int k = 0; k < 1000; ++k) {
        const int N = dimN(rng);
        const double p = 1.0 + (N - 1.0) * (0.02 + 0.95 * un(rng));
        const double mu_bar = std::pow((N - p) / p, p);
        const double mu = k % 10 == 0 ? 0.0 : 0.999 * mu_bar * un(rng);
        const auto prm = hs(N, p, mu);
        const auto [g1, g2] = decay_roots(prm, tol);
        const double mid = (N - p) / p;
        const double hi = (N - p) / (p - 1.0);
        CHECK(g1 >= 0.0);
        CHECK(g1 < mid);
        CHECK(g2 > mid);
        CHECK(g2 <= hi);
        if (mu == 0.0) {
            CHECK(g2 == hi);
        } else {
            CHECK(g2 < hi);
            CHECK(std::abs(decay_root_residual(prm, g1)) <= tol * mu_bar);
            CHECK(std::abs(decay_root_residual(prm, g2)) <= tol * mu_bar);
        }
    }
}

TEST_CASE("decay_roots: monotone in mu")
{
    for (const auto& [N, p] : {std::pair<int, double>{5, 2.0}, {7, 3.2}, {4, 1.4}}) {
        const double mu_bar = std::pow((N - p) / p, p);
        double prev1 = -1.0, prev2 = 1e300;
        for (int k = 0; k <= 20; ++k) {
            const double mu = mu_bar * k / 21.0;
            const auto [g1, g2] = decay_roots(hs(N, p, mu));
            CHECK(g1 > prev1);
            CHECK(g2 < prev2);
            prev1 = g1;
            prev2 = g2;
        }
    }
}

TEST_CASE("ProblemParams validation names the violated constraint")
{
    CHECK_THROWS_AS(hs(5, 5.0).validate(), ValidationError);
    CHECK_THROWS_AS(hs(5, 2.0, 2.25).validate(), ValidationError);
    CHECK_THROWS_AS(hs(5, 2.0, 0.0, 2.5).validate(), ValidationError); // s >= p

    ProblemParams hartree{.N = 5, .p = 2.0, .mu = 1.0, .variant = Variant::Hartree};
    CHECK_NOTHROW(hartree.validate());
    hartree.p = 2.6; // violates p < N/2
    CHECK_THROWS_AS(hartree.validate(), ValidationError);

    ProblemParams wh{.N = 5, .p = 2.0, .mu = 0.0, .s = 0.5, .sigma = 3.0,
                     .variant = Variant::WeightedHartree};
    CHECK_NOTHROW(wh.validate());
    wh.sigma = 5.5; // sigma < N violated
    CHECK_THROWS_AS(wh.validate(), ValidationError);
    wh.sigma = 4.0; // sigma + s > 2p
    CHECK_THROWS_AS(wh.validate(), ValidationError);
}

TEST_CASE("variant helpers")
{
    ProblemParams hartree{.N = 5, .p = 2.0, .mu = 1.0, .variant = Variant::Hartree};
    CHECK(convolution_exponent(hartree) == 4.0);
    CHECK(convolution_power(hartree) == 2.0);
    CHECK(pairing_degree(hartree) == 4.0);
    CHECK(pairing_degree(hs(5, 2.0)) == doctest::Approx(10.0 / 3.0));
    CHECK_THROWS_AS(convolution_exponent(hs(5, 2.0)), ValidationError);
    CHECK(variant_from_string("hartree") == Variant::Hartree);
    CHECK(variant_from_string(to_string(Variant::WeightedHartree)) == Variant::WeightedHartree);
    CHECK_FALSE(variant_from_string("nope").has_value());
}

#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "phardy/errors.hpp"
#include "phardy/radial.hpp"

using namespace phardy;

TEST_CASE("geometric grid invariants")
{
    const auto g = RadialGrid::geometric(1e-3, 1e3, 128);
    CHECK(g->size() == 128);
    CHECK(g->r_min() == 1e-3);
    CHECK(g->r_max() == 1e3);
    CHECK(g->log_uniform());
    for (int i = 0; i + 1 < g->size(); ++i) CHECK(g->node(i) < g->node(i + 1));
    CHECK_THROWS_AS(RadialGrid::geometric(1e-3, 1e3, 8), ValidationError);
    CHECK_THROWS_AS(RadialGrid::geometric(-1.0, 1e3, 64), ValidationError);
    CHECK_THROWS_AS(RadialGrid::geometric(2.0, 1.0, 64), ValidationError);
}

TEST_CASE("profile validation and interpolation contract")
{
    const auto g = RadialGrid::geometric(0.1, 10.0, 33);
    auto u = RadialProfile::from_function(g, [](double r) { return std::pow(r, -1.3); });
    // log-log linear interpolation reproduces power laws exactly between nodes
    const double r = std::sqrt(g->node(4) * g->node(5));
    CHECK(u(r) == doctest::Approx(std::pow(r, -1.3)).epsilon(1e-13));
    CHECK_THROWS_AS(u(100.0), std::out_of_range);
    CHECK(u.eval_clamped(100.0) == u.value(32));

    std::vector<double> bad(33, 1.0);
    bad[5] = -0.5;
    CHECK_THROWS_AS(RadialProfile(g, bad), ValidationError);
    bad[5] = std::nan("");
    CHECK_THROWS_AS(RadialProfile(g, bad), ValidationError);
}

TEST_CASE("derivative: exact on power laws, zero on constants")
{
    const auto g = RadialGrid::geometric(1e-2, 1e2, 200);
    const double gamma = 2.4;
    const auto u = RadialProfile::from_function(g, [&](double r) { return std::pow(r, -gamma); });
    const RadialSamples d = derivative(u);
    for (int i = 0; i < g->size(); ++i) {
        const double exact = -gamma * std::pow(g->node(i), -gamma - 1.0);
        CHECK(d.values[i] == doctest::Approx(exact).epsilon(1e-10));
    }
    const auto c = RadialProfile::constant(g, 3.5);
    for (double v : derivative(c).values) CHECK(v == 0.0);
}

TEST_CASE("derivative: e^{-r} against the analytic derivative")
{
    const auto g = RadialGrid::geometric(0.1, 10.0, 512);
    const auto u = RadialProfile::from_function(g, [](double r) { return std::exp(-r); });
    const RadialSamples d = derivative(u);
    double worst = 0.0;
    for (int i = 1; i + 1 < g->size(); ++i) {
        const double exact = -std::exp(-g->node(i));
        worst = std::max(worst, std::abs(d.values[i] - exact) / std::abs(exact));
    }
    CHECK(worst <= 1e-3);
}

TEST_CASE("integral_weighted: exact on power laws")
{
    const int N = 5;
    const auto g = RadialGrid::geometric(1e-3, 1e3, 256);
    const double a = 1.7, q = 2.3, w = 0.9;
    const auto u = RadialProfile::from_function(g, [&](double r) { return std::pow(r, -a); });
    const double e = N - w - a * q;
    const double exact = oracles::sphere_area(N) *
                         (std::pow(g->r_max(), e) - std::pow(g->r_min(), e)) / e;
    const auto I = integral_weighted(u, N, q, w);
    CHECK(I.value == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("integral_weighted: zero profile, shell volume, homogeneity")
{
    const int N = 3;
    const auto g = RadialGrid::geometric(1.0, 2.0, 64);
    CHECK(integral_weighted(RadialProfile::constant(g, 0.0), N, 1.0, 0.0).value == 0.0);

    // int over the shell 1 <= |x| <= 2 of 1 dx = (4 pi / 3)(8 - 1)
    const auto one = RadialProfile::constant(g, 1.0);
    CHECK(integral_weighted(one, N, 1.0, 0.0).value ==
          doctest::Approx(28.0 * M_PI / 3.0).epsilon(1e-12));

    const auto g2 = RadialGrid::geometric(1e-2, 1e2, 128);
    const auto u = RadialProfile::from_function(g2, [](double r) { return std::exp(-r) + 0.1; });
    const double q = 1.8, c = 2.31;
    std::vector<double> scaled = u.values();
    for (double& x : scaled) x *= c;
    const double base = integral_weighted(u, N, q, 0.5).value;
    const double lifted = integral_weighted(u.with_values(scaled), N, q, 0.5).value;
    CHECK(lifted == doctest::Approx(std::pow(c, q) * base).epsilon(1e-12));
}

TEST_CASE("integral_weighted: second-order refinement on a smooth integrand")
{
    const int N = 4;
    const auto f = [](double r) { return std::exp(-0.5 * (std::log(r) - 0.3) * (std::log(r) - 0.3)); };
    const double exact = oracles::sphere_area(N) *
                         oracles::integrate_log([&](double r) { return f(r) * std::pow(r, 3.0); },
                                                1e-2, 1e2, 1e-14);
    double err_coarse, err_fine;
    {
        const auto g = RadialGrid::geometric(1e-2, 1e2, 257);
        err_coarse = std::abs(
            integral_weighted(RadialProfile::from_function(g, f), N, 1.0, 0.0).value - exact);
    }
    {
        const auto g = RadialGrid::geometric(1e-2, 1e2, 513);
        err_fine = std::abs(
            integral_weighted(RadialProfile::from_function(g, f), N, 1.0, 0.0).value - exact);
    }
    CHECK(err_coarse / err_fine >= 3.5);
}

TEST_CASE("integral_weighted: head/tail convergence flags")
{
    const int N = 3;
    const auto g = RadialGrid::geometric(1e-3, 1e3, 128);
    // u ~ r^-2 with q = 2, w = 0: tail exponent q*gamma + w - N = 1 > 0 converges,
    // head exponent test fails (2*2 - 3 > 0 means divergence at the origin)
    const auto u = RadialProfile::from_function(g, [](double r) { return std::pow(r, -2.0); });
    const auto I = integral_weighted(u, N, 2.0, 0.0);
    CHECK(I.tail_converged);
    CHECK_FALSE(I.head_converged);
    CHECK(I.tail_estimate > 0.0);

    // fast-decaying profile: both ends converge and the tail estimate is tiny
    const auto v = RadialProfile::from_function(g, [](double r) { return std::exp(-r); });
    const auto J = integral_weighted(v, N, 1.0, 0.0);
    CHECK(J.converged());
}

TEST_CASE("lp_gradient_norm: power law window and constants")
{
    const int N = 5;
    const double p = 2.0;
    const auto g = RadialGrid::geometric(1e-2, 1e2, 512);
    const double gamma = 1.2;
    const auto u = RadialProfile::from_function(g, [&](double r) { return std::pow(r, -gamma); });
    const double e = N - p * (gamma + 1.0);
    const double exact = oracles::sphere_area(N) * std::pow(gamma, p) *
                         (std::pow(1e2, e) - std::pow(1e-2, e)) / e;
    CHECK(lp_gradient_norm(u, N, p).value == doctest::Approx(exact).epsilon(1e-6));
    CHECK(lp_gradient_norm(RadialProfile::constant(g, 2.0), N, p).value == 0.0);
}

TEST_CASE("lp_gradient_norm: Aubin-Talenti bubble against dense quadrature")
{
    const int N = 5;
    const double p = 2.0;
    const auto g = RadialGrid::geometric(1e-3, 1e3, 2048);
    const auto u =
        RadialProfile::from_function(g, [](double r) { return std::pow(1.0 + r * r, -1.5); });
    const double exact = oracles::sphere_area(N) *
                         oracles::integrate_log(
                             [](double r) {
                                 const double du = -3.0 * r * std::pow(1.0 + r * r, -2.5);
                                 return du * du * std::pow(r, 4.0);
                             },
                             1e-3, 1e3, 1e-13);
    CHECK(lp_gradient_norm(u, N, p).value == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("annulus_norm")
{
    const int N = 3;
    const auto g = RadialGrid::geometric(0.5, 4.0, 128);
    const auto zero = RadialProfile::constant(g, 0.0);
    CHECK(annulus_norm(zero, N, 2.0, 1.0, 2.0) == 0.0);

    const auto one = RadialProfile::constant(g, 1.0);
    CHECK(annulus_norm(one, N, 1.0, 1.0, 2.0) ==
          doctest::Approx(28.0 * M_PI / 3.0).epsilon(1e-12));

    const double gamma = 0.8, q = 2.5;
    const auto u = RadialProfile::from_function(g, [&](double r) { return std::pow(r, -gamma); });
    const double e = N - q * gamma;
    const double exact = std::pow(
        oracles::sphere_area(N) * (std::pow(2.0, e) - std::pow(1.0, e)) / e, 1.0 / q);
    CHECK(annulus_norm(u, N, q, 1.0, 2.0) == doctest::Approx(exact).epsilon(1e-8));

    CHECK_THROWS_AS(annulus_norm(one, N, 1.0, 0.1, 2.0), std::out_of_range);
    CHECK_THROWS_AS(annulus_norm(one, N, 1.0, 2.0, 8.0), std::out_of_range);
}

TEST_CASE("profile CSV round-trip and rejection of malformed input")
{
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "phardy_radial_test";
    fs::create_directories(dir);
    const std::string path = (dir / "profile.csv").string();

    const auto g = RadialGrid::geometric(1e-2, 1e2, 64);
    const auto u = RadialProfile::from_function(g, [](double r) { return 1.0 / (1.0 + r); });
    write_profile_csv(path, u, 5, 2.0);
    const ProfileFile back = read_profile_csv(path);
    CHECK(back.N == 5);
    CHECK(back.p == 2.0);
    REQUIRE(back.profile.size() == u.size());
    for (int i = 0; i < u.size(); ++i) {
        CHECK(back.profile.grid().node(i) == u.grid().node(i)); // %.17g round-trips exactly
        CHECK(back.profile.value(i) == u.value(i));
    }

    const auto write_lines = [&](const std::string& body) {
        const std::string p2 = (dir / "bad.csv").string();
        std::ofstream out(p2);
        out << body;
        out.close();
        return p2;
    };
    CHECK_THROWS_AS(read_profile_csv(write_lines("# N=5 p=2\nr,u\n1.0,1.0\n0.5,1.0\n")),
                    ValidationError); // nonmonotone r
    CHECK_THROWS_AS(read_profile_csv(write_lines("# N=5 p=2\nr,u\n1.0,-1.0\n")),
                    ValidationError); // negative u
    CHECK_THROWS_AS(read_profile_csv(write_lines("# N=5 p=2\nr,u\n1.0,nan\n")),
                    ValidationError); // NaN
    CHECK_THROWS_AS(read_profile_csv(write_lines("r,u\n1.0,1.0\n")), ValidationError);
    fs::remove_all(dir);
}

TEST_CASE("fit_loglog recovers slopes with stderr")
{
    const auto g = RadialGrid::geometric(1e-2, 1e2, 100);
    std::vector<double> v(100);
    for (int i = 0; i < 100; ++i) v[i] = 2.0 * std::pow(g->node(i), -1.5);
    const LogLogFit fit = fit_loglog(*g, v, 10, 90);
    CHECK(fit.slope == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(fit.stderr_slope <= 1e-10);
}

#include "phardy/model.hpp"

#include <cmath>
#include <sstream>
#include <tuple>

#include "phardy/errors.hpp"

namespace phardy {

std::string to_string(Variant v)
{
    switch (v) {
        case Variant::Hartree: return "hartree";
        case Variant::HardySobolev: return "hardy_sobolev";
        case Variant::WeightedHartree: return "weighted_hartree";
        case Variant::GeneralV: return "general_v";
    }
    return "?";
}

std::optional<Variant> variant_from_string(const std::string& name)
{
    if (name == "hartree") return Variant::Hartree;
    if (name == "hardy_sobolev") return Variant::HardySobolev;
    if (name == "weighted_hartree") return Variant::WeightedHartree;
    if (name == "general_v") return Variant::GeneralV;
    return std::nullopt;
}

namespace {

[[noreturn]] void fail(const std::string& msg)
{
    throw ValidationError(msg);
}

} // namespace

void ProblemParams::validate() const
{
    if (N < 2) fail("N must be an integer >= 2, got N=" + std::to_string(N));
    if (!(p > 1.0 && p < static_cast<double>(N)))
        fail("p must satisfy 1 < p < N, got p=" + std::to_string(p) +
             " with N=" + std::to_string(N));
    const double mu_bar = std::pow((N - p) / p, p);
    if (!(mu >= 0.0))
        fail("mu must be >= 0, got mu=" + std::to_string(mu));
    if (!(mu < mu_bar))
        fail("mu must satisfy mu < mu_bar = ((N-p)/p)^p = " + std::to_string(mu_bar) +
             ", got mu=" + std::to_string(mu));
    switch (variant) {
        case Variant::Hartree:
            if (N < 3) fail("hartree variant requires N >= 3");
            if (!(p < N / 2.0)) fail("hartree variant requires 1 < p < N/2");
            if (s != 0.0) fail("hartree variant requires s = 0");
            if (sigma != 0.0 && sigma != 2.0 * p)
                fail("hartree variant fixes sigma = 2p; leave sigma at 0 or 2p");
            break;
        case Variant::HardySobolev:
            if (!(s >= 0.0 && s < p)) fail("hardy_sobolev variant requires 0 <= s < p");
            break;
        case Variant::WeightedHartree:
            if (!(s >= 0.0 && s < p)) fail("weighted_hartree variant requires 0 <= s < p");
            if (!(sigma > s && sigma < N)) fail("weighted_hartree variant requires s < sigma < N");
            if (!(sigma + s > 0.0 && sigma + s <= 2.0 * p))
                fail("weighted_hartree variant requires 0 < sigma + s <= 2p");
            break;
        case Variant::GeneralV:
            if (!(s >= 0.0 && s < p)) fail("general_v variant requires 0 <= s < p");
            break;
    }
}

double hardy_best_constant(const ProblemParams& params)
{
    if (!(params.p > 1.0 && params.p < static_cast<double>(params.N)))
        fail("hardy_best_constant requires 1 < p < N");
    return std::pow((params.N - params.p) / params.p, params.p);
}

CriticalExponents critical_exponents(const ProblemParams& params)
{
    params.validate();
    const double N = params.N;
    const double p = params.p;
    CriticalExponents e;
    e.p_star = N * p / (N - p);
    e.p_s = p * (N - params.s) / (N - p);
    if (params.variant == Variant::WeightedHartree)
        e.p_s_sigma = (2.0 * N - params.sigma - params.s) * p / (2.0 * (N - p));
    return e;
}

double decay_root_residual(const ProblemParams& params, double gamma)
{
    const double N = params.N;
    const double p = params.p;
    if (gamma == 0.0) return params.mu;
    return (p - 1.0) * std::pow(gamma, p) - (N - p) * std::pow(gamma, p - 1.0) + params.mu;
}

std::pair<double, double> decay_roots(const ProblemParams& params, double tol)
{
    const double N = params.N;
    const double p = params.p;
    if (!(p > 1.0 && p < N)) fail("decay_roots requires 1 < p < N");
    if (!(tol > 0.0)) fail("decay_roots requires tol > 0");
    const double mu_bar = std::pow((N - p) / p, p);
    if (!(params.mu >= 0.0 && params.mu < mu_bar))
        throw ValidationError("decay_roots: root brackets collapse for mu >= mu_bar (mu=" +
                              std::to_string(params.mu) + ", mu_bar=" + std::to_string(mu_bar) + ")");

    const double g_mid = (N - p) / p;
    const double g_hi = (N - p) / (p - 1.0);
    if (params.mu == 0.0) return {0.0, g_hi};

    // h(g) = (p-1)g^p - (N-p)g^(p-1) is strictly decreasing on [0, g_mid] and
    // strictly increasing on [g_mid, g_hi], with h(0) = h(g_hi) = 0 and
    // h(g_mid) = -mu_bar, so each bracket holds exactly one root of h + mu.
    const auto h_plus_mu = [&](double g) { return decay_root_residual(params, g); };
    const double target = tol * mu_bar;
    const int max_iter = 200;

    const auto bisect = [&](double lo, double hi) {
        // residual has opposite signs at lo (>=0 resp. <0) per bracket shape
        double flo = h_plus_mu(lo);
        for (int it = 0; it < max_iter; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = h_plus_mu(mid);
            if (std::abs(fm) <= target && (hi - lo) <= 1e-14 * g_hi + 1e-300) return mid;
            if ((fm > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        const double mid = 0.5 * (lo + hi);
        if (std::abs(h_plus_mu(mid)) > target)
            throw std::runtime_error("decay_roots: bisection did not reach tolerance");
        return mid;
    };

    const double gamma1 = bisect(0.0, g_mid);
    const double gamma2 = bisect(g_mid, g_hi);
    return {gamma1, gamma2};
}

Exponents derive_exponents(const ProblemParams& params, double root_tol)
{
    params.validate();
    Exponents e;
    e.mu_bar = hardy_best_constant(params);
    const CriticalExponents c = critical_exponents(params);
    e.p_star = c.p_star;
    e.p_s = c.p_s;
    e.p_s_sigma = c.p_s_sigma;
    std::tie(e.gamma1, e.gamma2) = decay_roots(params, root_tol);
    return e;
}

double convolution_exponent(const ProblemParams& params)
{
    switch (params.variant) {
        case Variant::Hartree: return 2.0 * params.p;
        case Variant::WeightedHartree: return params.sigma;
        default:
            fail("convolution_exponent: variant " + to_string(params.variant) +
                 " has no convolution kernel");
    }
}

double convolution_power(const ProblemParams& params)
{
    switch (params.variant) {
        case Variant::Hartree: return params.p;
        case Variant::WeightedHartree: {
            const double N = params.N;
            return (2.0 * N - params.sigma - params.s) * params.p / (2.0 * (N - params.p));
        }
        default:
            fail("convolution_power: variant " + to_string(params.variant) +
                 " has no convolution kernel");
    }
}

double pairing_degree(const ProblemParams& params)
{
    switch (params.variant) {
        case Variant::Hartree: return 2.0 * params.p;
        case Variant::WeightedHartree: return 2.0 * convolution_power(params);
        case Variant::HardySobolev: return critical_exponents(params).p_s;
        case Variant::GeneralV: return params.p;
    }
    return params.p;
}

} // namespace phardy

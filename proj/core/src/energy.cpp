#include "phardy/energy.hpp"

#include <algorithm>
#include <cmath>

#include "phardy/errors.hpp"

namespace phardy {

namespace {

bool is_zero_profile(const RadialProfile& u)
{
    for (double x : u.values())
        if (x > 0.0) return false;
    return true;
}

// int f(r) r^{N-1-s} dr over the grid via the power-law segment rule,
// f given by node values.
double radial_integral(const RadialGrid& g, const std::vector<double>& f, int N, double s)
{
    std::vector<double> m(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        m[i] = f[i] * std::pow(g.node(static_cast<int>(i)), N - 1.0 - s);
    return integrate_samples(g, m, g.r_min(), g.r_max());
}

// The variant's potential profile V with RHS = V(x) |x|^-s u^{p-1}.
RadialProfile variant_potential(const RadialProfile& u, const ProblemParams& params,
                                KernelStore& kernels, const RadialProfile* general_v)
{
    switch (params.variant) {
        case Variant::Hartree:
        case Variant::WeightedHartree:
            return hartree_potential(u, params, kernels);
        case Variant::HardySobolev: {
            const double q = critical_exponents(params).p_s - params.p;
            std::vector<double> v(u.size());
            for (int i = 0; i < u.size(); ++i) v[i] = std::pow(u.value(i), q);
            return u.with_values(std::move(v));
        }
        case Variant::GeneralV:
            if (!general_v)
                throw ValidationError("general_v variant requires a supplied V profile");
            if (general_v->grid().fingerprint() != u.grid().fingerprint())
                throw ValidationError("supplied V profile lives on a different grid");
            return *general_v;
    }
    throw ValidationError("unknown variant");
}

} // namespace

double pairing_integral(const RadialProfile& u, const ProblemParams& params,
                        KernelStore& kernels, const RadialProfile* general_v)
{
    const RadialGrid& g = u.grid();
    const int N = params.N;
    const double SN = sphere_area(N);
    switch (params.variant) {
        case Variant::Hartree: {
            const RadialProfile V1 = hartree_potential(u, params, kernels);
            std::vector<double> f(u.size());
            for (int i = 0; i < u.size(); ++i)
                f[i] = V1.value(i) * std::pow(u.value(i), params.p);
            return SN * radial_integral(g, f, N, 0.0);
        }
        case Variant::WeightedHartree: {
            const RadialProfile K = hartree_potential(u, params, kernels);
            const double q = convolution_power(params);
            std::vector<double> f(u.size());
            for (int i = 0; i < u.size(); ++i)
                f[i] = K.value(i) * std::pow(u.value(i), q);
            return SN * radial_integral(g, f, N, params.s);
        }
        case Variant::HardySobolev: {
            const double ps = critical_exponents(params).p_s;
            return integral_weighted(u, N, ps, params.s).value;
        }
        case Variant::GeneralV: {
            const RadialProfile V = variant_potential(u, params, kernels, general_v);
            std::vector<double> f(u.size());
            for (int i = 0; i < u.size(); ++i)
                f[i] = V.value(i) * std::pow(u.value(i), params.p);
            return SN * radial_integral(g, f, N, params.s);
        }
    }
    throw ValidationError("unknown variant");
}

EnergyBreakdown rayleigh(const RadialProfile& u, const ProblemParams& params,
                         KernelStore& kernels, const RadialProfile* general_v)
{
    params.validate();
    if (is_zero_profile(u)) throw ValidationError("rayleigh: profile is identically zero");

    EnergyBreakdown e;
    e.grad_term = lp_gradient_norm(u, params.N, params.p).value;
    e.hardy_term = params.mu * integral_weighted(u, params.N, params.p, params.p).value;
    e.numerator = e.grad_term - e.hardy_term;
    const double B = pairing_integral(u, params, kernels, general_v);
    e.pairing_norm = std::pow(B, 1.0 / pairing_degree(params));
    e.quotient = std::pow(e.numerator, 1.0 / params.p) / e.pairing_norm;
    return e;
}

namespace {

struct Hat {
    double xc;     // center, in x = log r
    double half;   // half width in x
};

std::vector<Hat> hat_family(const RadialGrid& g, int count)
{
    // hats span [10 r_min, r_max/10], centers node-aligned
    const double x_lo = g.log_node(0) + std::log(10.0);
    const double x_hi = g.log_node(g.size() - 1) - std::log(10.0);
    if (!(x_hi > x_lo)) throw ValidationError("grid too narrow for the test-bump family");
    std::vector<Hat> hats(count);
    const double spacing = (x_hi - x_lo) / (count + 1);
    for (int k = 0; k < count; ++k) {
        double xc = x_lo + spacing * (k + 1);
        // snap to the nearest node so the hat kink sits on a node
        const int ic = std::clamp(static_cast<int>(std::lround((xc - g.log_node(0)) / g.log_step())),
                                  1, g.size() - 2);
        xc = g.log_node(ic);
        double half = spacing;
        half = std::min({half, xc - g.log_node(0), g.log_node(g.size() - 1) - xc});
        hats[k] = Hat{xc, half};
    }
    return hats;
}

} // namespace

double el_residual(const RadialProfile& u, const ProblemParams& params, KernelStore& kernels,
                   int test_bumps, const RadialProfile* general_v)
{
    params.validate();
    if (test_bumps < 1) throw ValidationError("el_residual requires test_bumps >= 1");
    const RadialGrid& g = u.grid();
    const int N = params.N;
    const double p = params.p;
    const double SN = sphere_area(N);

    const RadialProfile V = variant_potential(u, params, kernels, general_v);
    const RadialSamples du = derivative(u);
    const int M = g.size();

    // flux F = |u'|^{p-2} u' and the two zero-order densities
    std::vector<double> flux(M), hardy_den(M), rhs_den(M);
    for (int i = 0; i < M; ++i) {
        const double d = du.values[i];
        flux[i] = std::pow(std::abs(d), p - 2.0) * d;
        const double up1 = std::pow(u.value(i), p - 1.0);
        hardy_den[i] = up1 * std::pow(g.node(i), N - 1.0 - p);
        rhs_den[i] = V.value(i) * up1 * std::pow(g.node(i), N - 1.0 - params.s);
    }

    const double grad_pp = lp_gradient_norm(u, N, p).value;
    const double hardy = integral_weighted(u, N, p, p).value;
    const double numerator = grad_pp - params.mu * hardy;
    const double B = pairing_integral(u, params, kernels, general_v);
    if (!(B > 0.0)) throw ValidationError("el_residual: pairing integral vanishes");
    const double multiplier = numerator / B;

    const auto a_with_hat = [&](const Hat& hat) {
        // psi' = +-1/(half * r) on the flanks; integrate each flank separately
        const double ra = std::exp(hat.xc - hat.half);
        const double rc = std::exp(hat.xc);
        const double rb = std::exp(hat.xc + hat.half);
        std::vector<double> m(M);
        for (int i = 0; i < M; ++i)
            m[i] = flux[i] * std::pow(g.node(i), N - 2.0) / hat.half;
        const double left = integrate_signed(g, m, ra, rc);
        const double right = integrate_signed(g, m, rc, rb);
        return SN * (left - right);
    };
    const auto zero_order = [&](const std::vector<double>& den, const Hat& hat) {
        const double ra = std::exp(hat.xc - hat.half);
        const double rc = std::exp(hat.xc);
        const double rb = std::exp(hat.xc + hat.half);
        std::vector<double> m(M);
        for (int i = 0; i < M; ++i) {
            const double psi = std::max(0.0, 1.0 - std::abs(g.log_node(i) - hat.xc) / hat.half);
            m[i] = den[i] * psi;
        }
        return SN * (integrate_signed(g, m, ra, rc) + integrate_signed(g, m, rc, rb));
    };
    const auto grad_psi_p = [&](const Hat& hat) {
        // ||grad psi||_p^p = |S| / half^p * int r^{N-1-p} dr over the support
        const double ra = std::exp(hat.xc - hat.half);
        const double rb = std::exp(hat.xc + hat.half);
        const double e = N - p;
        const double I = std::abs(e) < 1e-14 ? std::log(rb / ra)
                                             : (std::pow(rb, e) - std::pow(ra, e)) / e;
        return SN * I / std::pow(hat.half, p);
    };

    double worst = 0.0;
    const double norm_u = std::pow(grad_pp, (p - 1.0) / p);
    for (const Hat& hat : hat_family(g, test_bumps)) {
        const double res = a_with_hat(hat) - params.mu * zero_order(hardy_den, hat) -
                           multiplier * zero_order(rhs_den, hat);
        const double scale = norm_u * std::pow(grad_psi_p(hat), 1.0 / p);
        worst = std::max(worst, std::abs(res) / scale);
    }
    return worst;
}

std::vector<InequalityRow> inequality_suite(const std::vector<RadialProfile>& trials,
                                            const ProblemParams& params, KernelStore& kernels)
{
    params.validate();
    const int N = params.N;
    const double p = params.p;
    const double mu_bar = hardy_best_constant(params);
    const double ps = critical_exponents(params).p_s;
    const bool nonlocal =
        params.variant == Variant::Hartree || params.variant == Variant::WeightedHartree;

    std::vector<InequalityRow> rows;
    std::vector<double> hs_ratios, pairing_ratios;
    for (int t = 0; t < static_cast<int>(trials.size()); ++t) {
        const RadialProfile& u = trials[t];
        const double grad_pp = lp_gradient_norm(u, N, p).value;
        const double hardy = integral_weighted(u, N, p, p).value;

        // (a) Hardy: int u^p/|x|^p <= (1/mu_bar) ||grad u||_p^p
        rows.push_back({t, "hardy", mu_bar * hardy / grad_pp, 1.0,
                        mu_bar * hardy / grad_pp < 1.0});

        // (b) Hardy-Sobolev: (int |x|^-s u^{p_s})^{1/p_s} <= C ||grad u||_p
        const double hs = std::pow(integral_weighted(u, N, ps, params.s).value, 1.0 / ps) /
                          std::pow(grad_pp, 1.0 / p);
        hs_ratios.push_back(hs);
        rows.push_back({t, "hardy_sobolev", hs, 0.0, std::isfinite(hs) && hs > 0.0});

        if (nonlocal) {
            // (c) pairing bound: int V1 u^p <= C ||grad u||_p^{2p} (in the
            // Hartree case), with the ratio exactly scale invariant
            const double q = convolution_power(params);
            const double B = pairing_integral(u, params, kernels);
            const double ratio = B / std::pow(grad_pp, 2.0 * q / p);
            pairing_ratios.push_back(ratio);
            rows.push_back({t, "pairing", ratio, 0.0, std::isfinite(ratio) && ratio > 0.0});

            const double c = 2.718281828459045;
            std::vector<double> scaled(u.size());
            for (int i = 0; i < u.size(); ++i) scaled[i] = c * u.value(i);
            const RadialProfile cu = u.with_values(std::move(scaled));
            const double Bc = pairing_integral(cu, params, kernels);
            const double gradc = lp_gradient_norm(cu, N, p).value;
            const double ratio_c = Bc / std::pow(gradc, 2.0 * q / p);
            const double drift = std::abs(ratio_c - ratio) / ratio;
            rows.push_back({t, "pairing_scaling", drift, 1e-8, drift <= 1e-8});
        }
    }
    // bound columns for the fitted-constant rows: the max over the trial set
    const double hs_max = hs_ratios.empty() ? 0.0 : *std::max_element(hs_ratios.begin(), hs_ratios.end());
    const double pr_max =
        pairing_ratios.empty() ? 0.0 : *std::max_element(pairing_ratios.begin(), pairing_ratios.end());
    for (InequalityRow& r : rows) {
        if (r.inequality == "hardy_sobolev") r.bound = hs_max;
        if (r.inequality == "pairing") r.bound = pr_max;
    }
    return rows;
}

} // namespace phardy

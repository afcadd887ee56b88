#pragma once

#include <optional>
#include <string>

namespace phardy {

/// Which right-hand side the equation instance carries.
enum class Variant {
    Hartree,         ///< (|x|^-2p * u^p) u^(p-1), the doubly critical nonlocal case
    HardySobolev,    ///< |x|^-s u^(p_s - 1), local weighted critical nonlinearity
    WeightedHartree, ///< |x|^-s (|x|^-sigma * u^q) u^(q-1) with q = p_{s,sigma}
    GeneralV,        ///< V(x) |x|^-s u^(p-1) with V supplied externally
};

std::string to_string(Variant v);
std::optional<Variant> variant_from_string(const std::string& name);

/// One equation instance: -Delta_p u - mu u^(p-1)/|x|^p = <variant RHS>.
struct ProblemParams {
    int N = 5;
    double p = 2.0;
    double mu = 0.0;
    double s = 0.0;
    double sigma = 0.0;
    Variant variant = Variant::Hartree;

    /// Throws ValidationError naming the violated constraint.
    void validate() const;
};

/// Derived constants consumed by every numeric module.
struct Exponents {
    double mu_bar = 0.0;  ///< ((N-p)/p)^p, the Hardy best constant
    double p_star = 0.0;  ///< Np/(N-p)
    double p_s = 0.0;     ///< p(N-s)/(N-p)
    std::optional<double> p_s_sigma; ///< (2N-sigma-s)p / (2(N-p)), WeightedHartree only
    double gamma1 = 0.0;  ///< decay rate at the origin
    double gamma2 = 0.0;  ///< decay rate at infinity
};

/// Best constant in the Hardy inequality, ((N-p)/p)^p.
double hardy_best_constant(const ProblemParams& params);

struct CriticalExponents {
    double p_star;
    double p_s;
    std::optional<double> p_s_sigma;
};

CriticalExponents critical_exponents(const ProblemParams& params);

/// Both roots of (p-1) g^p - (N-p) g^(p-1) + mu = 0, bracketed by
/// 0 <= gamma1 < (N-p)/p < gamma2 <= (N-p)/(p-1).  Bisection on the two
/// monotone brackets; mu = 0 returns the exact endpoints.
std::pair<double, double> decay_roots(const ProblemParams& params, double tol = 1e-12);

/// Residual of the root equation at gamma, (p-1) g^p - (N-p) g^(p-1) + mu.
double decay_root_residual(const ProblemParams& params, double gamma);

/// All derived constants for an instance.
Exponents derive_exponents(const ProblemParams& params, double root_tol = 1e-12);

/// Exponent of the Riesz kernel in the variant's convolution (2p or sigma).
double convolution_exponent(const ProblemParams& params);

/// Power of u inside the variant's convolution (p or p_{s,sigma}).
double convolution_power(const ProblemParams& params);

/// Homogeneity degree of the variant's pairing functional
/// (2p Hartree, 2 p_{s,sigma} WeightedHartree, p_s HardySobolev, p GeneralV).
double pairing_degree(const ProblemParams& params);

} // namespace phardy

#pragma once

// Test-side oracles, kept independent of the library's quadrature and kernel
// paths: a plain adaptive Simpson integrator and small closed forms.

#include <cmath>
#include <functional>

namespace oracles {

inline double simpson(const std::function<double(double)>& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double whole, double tol, int depth)
{
    const double c = 0.5 * (a + b);
    const double left = simpson(f, a, c);
    const double right = simpson(f, c, b);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, c, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, c, b, right, 0.5 * tol, depth - 1);
}

/// Dense adaptive 1-D quadrature (Simpson with Richardson), independent of
/// the library's Gauss-Kronrod machinery.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12)
{
    return adaptive_simpson_rec(f, a, b, simpson(f, a, b), tol * std::max(1.0, std::abs(b - a)),
                                48);
}

/// Same, on a logarithmic substitution (for integrands spanning decades).
inline double integrate_log(const std::function<double(double)>& f, double a, double b,
                            double tol = 1e-12)
{
    return integrate([&](double x) { const double r = std::exp(x); return f(r) * r; },
                     std::log(a), std::log(b), tol);
}

/// Roots of g^2 - (N-2)g + mu = 0 (p = 2 closed form).
inline std::pair<double, double> quadratic_roots(double N, double mu)
{
    const double d = std::sqrt((N - 2.0) * (N - 2.0) - 4.0 * mu);
    return {0.5 * ((N - 2.0) - d), 0.5 * ((N - 2.0) + d)};
}

inline double sphere_area(int N)
{
    return 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);
}

} // namespace oracles

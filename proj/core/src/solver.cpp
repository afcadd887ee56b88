#include "phardy/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phardy/energy.hpp"
#include "phardy/errors.hpp"
#include "phardy/verify.hpp"

namespace phardy {

void SolveOptions::validate() const
{
    if (!(energy_tol > 0.0) || !(residual_tol > 0.0))
        throw ValidationError("SolveOptions tolerances must be positive");
    if (!(step0 > 0.0)) throw ValidationError("SolveOptions step0 must be positive");
    if (max_outer < 0 || max_inner < 0)
        throw ValidationError("SolveOptions iteration caps must be nonnegative");
    if (seed == SeedKind::File && !seed_file)
        throw ValidationError("SolveOptions: seed kind File requires seed_file");
}

RadialProfile seed_profile(const ProblemParams& params, const GridPtr& grid, SeedKind kind)
{
    switch (kind) {
        case SeedKind::TwoPowerBlend: {
            const auto [g1, g2] = decay_roots(params);
            return RadialProfile::from_function(grid, [&](double r) {
                const double core = g1 == 0.0 ? 1.0 : std::pow(r, -g1);
                return core * std::pow(1.0 + r, g1 - g2);
            });
        }
        case SeedKind::Gaussianlike:
            return RadialProfile::from_function(grid, [](double r) { return std::exp(-r * r); });
        case SeedKind::File:
            throw ValidationError("seed_profile: File seeds are supplied via SolveOptions");
    }
    throw ValidationError("unknown seed kind");
}

namespace {

// Discrete numerator on the log grid and its exact gradient/Hessian.
// A(u) = |S| [ sum_seg h c_{i+1/2} phi_p(d_i) - mu sum_i w_i u_i^p r_i^{N-p} ]
// with d_i = (u_{i+1}-u_i)/h, c_{i+1/2} = (r_i r_{i+1})^{(N-p)/2} and
// phi_p(s) = (s^2 + eps^2)^{p/2}.
class DiscreteEnergy {
public:
    DiscreteEnergy(const RadialGrid& g, const ProblemParams& params)
        : g_(g), M_(g.size()), h_(g.log_step()), p_(params.p), mu_(params.mu),
          SN_(sphere_area(params.N))
    {
        c_.resize(M_ - 1);
        e_.resize(M_);
        w_.resize(M_);
        const double a = params.N - params.p;
        for (int i = 0; i + 1 < M_; ++i)
            c_[i] = std::pow(g.node(i) * g.node(i + 1), 0.5 * a);
        for (int i = 0; i < M_; ++i) {
            e_[i] = std::pow(g.node(i), a);
            w_[i] = (i == 0 || i == M_ - 1) ? 0.5 * h_ : h_;
        }
    }

    void set_regularization(const std::vector<double>& u)
    {
        double dmax = 0.0;
        for (int i = 0; i + 1 < M_; ++i)
            dmax = std::max(dmax, std::abs(u[i + 1] - u[i]) / h_);
        eps2_ = 1e-24 * dmax * dmax;
    }

    double value(const std::vector<double>& u) const
    {
        double grad = 0.0, hardy = 0.0;
        for (int i = 0; i + 1 < M_; ++i) {
            const double d = (u[i + 1] - u[i]) / h_;
            grad += h_ * c_[i] * std::pow(d * d + eps2_, 0.5 * p_);
        }
        if (mu_ != 0.0)
            for (int i = 0; i < M_; ++i) hardy += w_[i] * std::pow(u[i], p_) * e_[i];
        return SN_ * (grad - mu_ * hardy);
    }

    void gradient(const std::vector<double>& u, std::vector<double>& grad) const
    {
        grad.assign(M_, 0.0);
        for (int i = 0; i + 1 < M_; ++i) {
            const double d = (u[i + 1] - u[i]) / h_;
            const double f = c_[i] * dphi(d);
            grad[i] -= f;
            grad[i + 1] += f;
        }
        if (mu_ != 0.0)
            for (int i = 0; i < M_; ++i)
                grad[i] -= mu_ * p_ * w_[i] * std::pow(u[i], p_ - 1.0) * e_[i];
        for (double& x : grad) x *= SN_;
    }

    // tridiagonal Hessian (diag, upper); symmetric.  The Hardy curvature
    // u^{p-2} blows up at zero values for p < 2; the preconditioner clamps
    // it (the gradient stays exact, only the direction metric is smoothed).
    void hessian(const std::vector<double>& u, std::vector<double>& diag,
                 std::vector<double>& upper) const
    {
        diag.assign(M_, 0.0);
        upper.assign(M_ - 1, 0.0);
        for (int i = 0; i + 1 < M_; ++i) {
            const double d = (u[i + 1] - u[i]) / h_;
            const double f = c_[i] * ddphi(d) / h_;
            diag[i] += f;
            diag[i + 1] += f;
            upper[i] = -f;
        }
        if (mu_ != 0.0) {
            const double umax = *std::max_element(u.begin(), u.end());
            const double floor = 1e-6 * umax;
            for (int i = 0; i < M_; ++i) {
                const double ui = std::max(u[i], floor);
                diag[i] -= mu_ * p_ * (p_ - 1.0) * w_[i] * std::pow(ui, p_ - 2.0) * e_[i];
            }
        }
        for (double& x : diag) x *= SN_;
        for (double& x : upper) x *= SN_;
    }

private:
    double dphi(double s) const { return p_ * s * std::pow(s * s + eps2_, 0.5 * p_ - 1.0); }
    double ddphi(double s) const
    {
        const double q = s * s + eps2_;
        return p_ * std::pow(q, 0.5 * p_ - 2.0) * ((p_ - 1.0) * s * s + eps2_);
    }

    const RadialGrid& g_;
    int M_;
    double h_, p_, mu_, SN_;
    double eps2_ = 0.0;
    std::vector<double> c_, e_, w_;
};

// Frozen pairing B_W(u) = |S| sum_i w_i Theta_i u_i^q r_i^{N-1-s}; the
// projection rescales u to B_W = 1 in closed form.
class FrozenPairing {
public:
    FrozenPairing(const RadialGrid& g, int N, double s, double q) : q_(q)
    {
        const int M = g.size();
        wr_.resize(M);
        const double SN = sphere_area(N);
        for (int i = 0; i < M; ++i) {
            const double w = (i == 0 || i == M - 1) ? 0.5 * g.log_step() : g.log_step();
            wr_[i] = SN * w * std::pow(g.node(i), N - s); // r^{N-1-s} dr = r^{N-s} dx
        }
        theta_.assign(M, 1.0);
    }

    void set_weight(const std::vector<double>& theta) { theta_ = theta; }
    double power() const { return q_; }

    double value(const std::vector<double>& u) const
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            acc += wr_[i] * theta_[i] * std::pow(u[i], q_);
        return acc;
    }

    // scale factor making B_W(c u) = 1
    double projection_scale(const std::vector<double>& u) const
    {
        const double B = value(u);
        if (!(B > 0.0)) throw ValidationError("projection: frozen pairing vanished");
        return std::pow(B, -1.0 / q_);
    }

private:
    double q_;
    std::vector<double> wr_;
    std::vector<double> theta_;
};

void thomas_solve(std::vector<double> diag, const std::vector<double>& off,
                  std::vector<double> rhs, std::vector<double>& x)
{
    const int n = static_cast<int>(diag.size());
    for (int i = 1; i < n; ++i) {
        const double m = off[i - 1] / diag[i - 1];
        diag[i] -= m * off[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    x.assign(n, 0.0);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = (rhs[i] - off[i] * x[i + 1]) / diag[i];
}

struct ClipResult {
    int clipped = 0;
};

// clip negatives to zero, then bridge interior zero runs by log-linear
// interpolation from the surrounding positive nodes
ClipResult clip_and_smooth(std::vector<double>& u)
{
    ClipResult res;
    const int M = static_cast<int>(u.size());
    for (double& x : u)
        if (x < 0.0) {
            x = 0.0;
            ++res.clipped;
        }
    if (res.clipped == 0) return res;
    int i = 0;
    while (i < M) {
        if (u[i] > 0.0) {
            ++i;
            continue;
        }
        int j = i;
        while (j < M && u[j] == 0.0) ++j;
        const int left = i - 1, right = j;
        if (left >= 0 && right < M && u[left] > 0.0 && u[right] > 0.0) {
            const double la = std::log(u[left]), lb = std::log(u[right]);
            for (int k = i; k < j; ++k) {
                const double t = static_cast<double>(k - left) / (right - left);
                u[k] = std::exp((1.0 - t) * la + t * lb);
            }
        }
        i = j;
    }
    return res;
}

} // namespace

std::pair<RadialProfile, SolveReport> solve_ground_state(const ProblemParams& params,
                                                         const GridPtr& grid,
                                                         const SolveOptions& opts,
                                                         KernelStore& kernels,
                                                         const RadialProfile* general_v)
{
    params.validate();
    opts.validate();
    const int M = grid->size();
    const int N = params.N;
    const bool nonlocal =
        params.variant == Variant::Hartree || params.variant == Variant::WeightedHartree;

    RadialProfile u = opts.seed == SeedKind::File ? *opts.seed_file
                                                  : seed_profile(params, grid, opts.seed);
    if (opts.seed == SeedKind::File && u.grid().fingerprint() != grid->fingerprint())
        throw ValidationError("seed profile grid does not match the solve grid");

    DiscreteEnergy energy(*grid, params);
    const double q_frozen = nonlocal ? convolution_power(params)
                                     : (params.variant == Variant::HardySobolev
                                            ? critical_exponents(params).p_s
                                            : params.p);
    FrozenPairing pairing(*grid, N, params.s, q_frozen);
    if (params.variant == Variant::GeneralV) {
        if (!general_v) throw ValidationError("general_v variant requires a supplied V profile");
        pairing.set_weight(general_v->values());
    }

    SolveReport rep;
    std::vector<double> uv = u.values();
    const auto refresh_potential = [&]() {
        if (!nonlocal) return;
        const RadialProfile pot = hartree_potential(RadialProfile(grid, uv), params, kernels);
        pairing.set_weight(pot.values());
    };
    const auto project = [&](std::vector<double>& v) {
        const double c = pairing.projection_scale(v);
        for (double& x : v) x *= c;
    };

    refresh_potential();
    project(uv);

    double tau = 1e-3; // Levenberg damping, adapted across iterations
    double prev_outer_quotient = 0.0;
    bool quotient_settled = false;
    std::vector<double> grad, diag, upper, dir, trial, hd, hu;

    for (int outer = 0; outer < opts.max_outer && !rep.converged; ++outer) {
        rep.outer_iters = outer + 1;
        if (outer > 0) {
            refresh_potential();
            project(uv);
        }
        energy.set_regularization(uv);
        double A = energy.value(uv);

        const std::size_t sweep_hist_start = rep.quotient_history.size();
        bool inner_exhausted = true;
        for (int inner = 0; inner < opts.max_inner; ++inner) {
            energy.gradient(uv, grad);
            energy.hessian(uv, hd, hu);

            // damped Newton direction; fall back to steeper damping whenever
            // the shifted solve is not a descent direction
            bool accepted = false;
            for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
                diag = hd;
                double scale = 0.0;
                for (double x : hd) scale = std::max(scale, std::abs(x));
                for (double& x : diag) x = x + tau * (std::abs(x) + 1e-12 * scale);
                bool solvable = true;
                for (double x : diag)
                    if (!(x > 0.0)) solvable = false;
                double descent = 0.0;
                if (solvable) {
                    thomas_solve(diag, hu, grad, dir);
                    for (int i = 0; i < M; ++i) descent += dir[i] * grad[i];
                }
                if (!solvable || !(descent > 0.0)) {
                    tau = std::min(tau * 8.0, 1e12);
                    continue;
                }
                double step = opts.step0;
                for (int bt = 0; bt < 40; ++bt) {
                    trial = uv;
                    for (int i = 0; i < M; ++i) trial[i] -= step * dir[i];
                    const ClipResult clip = clip_and_smooth(trial);
                    bool feasible = true;
                    double A_try = 0.0;
                    try {
                        project(trial);
                        A_try = energy.value(trial);
                    } catch (const ValidationError&) {
                        feasible = false;
                    }
                    if (feasible && A_try < A) {
                        if (clip.clipped > opts.clip_abort_fraction * M)
                            throw PositivityLossError(
                                "solve_ground_state: clipping touched " +
                                std::to_string(clip.clipped) + " of " + std::to_string(M) +
                                " nodes");
                        rep.clip_events += clip.clipped > 0 ? 1 : 0;
                        uv = trial;
                        A = A_try;
                        accepted = true;
                        tau = std::max(tau * 0.5, 1e-10);
                        break;
                    }
                    step *= 0.5;
                }
                if (!accepted) tau = std::min(tau * 8.0, 1e12);
            }
            if (!accepted) {
                inner_exhausted = false; // stalled, not out of budget
                break;
            }

            ++rep.inner_iters;
            const double quotient = std::pow(std::max(A, 0.0), 1.0 / params.p);
            rep.quotient_history.push_back(quotient);

            // inner stagnation: relative progress over a short lookback
            const int look = 20;
            const std::size_t n = rep.quotient_history.size() - sweep_hist_start;
            if (n > static_cast<std::size_t>(look)) {
                const double before = rep.quotient_history[rep.quotient_history.size() - 1 - look];
                if (std::abs(before - quotient) <= 0.1 * opts.energy_tol * quotient) {
                    inner_exhausted = false;
                    break;
                }
            }
        }

        const double sweep_quotient = std::pow(std::max(A, 0.0), 1.0 / params.p);
        if (outer > 0) {
            quotient_settled = std::abs(sweep_quotient - prev_outer_quotient) <=
                               opts.energy_tol * std::abs(sweep_quotient);
        } else if (!nonlocal) {
            // single-potential variants need no second sweep to compare
            quotient_settled = true;
        }
        prev_outer_quotient = sweep_quotient;

        if (quotient_settled) {
            const RadialProfile cur(grid, uv);
            rep.el_residual = el_residual(cur, params, kernels, opts.el_test_bumps, general_v);
            if (rep.el_residual <= opts.residual_tol) {
                rep.converged = true;
                rep.status = "converged";
            }
        }
        // for frozen-potential-free variants a stalled sweep cannot improve
        if (!nonlocal && !inner_exhausted && quotient_settled && !rep.converged) break;
    }

    RadialProfile out(grid, uv);
    // normalize the true pairing to 1 (the frozen one may be one sweep stale)
    const EnergyBreakdown eb = rayleigh(out, params, kernels, general_v);
    std::vector<double> scaled = out.values();
    for (double& x : scaled) x /= eb.pairing_norm;
    out = out.with_values(std::move(scaled));
    const EnergyBreakdown eb2 = rayleigh(out, params, kernels, general_v);

    rep.final_quotient = eb2.quotient;
    if (rep.quotient_history.empty() || !rep.converged)
        rep.el_residual = el_residual(out, params, kernels, opts.el_test_bumps, general_v);
    if (!rep.converged && rep.status.empty()) rep.status = "nonconvergence: iteration cap reached";

    const FitWindows w = FitWindows::defaults(*grid);
    try {
        rep.fitted_gamma_near = fit_decay_exponent(out, w.near_lo, w.near_hi).gamma;
        rep.fitted_gamma_far = fit_decay_exponent(out, w.far_lo, w.far_hi).gamma;
    } catch (const std::exception&) {
        // partial report: seed-shaped iterates can vanish on a fit window
        rep.fitted_gamma_near = std::numeric_limits<double>::quiet_NaN();
        rep.fitted_gamma_far = std::numeric_limits<double>::quiet_NaN();
    }
    rep.monotone_flag = check_monotone(out).monotone;
    return {std::move(out), std::move(rep)};
}

} // namespace phardy

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phardy/convolution.hpp"
#include "phardy/model.hpp"
#include "phardy/radial.hpp"

namespace phardy {

enum class SeedKind { TwoPowerBlend, Gaussianlike, File };

struct SolveOptions {
    int max_outer = 30;
    int max_inner = 4000;
    double step0 = 1.0;
    double energy_tol = 1e-8;
    double residual_tol = 1e-3;
    SeedKind seed = SeedKind::TwoPowerBlend;
    std::optional<RadialProfile> seed_file;
    int el_test_bumps = 12;
    double clip_abort_fraction = 0.10;

    void validate() const;
};

struct SolveReport {
    std::vector<double> quotient_history; ///< one entry per accepted step
    double final_quotient = 0.0;          ///< estimate of the best constant
    double el_residual = 0.0;
    int outer_iters = 0;
    int inner_iters = 0;
    int clip_events = 0;
    double fitted_gamma_near = 0.0;
    double fitted_gamma_far = 0.0;
    bool monotone_flag = false;
    bool converged = false;
    std::string status;
};

/// Informed seed: r^-gamma1 (1+r)^(gamma1-gamma2) carries the correct power
/// laws at both ends; Gaussianlike exp(-r^2) exists for robustness runs.
RadialProfile seed_profile(const ProblemParams& params, const GridPtr& grid, SeedKind kind);

/// Computes the radial extremal of the constrained minimization for the
/// variant: outer sweeps freeze the nonlocal potential, inner iterations run
/// projected descent on the numerator (direction preconditioned by the
/// tridiagonal Hessian of the discrete energy, step by backtracking halving,
/// projection renormalizes the frozen pairing to 1).  The returned profile is
/// normalized to pairing_norm = 1.
std::pair<RadialProfile, SolveReport> solve_ground_state(const ProblemParams& params,
                                                         const GridPtr& grid,
                                                         const SolveOptions& opts,
                                                         KernelStore& kernels,
                                                         const RadialProfile* general_v = nullptr);

} // namespace phardy

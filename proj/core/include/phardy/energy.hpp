#pragma once

#include <string>
#include <vector>

#include "phardy/convolution.hpp"
#include "phardy/model.hpp"
#include "phardy/radial.hpp"

namespace phardy {

/// The variational quantities of the constrained minimization: numerator
/// ||grad u||_p^p - mu int u^p/|x|^p, the variant's pairing norm ||u||_V, and
/// the degree-zero quotient numerator(u)^{1/p} with u normalized to
/// pairing_norm = 1.
struct EnergyBreakdown {
    double grad_term = 0.0;
    double hardy_term = 0.0;
    double numerator = 0.0;
    double pairing_norm = 0.0;
    double quotient = 0.0;
};

/// Raw pairing integral (before the norm root): int V1 u^p, int |x|^-s K u^q,
/// int |x|^-s u^{p_s}, or int V |x|^-s u^p depending on the variant.
double pairing_integral(const RadialProfile& u, const ProblemParams& params,
                        KernelStore& kernels, const RadialProfile* general_v = nullptr);

EnergyBreakdown rayleigh(const RadialProfile& u, const ProblemParams& params,
                         KernelStore& kernels, const RadialProfile* general_v = nullptr);

/// Weak-form residual of the Euler-Lagrange equation against `test_bumps`
/// log-space hat functions, with the constrained formulation's multiplier
/// divided out; returns max_k |residual_k| / (||grad u||_p^{p-1} ||grad psi_k||_p).
double el_residual(const RadialProfile& u, const ProblemParams& params, KernelStore& kernels,
                   int test_bumps = 12, const RadialProfile* general_v = nullptr);

struct InequalityRow {
    int trial = 0;
    std::string inequality;
    double ratio = 0.0;
    double bound = 0.0;
    bool pass = false;
};

/// Sampled-function checks of the Hardy, Hardy-Sobolev and nonlocal-pairing
/// inequalities on a set of trial profiles.  Violations come back as rows
/// with pass = false; nothing throws.
std::vector<InequalityRow> inequality_suite(const std::vector<RadialProfile>& trials,
                                            const ProblemParams& params, KernelStore& kernels);

} // namespace phardy

#pragma once

#include <cstdint>
#include <functional>

namespace phardy {

/// Monte-Carlo estimate of the N-dimensional Riesz convolution
///   (|x|^-nu * g)(x0) = int_{R^N} g(|y|) |x0 - y|^-nu dy
/// at |x0| = r, for radial g supported in the ball of radius `support`.
///
/// This is a cross-validation oracle, deliberately independent of the
/// sphere-reduced kernel path: it samples y in R^N from a half/half mixture
/// of the uniform density on the support ball and a density ~ |y - x0|^-nu
/// concentrated at the kernel singularity, which keeps the estimator
/// variance finite for every 0 < nu < N.
struct McEstimate {
    double value = 0.0;
    double stderr_value = 0.0;
};

McEstimate mc_riesz_convolve(const std::function<double(double)>& g, double support,
                             double nu, int N, double r, std::int64_t samples,
                             std::uint64_t seed);

} // namespace phardy

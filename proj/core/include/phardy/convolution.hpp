#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "phardy/model.hpp"
#include "phardy/radial.hpp"

namespace phardy {

/// Sphere-averaged Riesz kernel table,
///   K_nu(r, t) = |S^{N-2}| int_0^pi (r^2 + t^2 - 2 r t cos th)^{-nu/2} sin^{N-2}th dth,
/// so that (|x|^-nu * g)(r) = int_0^inf g(t) t^{N-1} K_nu(r, t) dt for radial g.
///
/// Entries within one grid spacing of the diagonal (where the angular
/// integral peaks, and for nu >= N-1 diverges at r = t exactly) store the
/// t^{N-1}-weighted panel average of K over the quadrature panel instead of
/// the point value; near_singular(i, j) marks them.
class AngularKernel {
public:
    double nu() const { return nu_; }
    int dimension() const { return N_; }
    int angular_nodes() const { return angular_nodes_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const RadialGrid& grid() const { return *grid_; }
    int size() const { return M_; }

    double at(int i, int j) const { return table_[static_cast<std::size_t>(i) * M_ + j]; }
    bool near_singular(int i, int j) const { return std::abs(i - j) <= band_; }
    const std::vector<double>& table() const { return table_; }

private:
    friend AngularKernel build_kernel(const GridPtr&, double, int, int);
    friend AngularKernel load_kernel_csv(const std::string&, const GridPtr&);
    AngularKernel() = default;

    GridPtr grid_;
    std::vector<double> table_; // M x M, row major, symmetric
    double nu_ = 0.0;
    int N_ = 0;
    int M_ = 0;
    int band_ = 1;
    int angular_nodes_ = 0;
};

/// Tabulates K_nu on a log-uniform grid.  The angular integral runs in the
/// graded variable th = pi xi^2 on a base mesh of ~angular_nodes points and
/// is then refined adaptively; near-diagonal entries integrate the panel
/// average through a log substitution that resolves the r = t singularity.
AngularKernel build_kernel(const GridPtr& grid, double nu, int N, int angular_nodes = 256);

/// (|x|^-nu * g)(r_i) by the log-trapezoid sum over the kernel table plus
/// extrapolated head/tail corrections.  Throws DivergenceError when the
/// fitted tail exponent beta_0 of g fails beta_0 > N - nu (the convolution
/// is then identically infinite) or when the head mass diverges.
RadialProfile riesz_convolve(const RadialProfile& g, const AngularKernel& kernel);

/// Tail/head admissibility test used by riesz_convolve; exposed for callers
/// that want the diagnosis without the throw.
struct ConvolutionTailCheck {
    bool ok = true;
    std::string reason;
};
ConvolutionTailCheck convolution_tail_check(const RadialProfile& g, double nu, int N);

/// Kernel tables cached per (grid, nu, N, angular_nodes), optionally mirrored
/// to a directory of CSV files.  Lookup is thread-safe; tables are immutable.
class KernelStore {
public:
    explicit KernelStore(std::string cache_dir = "", int angular_nodes = 256);
    std::shared_ptr<const AngularKernel> get(const GridPtr& grid, double nu, int N);
    int angular_nodes() const { return angular_nodes_; }

private:
    std::string cache_dir_;
    int angular_nodes_;
    std::mutex mutex_;
    std::unordered_map<std::string, std::shared_ptr<const AngularKernel>> cache_;
};

/// The variant's nonlocal potential: Hartree |x|^-2p * u^p, WeightedHartree
/// |x|^-sigma * u^{p_{s,sigma}}.
RadialProfile hartree_potential(const RadialProfile& u, const ProblemParams& params,
                                KernelStore& kernels);

/// Reproducible CSV of (i, j, K) triples (upper triangle), with a header
/// recording nu, N, M, angular_nodes and the grid hash.
void save_kernel_csv(const std::string& path, const AngularKernel& kernel);
AngularKernel load_kernel_csv(const std::string& path, const GridPtr& grid);

} // namespace phardy

#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace phardy {

/// Radial mesh, geometric by construction (uniform spacing in log r).
/// Explicit node lists from profile files are accepted as long as they are
/// strictly increasing and positive.
class RadialGrid {
public:
    static std::shared_ptr<const RadialGrid> geometric(double r_min, double r_max, int M);
    static std::shared_ptr<const RadialGrid> from_nodes(std::vector<double> nodes);

    int size() const { return static_cast<int>(nodes_.size()); }
    double r_min() const { return nodes_.front(); }
    double r_max() const { return nodes_.back(); }
    double node(int i) const { return nodes_[i]; }
    double log_node(int i) const { return log_nodes_[i]; }
    const std::vector<double>& nodes() const { return nodes_; }

    bool log_uniform() const { return log_uniform_; }
    /// Log spacing; for non-uniform grids the mean spacing.
    double log_step() const { return h_; }
    /// Index of the last node <= r (clamped to [0, M-2]).
    int segment_of(double r) const;

    /// Hash of the node set, used to key kernel caches.
    std::uint64_t fingerprint() const { return fingerprint_; }

private:
    explicit RadialGrid(std::vector<double> nodes);
    std::vector<double> nodes_;
    std::vector<double> log_nodes_;
    double h_ = 0.0;
    bool log_uniform_ = false;
    std::uint64_t fingerprint_ = 0;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Signed samples on a grid (derivatives and other profile-shaped data).
struct RadialSamples {
    GridPtr grid;
    std::vector<double> values;
};

/// Nonnegative sampled function with the log-log linear interpolation
/// contract: between nodes u follows the power-law segment through the two
/// node values (linear in log r where a node value vanishes).
class RadialProfile {
public:
    RadialProfile(GridPtr grid, std::vector<double> values);
    static RadialProfile from_function(const GridPtr& grid,
                                       const std::function<double(double)>& f);
    static RadialProfile constant(const GridPtr& grid, double c);

    const RadialGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    int size() const { return static_cast<int>(values_.size()); }
    double value(int i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    double max_value() const;

    /// Interpolated value; throws std::out_of_range outside [r_min, r_max].
    double operator()(double r) const;
    /// Interpolated value, clamped to the boundary node values outside the grid.
    double eval_clamped(double r) const;

    RadialProfile with_values(std::vector<double> values) const;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// du/dr at the nodes.  Where the local values are positive the scheme
/// differentiates log u against log r (exact on power-law segments);
/// otherwise it falls back to differences of the values in log r.
/// One-sided at the endpoints.
RadialSamples derivative(const RadialProfile& u);

/// |values|, as a profile.
RadialProfile abs_profile(const RadialSamples& s);

struct WeightedIntegral {
    double value = 0.0;           ///< integral over [r_min, r_max]
    double head_estimate = 0.0;   ///< extrapolated contribution of (0, r_min)
    double tail_estimate = 0.0;   ///< extrapolated contribution of (r_max, inf)
    bool head_converged = true;
    bool tail_converged = true;

    double total() const { return value + head_estimate + tail_estimate; }
    bool converged() const { return head_converged && tail_converged; }
};

/// integral over R^N of u^q |x|^-w, i.e. |S^{N-1}| int u(r)^q r^{N-1-w} dr.
/// The in-window part integrates the interpolation contract exactly
/// segment by segment; boundary contributions are estimated from fitted
/// boundary power laws and reported, with divergence flagged when the
/// head/tail exponent test fails.
WeightedIntegral integral_weighted(const RadialProfile& u, int N, double q, double w);

/// ||grad u||_p^p = integral of |du/dr|^p over R^N.
WeightedIntegral lp_gradient_norm(const RadialProfile& u, int N, double p);

/// ( int_{R_lo <= |x| <= R_hi} u^q dx )^(1/q); range must lie inside the grid.
double annulus_norm(const RadialProfile& u, int N, double q, double R_lo, double R_hi);

/// Integral of the piecewise power-law interpolant of nodal values over
/// [a, b] inside the grid span.  Values may contain zeros (those segments
/// fall back to the trapezoid rule in log r); negative values are rejected.
double integrate_samples(const RadialGrid& grid, std::span<const double> values,
                         double a, double b);

/// Trapezoid rule in log r for signed integrands: int f dr ~ sum w_i f_i r_i.
double integrate_signed(const RadialGrid& grid, std::span<const double> values,
                        double a, double b);

/// Surface measure of the unit sphere in R^N.
double sphere_area(int N);

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    int n = 0;
};

/// Least-squares line through (log r_i, log v_i) for nodes in [i0, i1]
/// with v_i > 0.  Requires at least two positive nodes.
LogLogFit fit_loglog(const RadialGrid& grid, std::span<const double> values,
                     int i0, int i1);

/// Fitted decay exponent near each grid boundary (gamma with v ~ r^-gamma),
/// from the first/last `fraction` of the nodes.  Nodes with v = 0 are
/// skipped; fewer than two positive nodes reads as compact support and
/// reports an effectively infinite decay (head 0, tail +inf).
struct BoundaryDecay {
    double head_gamma = 0.0;
    double tail_gamma = 0.0;
    bool head_defined = false;
    bool tail_defined = false;
};
BoundaryDecay boundary_decay(const RadialProfile& u, double fraction = 0.1);

/// Profile serialization: two-column CSV `r,u` preceded by `# N=<n> p=<p>`.
struct ProfileFile {
    RadialProfile profile;
    int N = 0;
    double p = 0.0;
};
void write_profile_csv(const std::string& path, const RadialProfile& u, int N, double p);
ProfileFile read_profile_csv(const std::string& path);

} // namespace phardy

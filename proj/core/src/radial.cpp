#include "phardy/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "phardy/errors.hpp"

namespace phardy {

namespace {

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t seed = 1469598103934665603ull)
{
    const auto* b = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= b[i];
        h *= 1099511628211ull;
    }
    return h;
}

// (e^(c*dx) - 1)/c with the c -> 0 limit dx.
double growth_factor(double c, double dx)
{
    if (std::abs(c * dx) < 1e-12) return dx * (1.0 + 0.5 * c * dx);
    return std::expm1(c * dx) / c;
}

} // namespace

RadialGrid::RadialGrid(std::vector<double> nodes) : nodes_(std::move(nodes))
{
    const int M = static_cast<int>(nodes_.size());
    if (M < 16) throw ValidationError("RadialGrid requires at least 16 nodes, got " + std::to_string(M));
    if (!(nodes_.front() > 0.0))
        throw ValidationError("RadialGrid nodes must be positive");
    log_nodes_.resize(M);
    for (int i = 0; i < M; ++i) {
        if (!std::isfinite(nodes_[i]) || (i > 0 && !(nodes_[i] > nodes_[i - 1])))
            throw ValidationError("RadialGrid nodes must be finite and strictly increasing (node " +
                                  std::to_string(i) + ")");
        log_nodes_[i] = std::log(nodes_[i]);
    }
    h_ = (log_nodes_.back() - log_nodes_.front()) / (M - 1);
    log_uniform_ = true;
    for (int i = 0; i + 1 < M; ++i) {
        if (std::abs(log_nodes_[i + 1] - log_nodes_[i] - h_) > 1e-9 * h_) {
            log_uniform_ = false;
            break;
        }
    }
    fingerprint_ = fnv1a(nodes_.data(), nodes_.size() * sizeof(double));
}

std::shared_ptr<const RadialGrid> RadialGrid::geometric(double r_min, double r_max, int M)
{
    if (!(r_min > 0.0) || !(r_max > r_min))
        throw ValidationError("RadialGrid::geometric requires 0 < r_min < r_max");
    if (M < 16) throw ValidationError("RadialGrid requires at least 16 nodes");
    std::vector<double> nodes(M);
    const double lo = std::log(r_min);
    const double hi = std::log(r_max);
    for (int i = 0; i < M; ++i)
        nodes[i] = std::exp(lo + (hi - lo) * i / (M - 1));
    nodes.front() = r_min;
    nodes.back() = r_max;
    return std::shared_ptr<const RadialGrid>(new RadialGrid(std::move(nodes)));
}

std::shared_ptr<const RadialGrid> RadialGrid::from_nodes(std::vector<double> nodes)
{
    return std::shared_ptr<const RadialGrid>(new RadialGrid(std::move(nodes)));
}

int RadialGrid::segment_of(double r) const
{
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
    int i = static_cast<int>(it - nodes_.begin()) - 1;
    return std::clamp(i, 0, size() - 2);
}

RadialProfile::RadialProfile(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values))
{
    if (!grid_) throw ValidationError("RadialProfile requires a grid");
    if (static_cast<int>(values_.size()) != grid_->size())
        throw ValidationError("RadialProfile values size does not match grid");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]) || values_[i] < 0.0)
            throw ValidationError("RadialProfile values must be finite and nonnegative (node " +
                                  std::to_string(i) + ")");
    }
}

RadialProfile RadialProfile::from_function(const GridPtr& grid,
                                           const std::function<double(double)>& f)
{
    std::vector<double> v(grid->size());
    for (int i = 0; i < grid->size(); ++i) v[i] = f(grid->node(i));
    return RadialProfile(grid, std::move(v));
}

RadialProfile RadialProfile::constant(const GridPtr& grid, double c)
{
    return RadialProfile(grid, std::vector<double>(grid->size(), c));
}

double RadialProfile::max_value() const
{
    return *std::max_element(values_.begin(), values_.end());
}

namespace {

double interpolate_segment(const RadialGrid& g, const std::vector<double>& v, int i, double r)
{
    const double x = std::log(r);
    const double x0 = g.log_node(i), x1 = g.log_node(i + 1);
    const double t = (x - x0) / (x1 - x0);
    const double a = v[i], b = v[i + 1];
    if (a > 0.0 && b > 0.0)
        return std::exp((1.0 - t) * std::log(a) + t * std::log(b));
    return (1.0 - t) * a + t * b;
}

} // namespace

double RadialProfile::operator()(double r) const
{
    if (!(r >= grid_->r_min() && r <= grid_->r_max()))
        throw std::out_of_range("RadialProfile: r=" + std::to_string(r) + " outside grid [" +
                                std::to_string(grid_->r_min()) + ", " +
                                std::to_string(grid_->r_max()) + "]");
    return interpolate_segment(*grid_, values_, grid_->segment_of(r), r);
}

double RadialProfile::eval_clamped(double r) const
{
    if (r <= grid_->r_min()) return values_.front();
    if (r >= grid_->r_max()) return values_.back();
    return interpolate_segment(*grid_, values_, grid_->segment_of(r), r);
}

RadialProfile RadialProfile::with_values(std::vector<double> values) const
{
    return RadialProfile(grid_, std::move(values));
}

RadialSamples derivative(const RadialProfile& u)
{
    const RadialGrid& g = u.grid();
    const int M = g.size();
    if (M < 3) throw ValidationError("derivative requires at least 3 nodes");
    const auto& v = u.values();
    std::vector<double> d(M);

    // d(log u)/d(log r) over the stencil when positive, else d(u)/d(log r).
    const auto slope3 = [&](int il, int ic, int ir) {
        const double a = g.log_node(ic) - g.log_node(il);
        const double b = g.log_node(ir) - g.log_node(ic);
        const bool logs = v[il] > 0.0 && v[ic] > 0.0 && v[ir] > 0.0;
        const double wl = logs ? std::log(v[il]) : v[il];
        const double wc = logs ? std::log(v[ic]) : v[ic];
        const double wr = logs ? std::log(v[ir]) : v[ir];
        const double s = -b / (a * (a + b)) * wl + (b - a) / (a * b) * wc +
                         a / (b * (a + b)) * wr;
        return logs ? s * v[ic] : s;
    };
    const auto slope2 = [&](int i0, int i1, int at) {
        const double dx = g.log_node(i1) - g.log_node(i0);
        if (v[i0] > 0.0 && v[i1] > 0.0)
            return std::log(v[i1] / v[i0]) / dx * v[at];
        return (v[i1] - v[i0]) / dx;
    };

    d[0] = slope2(0, 1, 0) / g.node(0);
    for (int i = 1; i + 1 < M; ++i)
        d[i] = slope3(i - 1, i, i + 1) / g.node(i);
    d[M - 1] = slope2(M - 2, M - 1, M - 1) / g.node(M - 1);
    return RadialSamples{u.grid_ptr(), std::move(d)};
}

RadialProfile abs_profile(const RadialSamples& s)
{
    std::vector<double> v(s.values.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::abs(s.values[i]);
    return RadialProfile(s.grid, std::move(v));
}

double sphere_area(int N)
{
    return 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);
}

namespace {

// Integral over [ra, rb] subset of segment [r_i, r_{i+1}] of the segment's
// interpolant.
double segment_integral(const RadialGrid& g, std::span<const double> f, int i,
                        double ra, double rb)
{
    const double fa0 = f[i], fb0 = f[i + 1];
    const double xi = g.log_node(i), xj = g.log_node(i + 1);
    const double dx_full = xj - xi;
    const double xa = std::log(ra), xb = std::log(rb);
    if (fa0 > 0.0 && fb0 > 0.0) {
        const double beta = std::log(fb0 / fa0) / dx_full;
        const double fa = fa0 * std::exp(beta * (xa - xi));
        return fa * ra * growth_factor(beta + 1.0, xb - xa);
    }
    // linear in log r fallback (a node value vanishes)
    const auto lin = [&](double x) { return fa0 + (fb0 - fa0) * (x - xi) / dx_full; };
    return 0.5 * (xb - xa) * (lin(xa) * ra + lin(xb) * rb);
}

void check_positive_values(std::span<const double> values)
{
    for (double x : values)
        if (!(x >= 0.0) || !std::isfinite(x))
            throw ValidationError("integrate_samples requires finite nonnegative values");
}

} // namespace

double integrate_samples(const RadialGrid& grid, std::span<const double> values,
                         double a, double b)
{
    if (static_cast<int>(values.size()) != grid.size())
        throw ValidationError("integrate_samples: values size mismatch");
    check_positive_values(values);
    if (!(a >= grid.r_min() * (1.0 - 1e-12) && b <= grid.r_max() * (1.0 + 1e-12) && a < b))
        throw std::out_of_range("integrate_samples: range [" + std::to_string(a) + ", " +
                                std::to_string(b) + "] outside grid");
    a = std::max(a, grid.r_min());
    b = std::min(b, grid.r_max());
    const int i0 = grid.segment_of(a);
    const int i1 = grid.segment_of(b * (1.0 - 1e-15));
    double acc = 0.0;
    for (int i = i0; i <= i1; ++i) {
        const double ra = std::max(a, grid.node(i));
        const double rb = std::min(b, grid.node(i + 1));
        if (rb > ra) acc += segment_integral(grid, values, i, ra, rb);
    }
    return acc;
}

double integrate_signed(const RadialGrid& grid, std::span<const double> values,
                        double a, double b)
{
    if (static_cast<int>(values.size()) != grid.size())
        throw ValidationError("integrate_signed: values size mismatch");
    a = std::max(a, grid.r_min());
    b = std::min(b, grid.r_max());
    if (!(a < b)) return 0.0;
    // trapezoid in x = log r of f(r) * r, clipped endpoints interpolated linearly in x
    const auto fr = [&](int i) { return values[i] * grid.node(i); };
    const int i0 = grid.segment_of(a);
    const int i1 = grid.segment_of(b * (1.0 - 1e-15));
    const auto fr_at = [&](int i, double x) {
        const double x0 = grid.log_node(i), x1 = grid.log_node(i + 1);
        const double t = (x - x0) / (x1 - x0);
        return (1.0 - t) * fr(i) + t * fr(i + 1);
    };
    double acc = 0.0;
    for (int i = i0; i <= i1; ++i) {
        const double xa = std::max(std::log(a), grid.log_node(i));
        const double xb = std::min(std::log(b), grid.log_node(i + 1));
        if (xb > xa) acc += 0.5 * (xb - xa) * (fr_at(i, xa) + fr_at(i, xb));
    }
    return acc;
}

LogLogFit fit_loglog(const RadialGrid& grid, std::span<const double> values, int i0, int i1)
{
    i0 = std::max(i0, 0);
    i1 = std::min(i1, grid.size() - 1);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int i = i0; i <= i1; ++i) {
        if (!(values[i] > 0.0)) continue;
        const double x = grid.log_node(i), y = std::log(values[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    if (n < 2) throw ValidationError("fit_loglog requires at least two positive nodes in window");
    const double det = n * sxx - sx * sx;
    LogLogFit fit;
    fit.n = n;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    if (n > 2) {
        double ssr = 0.0;
        for (int i = i0; i <= i1; ++i) {
            if (!(values[i] > 0.0)) continue;
            const double res = std::log(values[i]) - fit.intercept - fit.slope * grid.log_node(i);
            ssr += res * res;
        }
        const double var = ssr / (n - 2);
        fit.stderr_slope = std::sqrt(std::max(0.0, var * n / det));
    }
    return fit;
}

BoundaryDecay boundary_decay(const RadialProfile& u, double fraction)
{
    const RadialGrid& g = u.grid();
    const int M = g.size();
    const int k = std::max(3, static_cast<int>(std::lround(M * fraction)));
    BoundaryDecay d;
    const auto try_fit = [&](int i0, int i1, double& gamma, bool& defined) {
        int pos = 0;
        for (int i = i0; i <= i1; ++i)
            if (u.value(i) > 0.0) ++pos;
        if (pos < 2) { defined = false; return; }
        gamma = -fit_loglog(g, u.values(), i0, i1).slope;
        defined = true;
    };
    try_fit(0, k - 1, d.head_gamma, d.head_defined);
    try_fit(M - k, M - 1, d.tail_gamma, d.tail_defined);
    return d;
}

WeightedIntegral integral_weighted(const RadialProfile& u, int N, double q, double w)
{
    if (!(q >= 0.0)) throw ValidationError("integral_weighted requires q >= 0");
    const RadialGrid& g = u.grid();
    const int M = g.size();
    std::vector<double> m(M);
    for (int i = 0; i < M; ++i)
        m[i] = (u.value(i) == 0.0 && q == 0.0 ? 1.0 : std::pow(u.value(i), q)) *
               std::pow(g.node(i), N - 1.0 - w);
    const double SN = sphere_area(N);

    WeightedIntegral out;
    out.value = SN * integrate_samples(g, m, g.r_min(), g.r_max());

    const BoundaryDecay d = boundary_decay(u);
    // integrand exponent e = -q*gamma + N-1-w; converges at infinity iff
    // e < -1 and at zero iff e > -1
    if (d.tail_defined && m.back() > 0.0) {
        const double e_t = -q * d.tail_gamma + N - 1.0 - w;
        if (e_t < -1.0)
            out.tail_estimate = SN * m.back() * g.r_max() / (-(e_t + 1.0));
        else
            out.tail_converged = false;
    }
    if (d.head_defined && m.front() > 0.0) {
        const double e_h = -q * d.head_gamma + N - 1.0 - w;
        if (e_h > -1.0)
            out.head_estimate = SN * m.front() * g.r_min() / (e_h + 1.0);
        else
            out.head_converged = false;
    }
    return out;
}

WeightedIntegral lp_gradient_norm(const RadialProfile& u, int N, double p)
{
    return integral_weighted(abs_profile(derivative(u)), N, p, 0.0);
}

double annulus_norm(const RadialProfile& u, int N, double q, double R_lo, double R_hi)
{
    if (!(q > 0.0)) throw ValidationError("annulus_norm requires q > 0");
    const RadialGrid& g = u.grid();
    if (!(R_lo >= g.r_min() * (1.0 - 1e-12)) || !(R_hi <= g.r_max() * (1.0 + 1e-12)) ||
        !(R_lo < R_hi))
        throw std::out_of_range("annulus_norm: [" + std::to_string(R_lo) + ", " +
                                std::to_string(R_hi) + "] outside grid range");
    std::vector<double> m(g.size());
    for (int i = 0; i < g.size(); ++i)
        m[i] = std::pow(u.value(i), q) * std::pow(g.node(i), N - 1.0);
    const double I = sphere_area(N) *
                     integrate_samples(g, m, std::max(R_lo, g.r_min()), std::min(R_hi, g.r_max()));
    return std::pow(I, 1.0 / q);
}

void write_profile_csv(const std::string& path, const RadialProfile& u, int N, double p)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    char buf[128];
    std::snprintf(buf, sizeof buf, "# N=%d p=%.17g\n", N, p);
    out << buf << "r,u\n";
    for (int i = 0; i < u.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", u.grid().node(i), u.value(i));
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed on " + path);
}

ProfileFile read_profile_csv(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    int line_no = 0;

    if (!std::getline(in, line)) throw ValidationError(path + ": empty file");
    ++line_no;
    int N = 0;
    double p = 0.0;
    if (std::sscanf(line.c_str(), "# N=%d p=%lf", &N, &p) != 2)
        throw ValidationError(path + ":1: expected header '# N=<n> p=<p>'");

    if (!std::getline(in, line)) throw ValidationError(path + ": missing column header");
    ++line_no;
    if (line != "r,u" && line != "r,u\r")
        throw ValidationError(path + ":2: expected column header 'r,u'");

    std::vector<double> r, v;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        double ri = 0.0, ui = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &ri, &ui) != 2)
            throw ValidationError(path + ":" + std::to_string(line_no) + ": malformed row");
        if (!std::isfinite(ri) || !std::isfinite(ui))
            throw ValidationError(path + ":" + std::to_string(line_no) + ": non-finite value");
        if (!(ri > 0.0))
            throw ValidationError(path + ":" + std::to_string(line_no) + ": r must be positive");
        if (!r.empty() && !(ri > r.back()))
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": r must be strictly increasing");
        if (ui < 0.0)
            throw ValidationError(path + ":" + std::to_string(line_no) + ": u must be nonnegative");
        r.push_back(ri);
        v.push_back(ui);
    }
    auto grid = RadialGrid::from_nodes(std::move(r));
    return ProfileFile{RadialProfile(grid, std::move(v)), N, p};
}

} // namespace phardy

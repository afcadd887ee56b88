#include "phardy/convolution.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "phardy/errors.hpp"
#include "quadrature.hpp"

namespace phardy {

namespace {

// Angular prefactor |S^{N-2}| of the sphere reduction (2 for N = 2).
double angular_prefactor(int N)
{
    return sphere_area(N - 1);
}

// Phi(d) = K_nu(1, e^d) for d >= 0.  The squared chord is computed as
// (e^d - 1)^2 + 4 e^d sin^2(th/2), which is exact near th = 0, r = t.
class KernelSlice {
public:
    KernelSlice(double nu, int N, int angular_nodes)
        : nu_(nu), N_(N), base_panels_(std::max(2, angular_nodes / 15)),
          pref_(angular_prefactor(N))
    {
    }

    double operator()(double delta) const
    {
        return delta < 1e-3 ? small(delta) : large(delta);
    }

private:
    double chord_sq(double em1, double t_exp, double theta) const
    {
        const double s = std::sin(0.5 * theta);
        return em1 * em1 + 4.0 * t_exp * s * s;
    }

    // graded map th = pi xi^2 resolves the peak at th = 0 when r ~ t
    double large(double delta) const
    {
        const double em1 = std::expm1(delta);
        const double t_exp = std::exp(delta);
        const auto f = [&](double xi) {
            const double theta = M_PI * xi * xi;
            const double sn = std::sin(theta);
            return std::pow(chord_sq(em1, t_exp, theta), -0.5 * nu_) *
                   std::pow(sn, N_ - 2.0) * 2.0 * M_PI * xi;
        };
        double acc = 0.0;
        for (int k = 0; k < base_panels_; ++k) {
            const double a = static_cast<double>(k) / base_panels_;
            const double b = static_cast<double>(k + 1) / base_panels_;
            acc += detail::gk_adaptive(f, a, b, 1e-11, 0.0);
        }
        return pref_ * acc;
    }

    // split at th = L*delta: the peak region in the scaled variable s = th/delta,
    // the rest in log th
    double small(double delta) const
    {
        const double L = 64.0;
        const double em1_over = std::expm1(delta) / delta;
        const double t_exp = std::exp(delta);
        const auto inner = [&](double s) {
            const double half = 0.5 * delta * s;
            const double c = half < 1e-8 ? 1.0 : std::sin(half) / half;
            const double th = delta * s;
            const double d = th < 1e-8 ? 1.0 : std::sin(th) / th;
            const double bracket = em1_over * em1_over + t_exp * s * s * c * c;
            return std::pow(bracket, -0.5 * nu_) * std::pow(s * d, N_ - 2.0);
        };
        const double I_in = detail::gk_adaptive(inner, 0.0, L, 1e-11, 0.0);
        const double em1 = std::expm1(delta);
        const auto outer = [&](double y) {
            const double theta = std::exp(y);
            const double sn = std::sin(theta);
            return std::pow(chord_sq(em1, t_exp, theta), -0.5 * nu_) *
                   std::pow(sn, N_ - 2.0) * theta;
        };
        const double I_out =
            detail::gk_adaptive(outer, std::log(L * delta), std::log(M_PI), 1e-11, 0.0);
        return pref_ * (std::pow(delta, N_ - 1.0 - nu_) * I_in + I_out);
    }

    double nu_;
    int N_;
    int base_panels_;
    double pref_;
};

struct BandConstants {
    double diag_interior;   // K / r^-nu on the diagonal, interior nodes
    double diag_first;      // corner (0,0), right half-panel only
    double diag_last;       // corner (M-1,M-1), left half-panel only
    double band_interior;   // pair (i,i+1) with both panels full, times r_i^-nu
    double band_first;      // pair (0,1): column-0 panel is clipped
    double band_last;       // pair (M-2,M-1): column-(M-1) panel is clipped
};

// t^{N-1}-weighted panel averages of K around the diagonal.  With t = r e^d
// the weighted integrals reduce to I+-(a,b) = int_a^b e^{c d} Phi(d) dd with
// c = N on the right of r and c = nu - N on the left (via the reflection
// Phi(-d) = e^{nu d} Phi(d)); denominators are elementary.
BandConstants band_constants(const KernelSlice& phi, double nu, int N, double h)
{
    const double b2 = 0.5 * h;

    const auto weighted = [&](double c, double a, double b) {
        const auto f = [&](double d) { return std::exp(c * d) * phi(d); };
        return detail::gk_adaptive(f, a, b, 1e-10, 0.0);
    };
    // a = 0 endpoint: Phi may blow up like d^{N-1-nu}; integrate in log d
    const auto weighted_from_zero = [&](double c, double b) {
        const double span = std::min(300.0, std::max(80.0, 80.0 / (N - nu)));
        const double lo = std::log(b) - span;
        const auto f = [&](double lam) {
            const double d = std::exp(lam);
            return d * std::exp(c * d) * phi(d);
        };
        return detail::gk_adaptive(f, lo, std::log(b), 1e-9, 0.0);
    };
    const auto den = [&](double c, double a, double b) {
        if (std::abs(c) < 1e-14) return b - a;
        return (std::exp(c * b) - std::exp(c * a)) / c;
    };

    const double cp = static_cast<double>(N);
    const double cm = nu - N;

    const double Ip0 = weighted_from_zero(cp, b2);
    const double Im0 = weighted_from_zero(cm, b2);
    const double Ip1 = weighted(cp, b2, 1.5 * h);
    const double Im1 = weighted(cm, b2, 1.5 * h);
    const double Iph = weighted(cp, b2, h);
    const double Imh = weighted(cm, b2, h);

    BandConstants bc;
    bc.diag_interior = (Ip0 + Im0) / den(cp, -b2, b2);
    bc.diag_first = Ip0 / den(cp, 0.0, b2);
    bc.diag_last = Im0 / den(-cp, 0.0, b2);

    const double avg_p_full = Ip1 / den(cp, b2, 1.5 * h);
    const double avg_m_full = Im1 / den(-cp, b2, 1.5 * h);
    const double avg_p_half = Iph / den(cp, b2, h);
    const double avg_m_half = Imh / den(-cp, b2, h);

    // stored value is the mean of the row-panel and column-panel averages;
    // the column view carries the extra r_{i+1}^-nu / r_i^-nu = e^{-nu h}
    bc.band_interior = 0.5 * (avg_p_full + std::exp(-nu * h) * avg_m_full);
    bc.band_first = 0.5 * (avg_p_full + std::exp(-nu * h) * avg_m_half);
    bc.band_last = 0.5 * (avg_p_half + std::exp(-nu * h) * avg_m_full);
    return bc;
}

} // namespace

AngularKernel build_kernel(const GridPtr& grid, double nu, int N, int angular_nodes)
{
    if (!grid) throw ValidationError("build_kernel: null grid");
    if (!(nu > 0.0 && nu < static_cast<double>(N)))
        throw ValidationError("build_kernel requires 0 < nu < N, got nu=" + std::to_string(nu) +
                              ", N=" + std::to_string(N));
    if (angular_nodes < 32) throw ValidationError("build_kernel requires angular_nodes >= 32");
    if (!grid->log_uniform())
        throw ValidationError("build_kernel requires a log-uniform grid; resample the profile "
                              "onto a geometric grid first");

    const int M = grid->size();
    const double h = grid->log_step();
    const KernelSlice phi(nu, N, angular_nodes);

    std::vector<double> slice(M, 0.0); // slice[k] = Phi(k h) for k >= 2
    for (int k = 2; k < M; ++k) slice[k] = phi(k * h);
    const BandConstants bc = band_constants(phi, nu, N, h);

    AngularKernel kern;
    kern.grid_ = grid;
    kern.nu_ = nu;
    kern.N_ = N;
    kern.M_ = M;
    kern.band_ = 1;
    kern.angular_nodes_ = angular_nodes;
    kern.table_.assign(static_cast<std::size_t>(M) * M, 0.0);

    const auto set = [&](int i, int j, double v) {
        kern.table_[static_cast<std::size_t>(i) * M + j] = v;
        kern.table_[static_cast<std::size_t>(j) * M + i] = v;
    };
    for (int i = 0; i < M; ++i) {
        const double scale = std::pow(grid->node(i), -nu);
        double d;
        if (i == 0)
            d = bc.diag_first;
        else if (i == M - 1)
            d = bc.diag_last;
        else
            d = bc.diag_interior;
        set(i, i, scale * d);
        if (i + 1 < M) {
            double b;
            if (i == 0)
                b = bc.band_first;
            else if (i + 1 == M - 1)
                b = bc.band_last;
            else
                b = bc.band_interior;
            set(i, i + 1, scale * b);
        }
        for (int j = i + 2; j < M; ++j) set(i, j, scale * slice[j - i]);
    }
    return kern;
}

ConvolutionTailCheck convolution_tail_check(const RadialProfile& g, double nu, int N)
{
    const BoundaryDecay d = boundary_decay(g);
    ConvolutionTailCheck c;
    const double margin = 0.02; // safety margin on the fitted exponent
    if (d.tail_defined && g.values().back() > 0.0 && d.tail_gamma <= N - nu + margin) {
        c.ok = false;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "tail exponent %.4g fails beta_0 > N - nu = %.4g: |x|^-nu * g is infinite",
                      d.tail_gamma, N - nu);
        c.reason = buf;
        return c;
    }
    if (d.head_defined && g.values().front() > 0.0 && d.head_gamma >= N - margin) {
        c.ok = false;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "head exponent %.4g fails beta < N = %d: g has infinite mass near 0",
                      d.head_gamma, N);
        c.reason = buf;
        return c;
    }
    return c;
}

RadialProfile riesz_convolve(const RadialProfile& g, const AngularKernel& kernel)
{
    const RadialGrid& grid = g.grid();
    if (grid.fingerprint() != kernel.grid().fingerprint())
        throw ValidationError("riesz_convolve: profile grid does not match kernel grid");
    const int M = grid.size();
    const int N = kernel.dimension();
    const double nu = kernel.nu();

    const ConvolutionTailCheck check = convolution_tail_check(g, nu, N);
    if (!check.ok) throw DivergenceError("riesz_convolve: " + check.reason);

    // quadrature weights of the trapezoid rule in log t
    std::vector<double> wz(M);
    for (int j = 0; j < M; ++j) {
        const double lo = j == 0 ? grid.log_node(0) : grid.log_node(j - 1);
        const double hi = j == M - 1 ? grid.log_node(M - 1) : grid.log_node(j + 1);
        wz[j] = 0.5 * (hi - lo);
    }
    std::vector<double> mass(M); // w_j g_j t_j^N
    for (int j = 0; j < M; ++j)
        mass[j] = wz[j] * g.value(j) * std::pow(grid.node(j), N);

    // boundary corrections: K(r, t) ~ |S^{N-1}| max(r,t)^-nu for separated args
    const BoundaryDecay bd = boundary_decay(g);
    const double SN = sphere_area(N);
    double tail_corr = 0.0;
    if (bd.tail_defined && g.values().back() > 0.0)
        tail_corr = SN * g.values().back() * std::pow(grid.r_max(), N - nu) /
                    (bd.tail_gamma + nu - N);
    double head_mass = 0.0;
    if (bd.head_defined && g.values().front() > 0.0)
        head_mass = g.values().front() * std::pow(grid.r_min(), static_cast<double>(N)) /
                    (N - bd.head_gamma);

    std::vector<double> v(M);
    for (int i = 0; i < M; ++i) {
        const double* row = kernel.table().data() + static_cast<std::size_t>(i) * M;
        double acc = 0.0;
        for (int j = 0; j < M; ++j) acc += mass[j] * row[j];
        acc += tail_corr + SN * std::pow(grid.node(i), -nu) * head_mass;
        if (!std::isfinite(acc))
            throw std::runtime_error("riesz_convolve: non-finite value at node " +
                                     std::to_string(i));
        v[i] = std::max(acc, 0.0);
    }
    return RadialProfile(g.grid_ptr(), std::move(v));
}

KernelStore::KernelStore(std::string cache_dir, int angular_nodes)
    : cache_dir_(std::move(cache_dir)), angular_nodes_(angular_nodes)
{
}

std::shared_ptr<const AngularKernel> KernelStore::get(const GridPtr& grid, double nu, int N)
{
    char key[128];
    std::snprintf(key, sizeof key, "%016llx_%.17g_%d_%d",
                  static_cast<unsigned long long>(grid->fingerprint()), nu, N, angular_nodes_);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }

    std::shared_ptr<const AngularKernel> built;
    if (!cache_dir_.empty()) {
        const std::string path = cache_dir_ + "/kernel_" + key + ".csv";
        if (std::filesystem::exists(path)) {
            try {
                built = std::make_shared<AngularKernel>(load_kernel_csv(path, grid));
            } catch (const std::exception&) {
                built.reset(); // stale or foreign file: rebuild below
            }
        }
    }
    if (!built) {
        built = std::make_shared<AngularKernel>(build_kernel(grid, nu, N, angular_nodes_));
        if (!cache_dir_.empty()) {
            std::error_code ec;
            std::filesystem::create_directories(cache_dir_, ec);
            if (!ec) save_kernel_csv(cache_dir_ + "/kernel_" + std::string(key) + ".csv", *built);
        }
    }
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.emplace(key, built);
    return built;
}

RadialProfile hartree_potential(const RadialProfile& u, const ProblemParams& params,
                                KernelStore& kernels)
{
    const double q = convolution_power(params);
    const double nu = convolution_exponent(params);
    std::vector<double> g(u.size());
    for (int i = 0; i < u.size(); ++i) g[i] = std::pow(u.value(i), q);
    const RadialProfile gq = u.with_values(std::move(g));
    const auto kernel = kernels.get(u.grid_ptr(), nu, params.N);
    return riesz_convolve(gq, *kernel);
}

void save_kernel_csv(const std::string& path, const AngularKernel& kernel)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    char buf[192];
    std::snprintf(buf, sizeof buf, "# phardy-kernel nu=%.17g N=%d M=%d angular_nodes=%d grid=%016llx\n",
                  kernel.nu(), kernel.dimension(), kernel.size(), kernel.angular_nodes(),
                  static_cast<unsigned long long>(kernel.grid().fingerprint()));
    out << buf << "i,j,K\n";
    for (int i = 0; i < kernel.size(); ++i)
        for (int j = i; j < kernel.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", i, j, kernel.at(i, j));
            out << buf;
        }
    if (!out) throw std::runtime_error("write failed on " + path);
}

AngularKernel load_kernel_csv(const std::string& path, const GridPtr& grid)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(path + ": empty kernel file");
    double nu = 0.0;
    int N = 0, M = 0, angular_nodes = 0;
    unsigned long long hash = 0;
    if (std::sscanf(line.c_str(), "# phardy-kernel nu=%lf N=%d M=%d angular_nodes=%d grid=%llx",
                    &nu, &N, &M, &angular_nodes, &hash) != 5)
        throw ValidationError(path + ": bad kernel header");
    if (!grid || grid->fingerprint() != hash || grid->size() != M)
        throw ValidationError(path + ": kernel was built for a different grid");
    if (!std::getline(in, line) || (line != "i,j,K" && line != "i,j,K\r"))
        throw ValidationError(path + ": missing column header");

    AngularKernel kern;
    kern.grid_ = grid;
    kern.nu_ = nu;
    kern.N_ = N;
    kern.M_ = M;
    kern.band_ = 1;
    kern.angular_nodes_ = angular_nodes;
    kern.table_.assign(static_cast<std::size_t>(M) * M, -1.0);
    int line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        int i = 0, j = 0;
        double k = 0.0;
        if (std::sscanf(line.c_str(), "%d,%d,%lf", &i, &j, &k) != 3)
            throw ValidationError(path + ":" + std::to_string(line_no) + ": malformed row");
        if (i < 0 || j < i || j >= M)
            throw ValidationError(path + ":" + std::to_string(line_no) + ": index out of range");
        kern.table_[static_cast<std::size_t>(i) * M + j] = k;
        kern.table_[static_cast<std::size_t>(j) * M + i] = k;
    }
    for (double x : kern.table_)
        if (!(x > 0.0) || !std::isfinite(x))
            throw ValidationError(path + ": kernel table incomplete or non-positive");
    return kern;
}

} // namespace phardy

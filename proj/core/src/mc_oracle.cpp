#include "phardy/mc_oracle.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "phardy/errors.hpp"
#include "phardy/radial.hpp"

namespace phardy {

McEstimate mc_riesz_convolve(const std::function<double(double)>& g, double support,
                             double nu, int N, double r, std::int64_t samples,
                             std::uint64_t seed)
{
    if (!(nu > 0.0 && nu < static_cast<double>(N)))
        throw ValidationError("mc_riesz_convolve requires 0 < nu < N");
    if (!(support > 0.0) || !(r >= 0.0) || samples < 2)
        throw ValidationError("mc_riesz_convolve: bad support/radius/sample count");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const double ball_vol = sphere_area(N) / N * std::pow(support, N);
    const double sing_radius = r + support; // covers supp(g) from x0
    const double SN = sphere_area(N);

    std::vector<double> y(N), dir(N);
    double sum = 0.0, sum2 = 0.0;
    for (std::int64_t k = 0; k < samples; ++k) {
        double norm2 = 0.0;
        for (int d = 0; d < N; ++d) {
            dir[d] = gauss(rng);
            norm2 += dir[d] * dir[d];
        }
        const double inv = 1.0 / std::sqrt(norm2);

        double dist_x0; // |y - x0|
        double rad_y;   // |y|
        if (unif(rng) < 0.5) {
            // uniform in the support ball
            const double s = support * std::pow(unif(rng), 1.0 / N);
            rad_y = s;
            double y1 = s * dir[0] * inv - r; // x0 = (r, 0, ..., 0)
            double acc = y1 * y1;
            for (int d = 1; d < N; ++d) {
                const double c = s * dir[d] * inv;
                acc += c * c;
            }
            dist_x0 = std::sqrt(acc);
        } else {
            // radius from density ~ s^{N-1-nu} around x0
            const double s = sing_radius * std::pow(unif(rng), 1.0 / (N - nu));
            dist_x0 = s;
            const double y1 = r + s * dir[0] * inv;
            double acc = y1 * y1;
            for (int d = 1; d < N; ++d) {
                const double c = s * dir[d] * inv;
                acc += c * c;
            }
            rad_y = std::sqrt(acc);
        }

        const double gv = rad_y <= support ? g(rad_y) : 0.0;
        double f = 0.0;
        if (gv != 0.0 && dist_x0 > 0.0) {
            const double q_ball = rad_y <= support ? 0.5 / ball_vol : 0.0;
            double q_sing = 0.0;
            if (dist_x0 <= sing_radius)
                q_sing = 0.5 * (N - nu) * std::pow(dist_x0, N - 1.0 - nu) /
                         (std::pow(sing_radius, N - nu) * SN * std::pow(dist_x0, N - 1.0));
            const double q = q_ball + q_sing;
            f = gv * std::pow(dist_x0, -nu) / q;
        }
        sum += f;
        sum2 += f * f;
    }

    McEstimate est;
    est.value = sum / samples;
    const double var = std::max(0.0, sum2 / samples - est.value * est.value);
    est.stderr_value = std::sqrt(var / samples);
    return est;
}

} // namespace phardy

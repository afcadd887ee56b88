#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace phardy::detail {

// Gauss(7)-Kronrod(15) pair on [a, b]; returns K15, writes |K15 - G7| to err.
template <class F>
double gk15(const F& f, double a, double b, double& err)
{
    static const double xk[8] = {
        0.991455371120812639206854697526, 0.949107912342758524526189684048,
        0.864864423359769072789712788641, 0.741531185599394439863864773281,
        0.586087235467691130294144838259, 0.405845151377397166906606412077,
        0.207784955007898467600689403773, 0.0};
    static const double wk[8] = {
        0.022935322010529224963732008059, 0.063092092629978553290700663189,
        0.104790010322250183839876322542, 0.140653259715525918745189590510,
        0.169004726639267902826583426599, 0.190350578064785409913256402421,
        0.204432940075298892414161999235, 0.209482141084727828012999174892};
    static const double wg[4] = {
        0.129484966168869693270611432679, 0.279705391489276667901467771424,
        0.381830050505118944950369775489, 0.417959183673469387755102040816};

    const double c = 0.5 * (a + b);
    const double m = 0.5 * (b - a);
    const double fc = f(c);
    double k15 = wk[7] * fc;
    double g7 = wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = m * xk[i];
        const double fs = f(c + dx) + f(c - dx);
        k15 += wk[i] * fs;
        if (i % 2 == 1) g7 += wg[i / 2] * fs;
    }
    k15 *= m;
    g7 *= m;
    err = std::abs(k15 - g7);
    return k15;
}

// Globally adaptive integration: repeatedly bisect the interval carrying the
// largest error estimate until the summed error meets max(atol, rtol*|I|).
template <class F>
double gk_adaptive(const F& f, double a, double b, double rtol = 1e-10,
                   double atol = 0.0, int max_intervals = 20000)
{
    struct Iv {
        double a, b, est, err;
        bool operator<(const Iv& o) const { return err < o.err; }
    };

    std::vector<Iv> heap;
    heap.reserve(256);
    double err0;
    const double est0 = gk15(f, a, b, err0);
    heap.push_back({a, b, est0, err0});

    double total_est = est0;
    double total_err = err0;
    int n = 1;
    while (n < max_intervals) {
        if (total_err <= std::max(atol, rtol * std::abs(total_est))) break;
        std::pop_heap(heap.begin(), heap.end());
        const Iv worst = heap.back();
        heap.pop_back();
        const double width = worst.b - worst.a;
        if (width <= 1e-300 + 1e-15 * (std::abs(worst.a) + std::abs(worst.b))) {
            // cannot refine further; drop its error from the budget
            total_err -= worst.err;
            heap.push_back({worst.a, worst.b, worst.est, 0.0});
            std::push_heap(heap.begin(), heap.end());
            continue;
        }
        const double c = 0.5 * (worst.a + worst.b);
        double el, er;
        const double il = gk15(f, worst.a, c, el);
        const double ir = gk15(f, c, worst.b, er);
        total_est += il + ir - worst.est;
        total_err += el + er - worst.err;
        heap.push_back({worst.a, c, il, el});
        std::push_heap(heap.begin(), heap.end());
        heap.push_back({c, worst.b, ir, er});
        std::push_heap(heap.begin(), heap.end());
        ++n;
    }

    double sum = 0.0;
    for (const Iv& iv : heap) sum += iv.est;
    return sum;
}

} // namespace phardy::detail

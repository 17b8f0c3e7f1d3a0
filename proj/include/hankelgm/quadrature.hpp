#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "hankelgm/errors.hpp"

namespace hankelgm {
namespace quad {

// 7/15 Gauss-Kronrod pair, nodes and weights as in QUADPACK dqk15.
struct GK15Result {
    double value;      // 15-point Kronrod estimate
    double error;      // |Kronrod - Gauss| based estimate
    double abs_value;  // integral of |f|, same rule
};

template <class F>
GK15Result gk15(const F& f, double a, double b) {
    static const double xgk[8] = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.0};
    static const double wgk[8] = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static const double wg[4] = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = wgk[7] * fc, resg = wg[3] * fc, resabs = wgk[7] * std::abs(fc);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const double f1 = f(c - dx), f2 = f(c + dx);
        resk += wgk[j] * (f1 + f2);
        resabs += wgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
    }
    GK15Result r;
    r.value = resk * h;
    r.abs_value = resabs * std::abs(h);
    const double diff = std::abs(resk - resg) * std::abs(h);
    // QUADPACK-style sharpening of the raw difference
    r.error = diff;
    if (r.abs_value > 0.0 && diff > 0.0)
        r.error = r.abs_value * std::min(1.0, std::pow(200.0 * diff / r.abs_value, 1.5));
    return r;
}

// Adaptive bisection on top of GK15, seeded with a panel partition (useful
// when integrand breakpoints are known up front).  Absolute tolerance; throws
// AccuracyError with the bound reached if the panel budget runs out.
template <class F>
double panel_adaptive(const F& f, const std::vector<double>& pts, double abs_tol,
                      int max_panels = 2000) {
    if (pts.size() < 2) throw DomainError("panel_adaptive: need at least 2 panel points");
    struct Panel {
        double a, b, value, error;
    };
    std::vector<Panel> heap;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!(pts[i + 1] > pts[i]))
            throw DomainError("panel_adaptive: panel points must increase strictly");
        GK15Result g = gk15(f, pts[i], pts[i + 1]);
        heap.push_back({pts[i], pts[i + 1], g.value, g.error});
        total += g.value;
        total_err += g.error;
    }
    const double a = pts.front(), b = pts.back();
    int used = static_cast<int>(heap.size());
    while (total_err > abs_tol && used < max_panels) {
        // split the worst panel
        std::size_t worst = 0;
        for (std::size_t i = 1; i < heap.size(); ++i)
            if (heap[i].error > heap[worst].error) worst = i;
        Panel p = heap[worst];
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) break;  // interval exhausted at machine resolution
        GK15Result l = gk15(f, p.a, m), r = gk15(f, m, p.b);
        total += l.value + r.value - p.value;
        total_err += l.error + r.error - p.error;
        heap[worst] = {p.a, m, l.value, l.error};
        heap.push_back({m, p.b, r.value, r.error});
        ++used;
    }
    if (total_err > abs_tol * 16.0 && total_err > 1e-13 * std::abs(total) + 1e-300)
        throw AccuracyError("adaptive quadrature: tolerance not met on [" + std::to_string(a) +
                                ", " + std::to_string(b) + "]",
                            total_err);
    return total;
}

template <class F>
double adaptive(const F& f, double a, double b, double abs_tol, int max_panels = 2000) {
    return panel_adaptive(f, std::vector<double>{a, b}, abs_tol, max_panels);
}

// Wynn epsilon table for accelerating a sequence of partial sums; returns the
// best extrapolated value.  Used on alternating panel sums of oscillatory
// integrals.
inline double wynn_epsilon(const std::vector<double>& partial_sums) {
    const std::size_t n = partial_sums.size();
    if (n == 0) throw DomainError("wynn_epsilon: empty sequence");
    if (n < 3) return partial_sums.back();
    std::vector<double> prev(n, 0.0);       // epsilon_{k-1}
    std::vector<double> cur = partial_sums; // epsilon_0
    double best = partial_sums.back();
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<double> next(n - k);
        bool ok = true;
        for (std::size_t j = 0; j + k < n; ++j) {
            const double d = cur[j + 1] - cur[j];
            if (d == 0.0) { ok = false; break; }
            next[j] = prev[j + 1] + 1.0 / d;
        }
        if (!ok) break;
        if (k % 2 == 0 && !next.empty()) best = next.back();
        prev = std::move(cur);
        cur = std::move(next);
    }
    return best;
}

}  // namespace quad
}  // namespace hankelgm

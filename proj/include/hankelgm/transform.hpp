#pragma once
// Hankel transform as a convergence-controlled improper integral, with its
// inversion, the Parseval pairing, the 1-D Fourier front end through the
// even/odd split, and the radial n-dimensional reduction.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hankelgm/bessel.hpp"
#include "hankelgm/errors.hpp"
#include "hankelgm/norms.hpp"
#include "hankelgm/quadrature.hpp"
#include "hankelgm/sampled.hpp"

namespace hankelgm {

enum class TailMode { Direct, IntegrateByParts };

// Truncation and quadrature policy for one transform run.  The [m, n] band
// widens by a factor of 4 per ladder rung; rung-to-rung Cauchy differences
// are the convergence witness for the improper integral.
struct TransformSettings {
    double truncation_m = 0.25;
    double truncation_n = 4.0;
    int ladder = 6;
    TailMode tail_mode = TailMode::IntegrateByParts;
    double quad_tol = 1e-10;
    Grid y_grid = Grid::dyadic(-4, 4, 8);
    bool accelerate = false;  // Wynn over the alternating zero-panel sums (direct tails)

    // Window order under the integrated-by-parts mode.  1 transforms the
    // declared interpolant exactly (right for step data, second order for
    // smooth data); 3 reads the samples as a smooth function through a nodal
    // cubic per cell and is fourth order.  Direct mode ignores this.
    int cell_order = 1;

    void validate() const {
        if (!(truncation_m > 0.0) || !(truncation_n > truncation_m))
            throw DomainError("TransformSettings: need 0 < M < N");
        if (ladder < 3) throw DomainError("TransformSettings: ladder needs at least 3 rungs");
        if (!(quad_tol > 0.0)) throw DomainError("TransformSettings: tolerance must be positive");
        if (cell_order != 1 && cell_order != 3)
            throw DomainError("TransformSettings: cell order must be 1 or 3");
    }
};

namespace detail {

inline double pi_d() { return static_cast<double>(kPiL); }

// Signed integral of the model band c x^e sqrt(xy) J_alpha(xy) over [lo, hi]
// (hi may be kInf):
//   c y^{-e-1} \int_{lo y}^{hi y} u^{e+1/2} J_alpha(u) du.
inline double model_band(double alpha, double y, double c, double e, double lo, double hi,
                         double tol) {
    if (c == 0.0 || !(hi > lo)) return 0.0;
    const double s = e + 0.5;
    const double pref = c * std::pow(y, -e - 1.0);
    if (hi == kInf) return pref * bessel_moment_from(alpha, s, lo * y, tol);
    return pref * (bessel_moment_primitive(alpha, s, hi * y, tol) -
                   bessel_moment_primitive(alpha, s, lo * y, tol));
}

// Window integral of the interpolant against the kernel by exact per-cell
// algebra, with an optional moment shift sigma multiplying the integrand by
// x^sigma (the radial reduction folds its x^{(n-1)/2} factor in this way).
// On a linear cell f(x) = (fa - m a) + m x,
//   \int_a^b f(x) x^sigma sqrt(xy) J_alpha(xy) dx
//     = (fa - m a) y^{-sigma-1} (k0(by) - k0(ay)) + m y^{-sigma-2} (k1(by) - k1(ay)),
// k_j(z) = \int_0^z u^{sigma+j+1/2} J_alpha(u) du; this is the
// integration-by-parts route, the kernel primitive absorbing each cell's
// variation exactly.
inline std::complex<double> window_cells(const SampledFunction& f, double alpha, double y,
                                         double lo, double hi, double tol, double sigma = 0.0) {
    const bool linear = f.interp() == Interp::PiecewiseLinear;
    const double s0 = sigma + 0.5, s1 = sigma + 1.5;
    const double iy = std::pow(y, -sigma - 1.0), iy2 = iy / y;
    std::complex<double> acc = 0.0;
    double xp = -1.0, k0p = 0.0, k1p = 0.0;
    f.for_each_cell(lo, hi,
                    [&](double xa, double xb, std::complex<double> va, std::complex<double> vb) {
                        double k0a, k1a = 0.0;
                        if (xa == xp) {
                            k0a = k0p;
                            k1a = k1p;
                        } else {
                            k0a = bessel_moment_primitive(alpha, s0, xa * y, tol);
                            if (linear) k1a = bessel_moment_primitive(alpha, s1, xa * y, tol);
                        }
                        const double k0b = bessel_moment_primitive(alpha, s0, xb * y, tol);
                        const double k1b =
                            linear ? bessel_moment_primitive(alpha, s1, xb * y, tol) : 0.0;
                        if (linear) {
                            const std::complex<double> m = (vb - va) / (xb - xa);
                            acc += (va - m * xa) * ((k0b - k0a) * iy) + m * ((k1b - k1a) * iy2);
                        } else {
                            acc += va * ((k0b - k0a) * iy);
                        }
                        xp = xb;
                        k0p = k0b;
                        k1p = k1b;
                    });
    return acc;
}

// Fourth-order window integral: on each cell the four nearest node values fix
// a cubic, whose monomial coefficients pair with the moment primitives
// k_0..k_3 exactly.  The Lagrange-to-monomial conversion runs in long double
// because the basis is skewed (cell width is a couple of percent of x).
inline std::complex<double> window_cubic(const SampledFunction& f, double alpha, double y,
                                         double lo, double hi, double tol) {
    const Grid& g = f.grid();
    if (g.size() < 4) return window_cells(f, alpha, y, lo, hi, tol);
    using CL = std::complex<long double>;
    std::size_t i = g.locate(std::max(lo, g.front()));
    while (i + 1 < g.size() && g.node(i + 1) <= lo) ++i;
    std::complex<double> acc = 0.0;
    double xp = -1.0;
    double kp[4] = {0.0, 0.0, 0.0, 0.0};
    for (; i + 1 < g.size() && g.node(i) < hi; ++i) {
        const double xa = std::max(lo, g.node(i));
        const double xb = std::min(hi, g.node(i + 1));
        if (xb <= xa) continue;
        const std::size_t j0 = i == 0 ? 0 : (i + 2 < g.size() ? i - 1 : g.size() - 4);
        CL c[4] = {0.0L, 0.0L, 0.0L, 0.0L};
        for (std::size_t j = j0; j < j0 + 4; ++j) {
            long double others[3], denom = 1.0L;
            int t = 0;
            for (std::size_t l = j0; l < j0 + 4; ++l)
                if (l != j) {
                    others[t++] = g.node(l);
                    denom *= static_cast<long double>(g.node(j)) - g.node(l);
                }
            const long double a = others[0], b = others[1], d = others[2];
            const long double num[4] = {-a * b * d, a * b + a * d + b * d, -(a + b + d), 1.0L};
            const CL scale = CL(f.value(j)) / denom;
            for (int q2 = 0; q2 < 4; ++q2) c[q2] += scale * num[q2];
        }
        double ka[4], kb[4];
        for (int q2 = 0; q2 < 4; ++q2) {
            ka[q2] = xa == xp ? kp[q2] : bessel_moment_primitive(alpha, q2 + 0.5, xa * y, tol);
            kb[q2] = bessel_moment_primitive(alpha, q2 + 0.5, xb * y, tol);
            kp[q2] = kb[q2];
        }
        xp = xb;
        CL cell = 0.0L;
        long double yp = 1.0L / y;
        for (int q2 = 0; q2 < 4; ++q2) {
            cell += c[q2] * yp * (static_cast<long double>(kb[q2]) - ka[q2]);
            yp /= y;
        }
        acc += std::complex<double>(static_cast<double>(cell.real()),
                                    static_cast<double>(cell.imag()));
    }
    return acc;
}

// Direct quadrature of the window: panels split at grid nodes and at the
// zeros of J_alpha(x y), so every panel sees one smooth non-oscillating arch.
inline std::complex<double> window_panels(const SampledFunction& f, double alpha, double y,
                                          double lo, double hi, double tol, double sigma = 0.0) {
    if (!(hi > lo)) return 0.0;
    std::vector<double> pts{lo, hi};
    const Grid& g = f.grid();
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.node(i) > lo && g.node(i) < hi) pts.push_back(g.node(i));
    for (double z : bessel_j_zeros_in(alpha, lo * y, hi * y)) {
        const double x = z / y;
        if (x > lo && x < hi) pts.push_back(x);
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> clean{pts.front()};
    for (double p : pts)
        if (p > clean.back() * (1.0 + 1e-14)) clean.push_back(p);
    const int budget = static_cast<int>(2 * clean.size()) + 2000;
    auto quad_part = [&](auto part) {
        return quad::panel_adaptive(
            [&](double x) {
                return part(f.eval(x)) * std::pow(x, sigma) * std::sqrt(x * y) *
                       bessel_j(alpha, x * y);
            },
            clean, tol, budget);
    };
    const double re = quad_part([](std::complex<double> v) { return v.real(); });
    if (f.is_real()) return re;
    return {re, quad_part([](std::complex<double> v) { return v.imag(); })};
}

// Model tail summed panel-by-panel between consecutive kernel zeros, the
// alternating sums optionally Wynn-accelerated.  Reports the last term as the
// truncation bound.
inline double tail_direct(double alpha, double y, double c, double e, double lo, double hi,
                          double tol, bool accelerate, double* bound) {
    if (bound) *bound = 0.0;
    if (c == 0.0 || !(hi > lo)) return 0.0;
    const double s = e + 0.5;
    const double pref = c * std::pow(y, -e - 1.0);
    const double zlo = lo * y, zhi = hi == kInf ? kInf : hi * y;
    auto piece = [&](double a, double b) {
        return quad::adaptive([&](double u) { return std::pow(u, s) * bessel_j(alpha, u); }, a, b,
                              0.05 * tol, 400);
    };
    int k = 1;
    while (bessel_j_zero(alpha, k) <= zlo) ++k;
    double edge = zlo;
    std::vector<double> sums;
    double acc = 0.0, last = 0.0;
    bool reached_hi = false;
    for (int terms = 0; terms < 240; ++terms) {
        double next = bessel_j_zero(alpha, k++);
        if (next >= zhi) {
            next = zhi;
            reached_hi = true;
        }
        last = piece(edge, next);
        acc += last;
        sums.push_back(acc);
        edge = next;
        if (reached_hi || std::abs(last) < 0.1 * tol) break;
    }
    if (reached_hi) return pref * acc;  // finite band summed outright
    if (bound) *bound = std::abs(pref) * std::abs(last);
    // extrapolation targets the limit of the arch sums, so it only applies to
    // the genuinely improper band
    if (accelerate && hi == kInf && sums.size() >= 8) return pref * quad::wynn_epsilon(sums);
    return pref * acc;
}

}  // namespace detail

// Partial integrals over the widening truncation band, with the head and
// integrated-by-parts tail diagnostics that drive them to zero.
struct TruncationRung {
    double m = 0.0, n = 0.0;
    double partial = 0.0;
    double cauchy = 0.0;      // |partial - previous partial|
    double head_abs = 0.0;    // \int_0^m |f| sqrt(xy) |J_alpha|
    double tail_bound = 0.0;  // kernel-primitive bound on the piece beyond n
};

struct TruncationReport {
    std::vector<TruncationRung> rungs;
    bool cauchy_decreasing = true;  // after at most the first two differences
    std::string note;
};

struct TransformResult {
    SampledFunction values;  // on settings.y_grid
    // Per node: quadrature budget plus any direct-mode tail truncation bound.
    // The declared interpolant and edge models are integrated exactly, so
    // sampling density is the caller's accuracy knob and is not counted here.
    std::vector<double> err_est;
    double max_cauchy = 0.0;  // worst final ladder difference, a convergence diagnostic
};

namespace detail {

// One evaluation point: band integrals assembled from the head model, the
// window cells, and the tail model, under the chosen tail mode.
struct YTransform {
    std::complex<double> value;
    double err = 0.0;
    double final_cauchy = 0.0;
    std::vector<double> partials;
    std::vector<double> cauchy;
};

inline YTransform transform_at(const SampledFunction& f, double alpha, double y,
                               const TransformSettings& st, bool throw_on_stall = true,
                               double sigma = 0.0) {
    using K = TailDescriptor::Kind;
    const Grid& g = f.grid();
    const TailDescriptor t = f.tails() ? *f.tails() : TailDescriptor{};

    auto window_eval = [&](double wlo, double whi) -> std::complex<double> {
        if (!(whi > wlo)) return 0.0;
        if (st.tail_mode != TailMode::IntegrateByParts)
            return window_panels(f, alpha, y, wlo, whi, st.quad_tol, sigma);
        if (st.cell_order == 3 && sigma == 0.0 && f.interp() == Interp::PiecewiseLinear)
            return window_cubic(f, alpha, y, wlo, whi, st.quad_tol);
        return window_cells(f, alpha, y, wlo, whi, st.quad_tol, sigma);
    };
    auto head_band = [&](double m, double n) -> std::complex<double> {
        if (t.head_kind != K::Power || m >= g.front()) return 0.0;
        return model_band(alpha, y, t.head_c, t.head_e + sigma, m, std::min(g.front(), n),
                          st.quad_tol);
    };
    auto tail_band = [&](double n, double* tail_bound) -> std::complex<double> {
        if (t.tail_kind != K::Power || n <= g.back()) return 0.0;
        if (st.tail_mode == TailMode::IntegrateByParts)
            return model_band(alpha, y, t.tail_c, t.tail_e + sigma, g.back(), n, st.quad_tol);
        return tail_direct(alpha, y, t.tail_c, t.tail_e + sigma, g.back(), n, st.quad_tol,
                           st.accelerate, tail_bound);
    };

    // The rung windows nest, so the window sum grows by two side strips per
    // rung instead of being recomputed.
    YTransform out;
    std::complex<double> prev = 0.0, win = 0.0;
    double wlo_prev = 0.0, whi_prev = 0.0;
    bool have_window = false;
    double scale = 0.0;
    for (int j = 0; j <= st.ladder; ++j) {
        const double m = st.truncation_m * std::pow(4.0, -j);
        const double n = st.truncation_n * std::pow(4.0, j);
        const double wlo = std::max(m, g.front()), whi = std::min(n, g.back());
        if (whi > wlo) {
            if (!have_window) {
                win = window_eval(wlo, whi);
                have_window = true;
            } else {
                if (wlo < wlo_prev) win += window_eval(wlo, wlo_prev);
                if (whi > whi_prev) win += window_eval(whi_prev, whi);
            }
            wlo_prev = wlo;
            whi_prev = whi;
        }
        const std::complex<double> part = head_band(m, n) + win + tail_band(n, nullptr);
        out.partials.push_back(part.real());
        scale = std::max(scale, std::abs(part));
        if (j > 0) out.cauchy.push_back(std::abs(part - prev));
        prev = part;
    }
    // Rung strips of an oscillatory integrand can bump a single Cauchy
    // difference without meaning divergence; accept a bump when the ladder
    // re-establishes decay for several rungs and lands well below it.
    const double floor = 10.0 * st.quad_tol + 1e-14 * scale;
    std::size_t k_bad = 0;
    bool bumped = false;
    for (std::size_t k = 2; k < out.cauchy.size(); ++k) {
        const double recent = std::max(out.cauchy[k - 1], out.cauchy[k - 2]);
        if (out.cauchy[k] > 1.25 * recent + floor) {
            k_bad = k;
            bumped = true;
        }
    }
    const bool stalled =
        bumped && (k_bad + 3 > out.cauchy.size() ||
                   out.cauchy.back() > std::max(floor, 0.25 * out.cauchy[k_bad]));
    if (stalled) {
        if (!throw_on_stall) {
            out.final_cauchy = out.cauchy.back();
            return out;
        }
        std::string seq;
        for (double d : out.cauchy) seq += (seq.empty() ? "" : ", ") + std::to_string(d);
        throw ConvergenceError("hankel_transform: Cauchy differences not decreasing at y=" +
                               std::to_string(y) + " (sequence " + seq + ")");
    }
    if (!have_window) {
        win = window_eval(g.front(), g.back());
    } else {
        if (wlo_prev > g.front()) win += window_eval(g.front(), wlo_prev);
        if (whi_prev < g.back()) win += window_eval(whi_prev, g.back());
    }
    double tail_bound = 0.0;
    out.value = head_band(0.0, g.front()) + win + tail_band(kInf, &tail_bound);
    out.final_cauchy = out.cauchy.empty() ? 0.0 : out.cauchy.back();
    out.err = 4.0 * st.quad_tol + tail_bound;
    return out;
}

}  // namespace detail

// H_alpha f(y) = \int_0^inf f(x) sqrt(xy) J_alpha(xy) dx on the y grid.  The
// head and tail models extend the integral beyond the sampling window; with no
// models the data is read as compactly supported.  Per-node evaluations are
// independent pure computations (a parallel map in shape, run serially here).
inline TransformResult hankel_transform(const SampledFunction& f, double alpha,
                                        const TransformSettings& st) {
    st.validate();
    if (alpha < -0.5) throw DomainError("hankel_transform: order must be >= -1/2");
    std::vector<std::complex<double>> vals(st.y_grid.size());
    std::vector<double> errs(st.y_grid.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < st.y_grid.size(); ++i) {
        auto r = detail::transform_at(f, alpha, st.y_grid.node(i), st);
        vals[i] = r.value;
        errs[i] = r.err;
        worst = std::max(worst, r.final_cauchy);
    }
    SampledFunction out(st.y_grid, std::move(vals), Interp::PiecewiseLinear);
    out.set_source("hankel:alpha=" + std::to_string(alpha) + ":" + f.source());
    if (!f.tails())
        out.add_warning("no edge models on the input; mass outside the window was dropped");
    return {std::move(out), std::move(errs), worst};
}

// The kernel is its own inverse, so inversion is the same integral; a separate
// entry point keeps intent readable at call sites and in result sources.
inline TransformResult hankel_inverse(const SampledFunction& F, double alpha,
                                      const TransformSettings& st) {
    TransformResult r = hankel_transform(F, alpha, st);
    r.values.set_source("hankel-inverse:alpha=" + std::to_string(alpha) + ":" + F.source());
    return r;
}

// \hat f(y) = \int_R f(x) e^{ixy} dx for y > 0, through the even/odd split:
// sqrt(2 pi) (H_{-1/2} f_e + i H_{1/2} f_o).  For real f the negative axis is
// the conjugate mirror.  The halves get the natural edge closures: f_e flat
// and f_o linear below the window, zero above it.
inline SampledFunction fourier_1d(const std::function<double(double)>& f, const Grid& x_grid,
                                  const TransformSettings& st,
                                  Interp interp = Interp::PiecewiseLinear) {
    auto parts = even_odd_split(f, x_grid, interp);
    using K = TailDescriptor::Kind;
    TailDescriptor te;
    te.head_kind = K::Power;
    te.head_c = parts.first.real_value(0);
    te.head_e = 0.0;
    te.tail_kind = K::Zero;
    parts.first.set_tails(te);
    TailDescriptor to;
    to.head_kind = K::Power;
    to.head_c = parts.second.real_value(0) / x_grid.front();
    to.head_e = 1.0;
    to.tail_kind = K::Zero;
    parts.second.set_tails(to);

    auto fe = hankel_transform(parts.first, -0.5, st);
    auto fo = hankel_transform(parts.second, 0.5, st);
    const double c = std::sqrt(2.0 * detail::pi_d());
    std::vector<std::complex<double>> vals(st.y_grid.size());
    for (std::size_t i = 0; i < st.y_grid.size(); ++i)
        vals[i] = c * (fe.values.value(i) +
                       std::complex<double>(0.0, 1.0) * fo.values.value(i));
    SampledFunction out(st.y_grid, std::move(vals), Interp::PiecewiseLinear);
    out.set_source("fourier-1d");
    return out;
}

// Radial profile of the n-dimensional Fourier transform of f0(|x|):
//   |y|^{(n-1)/2} \hat f(y) = (2 pi)^{n/2} H_{n/2-1}[ s^{(n-1)/2} f0(s) ](|y|).
// The normalization matches \hat f(y) = \int f e^{ix.y} dx and is pinned by
// the Gaussian pair in the tests.
inline SampledFunction radial_fourier(const SampledFunction& f0, int n,
                                      const TransformSettings& st) {
    if (n < 1) throw DomainError("radial_fourier: dimension must be >= 1");
    if (!f0.is_real()) throw DomainError("radial_fourier: radial profile must be real");
    st.validate();
    const double alpha = 0.5 * n - 1.0;
    const double p = 0.5 * (n - 1);
    const double cn = std::pow(2.0 * detail::pi_d(), 0.5 * n);
    std::vector<std::complex<double>> vals(st.y_grid.size());

    if (f0.interp() == Interp::PiecewiseConstantLeft) {
        // step profiles stay exact: the x^p factor folds into the moment power
        // of the cell algebra instead of being sampled
        for (std::size_t i = 0; i < st.y_grid.size(); ++i) {
            const double rho = st.y_grid.node(i);
            auto r = detail::transform_at(f0, alpha, rho, st, true, p);
            vals[i] = cn * std::pow(rho, -p) * r.value;
        }
        SampledFunction out(st.y_grid, std::move(vals), Interp::PiecewiseLinear);
        out.set_source("radial-fourier:n=" + std::to_string(n) + ":" + f0.source());
        return out;
    }

    // smooth profiles: lift x^p into the samples so the higher-order window
    // path stays available
    const Grid& g = f0.grid();
    std::vector<std::complex<double>> lifted(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        lifted[i] = f0.value(i) * std::pow(g.node(i), p);
    SampledFunction gf(g, std::move(lifted), f0.interp());
    if (f0.tails()) {
        TailDescriptor t = *f0.tails();
        if (t.head_kind == TailDescriptor::Kind::Power) t.head_e += p;
        if (t.tail_kind == TailDescriptor::Kind::Power) t.tail_e += p;
        gf.set_tails(t);
    }
    gf.set_source("radial-lift:" + f0.source());

    auto h = hankel_transform(gf, alpha, st);
    for (std::size_t i = 0; i < st.y_grid.size(); ++i)
        vals[i] = cn * std::pow(st.y_grid.node(i), -p) * h.values.value(i);
    SampledFunction out(st.y_grid, std::move(vals), Interp::PiecewiseLinear);
    out.set_source("radial-fourier:n=" + std::to_string(n) + ":" + f0.source());
    return out;
}

namespace detail {

// \int a(x) h(x) dx over a's window, h known at a's nodes.  Per cell each
// factor goes through a cubic fitted to its four nearest node values (step
// data keeps its exact left-constant form), integrated by 4-point Gauss, which
// is exact for the cubic-times-cubic product.  Jumps of step data sit at
// nodes, so every cell sees smooth factors.
inline double pair_window(const SampledFunction& a, const std::vector<double>& h) {
    const Grid& g = a.grid();
    const std::size_t nn = g.size();
    if (h.size() != nn) throw DomainError("pair_window: value count mismatch");
    static const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                 0.8611363115940526};
    static const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                 0.3478548451374538};
    const bool step = a.interp() == Interp::PiecewiseConstantLeft;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < nn; ++i) {
        const std::size_t i0 = i == 0 ? 0 : (i + 2 < nn ? i - 1 : nn - 4);
        const double xa = g.node(i), xb = g.node(i + 1);
        const double va = a.real_value(i);
        const double half = 0.5 * (xb - xa), mid = 0.5 * (xa + xb);
        auto cubic = [&](double x, auto&& val) {
            double out = 0.0;
            for (std::size_t j = i0; j < i0 + 4; ++j) {
                double l = 1.0;
                for (std::size_t l2 = i0; l2 < i0 + 4; ++l2)
                    if (l2 != j) l *= (x - g.node(l2)) / (g.node(j) - g.node(l2));
                out += val(j) * l;
            }
            return out;
        };
        for (int k = 0; k < 4; ++k) {
            const double x = mid + half * gx[k];
            const double hx = cubic(x, [&](std::size_t j) { return h[j]; });
            const double ax = step ? va : cubic(x, [&](std::size_t j) { return a.real_value(j); });
            acc += gw[k] * half * ax * hx;
        }
    }
    return acc;
}

}  // namespace detail

struct ParsevalReport {
    double lhs = 0.0, rhs = 0.0;
    double residual = 0.0;
    double err_budget = 0.0;
};

// |\int f (H G) - \int (H f) G|: zero in exact arithmetic since the kernel is
// symmetric and self-inverse, so the residual reads off the numerical error of
// the whole pipeline.  Each side pairs one function's samples with on-grid
// transform values of the other; below the windows both factors follow their
// power models (the transform behaves like y^{alpha+1/2} there).
inline ParsevalReport parseval_check(const SampledFunction& f, const SampledFunction& G,
                                     double alpha, const TransformSettings& st) {
    if (!f.is_real() || !G.is_real())
        throw DomainError("parseval_check: both functions must be real");
    ParsevalReport rep;
    auto side = [&](const SampledFunction& a, const SampledFunction& b, double& budget) {
        TransformSettings local = st;
        local.y_grid = a.grid();
        auto hb = hankel_transform(b, alpha, local);
        double acc = detail::pair_window(a, hb.values.real_values());
        const Grid& g = a.grid();
        // head band: a ~ c x^e, H b ~ (Hb(front)/front^{alpha+1/2}) x^{alpha+1/2}
        if (a.tails() && a.tails()->head_kind == TailDescriptor::Kind::Power) {
            const double e = a.tails()->head_e, c = a.tails()->head_c;
            const double ch = hb.values.real_value(0) / std::pow(g.front(), alpha + 0.5);
            const double ex = e + alpha + 1.5;
            if (ex > 0.01) {
                const double piece = c * ch * std::pow(g.front(), ex) / ex;
                acc += piece;
                budget += std::abs(piece) * g.front() * g.front() * 4.0;
            }
        }
        // tail band: enters the budget, not the value (every corpus pair the
        // check is meant for decays into its window)
        if (a.tails() && a.tails()->tail_kind == TailDescriptor::Kind::Power)
            budget += std::abs(a.tails()->tail_c * std::pow(g.back(), a.tails()->tail_e) *
                               hb.values.real_value(g.size() - 1) * g.back());
        double mass = 0.0;
        for (std::size_t i = 0; i + 1 < g.size(); ++i)
            mass += std::abs(a.real_value(i)) * (g.node(i + 1) - g.node(i));
        double werr = 0.0;
        for (double e2 : hb.err_est) werr = std::max(werr, e2);
        budget += werr * mass + st.quad_tol;
        const double ratio = g.ratio() - 1.0;
        budget += std::abs(acc) * ratio * ratio * ratio * ratio;
        return acc;
    };
    rep.lhs = side(f, G, rep.err_budget);
    rep.rhs = side(G, f, rep.err_budget);
    rep.residual = std::abs(rep.lhs - rep.rhs);
    return rep;
}

// Partial integrals over the truncation ladder at one evaluation point, with
// the two diagnostics whose decay carries the convergence argument: the
// absolute head integral and the kernel-primitive bound on the tail.
inline TruncationReport truncation_probe(const SampledFunction& f, double alpha, double y,
                                         const TransformSettings& st) {
    st.validate();
    if (!f.is_real()) throw DomainError("truncation_probe: data must be real");
    if (!(y > 0.0)) throw DomainError("truncation_probe: need y > 0");
    using K = TailDescriptor::Kind;
    const Grid& g = f.grid();
    const TailDescriptor t = f.tails() ? *f.tails() : TailDescriptor{};

    // sup of |k0| over its transient, for the integrated-by-parts tail bound
    double k0_sup = 0.0;
    for (double z = 0.5; z <= 60.0; z += 0.5)
        k0_sup = std::max(k0_sup, std::abs(bessel_moment_primitive(alpha, 0.5, z, 1e-8)));
    k0_sup *= 1.05;

    auto abs_head = [&](double m) {
        std::vector<double> pts;
        for (int k = 26; k >= 0; --k) pts.push_back(m * std::exp2(static_cast<double>(-k)));
        for (std::size_t i = 0; i < g.size(); ++i)
            if (g.node(i) > pts.front() && g.node(i) < m) pts.push_back(g.node(i));
        for (double z : bessel_j_zeros_in(alpha, pts.front() * y, m * y)) pts.push_back(z / y);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        auto av = [&](double x) {
            if (x < g.front())
                return t.head_kind == K::Power ? std::abs(t.head_c) * std::pow(x, t.head_e) : 0.0;
            if (x > g.back())
                return t.tail_kind == K::Power ? std::abs(t.tail_c) * std::pow(x, t.tail_e) : 0.0;
            return std::abs(f.eval_real(x));
        };
        return quad::panel_adaptive(
            [&](double x) { return av(x) * std::sqrt(x * y) * std::abs(bessel_j(alpha, x * y)); },
            pts, 1e-8 * (1.0 + m), static_cast<int>(2 * pts.size()) + 800);
    };
    auto tail_bound = [&](double n) {
        double edge, tv;
        if (n < g.back()) {
            edge = std::abs(f.eval_real(n));
            tv = total_variation(f, n, g.back());
            if (t.tail_kind == K::Power) tv += std::abs(t.tail_c) * std::pow(g.back(), t.tail_e);
        } else {
            edge = t.tail_kind == K::Power ? std::abs(t.tail_c) * std::pow(n, t.tail_e) : 0.0;
            tv = edge;
        }
        return k0_sup / y * (edge + tv);
    };

    TruncationReport rep;
    const auto ladder = detail::transform_at(f, alpha, y, st, false);
    for (int j = 0; j <= st.ladder; ++j) {
        TruncationRung r;
        r.m = st.truncation_m * std::pow(4.0, -j);
        r.n = st.truncation_n * std::pow(4.0, j);
        r.partial = ladder.partials[static_cast<std::size_t>(j)];
        r.cauchy = j == 0 ? 0.0 : ladder.cauchy[static_cast<std::size_t>(j) - 1];
        r.head_abs = abs_head(r.m);
        r.tail_bound = tail_bound(r.n);
        rep.rungs.push_back(r);
    }
    for (std::size_t k = 3; k < rep.rungs.size(); ++k) {
        const double d = rep.rungs[k].cauchy, dp = rep.rungs[k - 1].cauchy;
        if (d > dp * (1.0 + 1e-12) + 1e-15) {
            rep.cauchy_decreasing = false;
            rep.note = "Cauchy difference rose at rung " + std::to_string(k);
            break;
        }
    }
    return rep;
}

// Admissibility of the power-weight exponents in the radial reduction:
// gamma = beta + n - 2n/q with n/q - (n+1)/2 < beta < n/q.  The two
// distinguished families: beta = 0 needs q > 2n/(n+1); gamma = 0 needs
// q < 2n/(n-1), with no upper constraint in dimension 1.
struct RadialParams {
    int n = 1;
    double q = 2.0;
    double beta = 0.0;
    double gamma = 0.0;
    bool admissible = false;
    std::string reason;      // names the violated bound when inadmissible
    bool hl_source = false;  // beta = 0 family admissible at this (n, q)
    bool hl_target = false;  // gamma = 0 family admissible at this (n, q)
};

inline RadialParams radial_weight_params(int n, double q, double beta) {
    if (n < 1) throw DomainError("radial_weight_params: dimension must be >= 1");
    if (!(q > 1.0) || !std::isfinite(q))
        throw DomainError("radial_weight_params: need q in (1, inf)");
    RadialParams r;
    r.n = n;
    r.q = q;
    r.beta = beta;
    r.gamma = beta + n - 2.0 * n / q;
    const double lo = n / q - 0.5 * (n + 1.0), hi = n / q;
    if (!(beta > lo))
        r.reason = "beta <= n/q - (n+1)/2";
    else if (!(beta < hi))
        r.reason = "beta >= n/q";
    else
        r.admissible = true;
    r.hl_source = q > 2.0 * n / (n + 1.0);
    r.hl_target = n == 1 || q < 2.0 * n / (n - 1.0);
    return r;
}

// Lebesgue measure of {x in R : |f(x)| > s} seen through linear interpolation
// on the mirrored log grid, the same view even_odd_split takes of f.
inline double line_distribution(const std::function<double(double)>& f, const Grid& grid,
                                double s) {
    if (!(s > 0.0)) throw DomainError("line_distribution: threshold must be positive");
    double acc = 0.0;
    for (double sign : {1.0, -1.0}) {
        double xa = grid.node(0), va = std::abs(f(sign * xa));
        for (std::size_t i = 1; i < grid.size(); ++i) {
            const double xb = grid.node(i), vb = std::abs(f(sign * xb));
            if (va > s && vb > s) {
                acc += xb - xa;
            } else if (va > s || vb > s) {
                const double cross = xa + (s - va) * (xb - xa) / (vb - va);
                acc += va > s ? cross - xa : xb - cross;
            }
            xa = xb;
            va = vb;
        }
    }
    return acc;
}

}  // namespace hankelgm

#pragma once

// Cutoff averages Phi_g(t) = (1/t) int phi(u/t) g(u) du, their maximal
// function MPhi_g(t) = sup_{x >= t} |Phi_g(x)|, smoothness seminorms for
// cutoff admissibility, and the norm comparison ||g|| vs ||MPhi_g||.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hankelgm/errors.hpp"
#include "hankelgm/gm.hpp"
#include "hankelgm/norms.hpp"
#include "hankelgm/quadrature.hpp"
#include "hankelgm/sampled.hpp"

namespace hankelgm {

// Cutoff on (0, infinity): identically 1 on (0, 1), range [0, 1], support
// inside (0, 1 + epsilon/2).  Sharp is the indicator of (0, 1); the smooth
// bump glues the plateau to zero with the standard exp(-1/t) transition, so
// it has derivatives of every order.
struct CutoffSpec {
    enum class Shape { Sharp, SmoothBump };
    Shape shape = Shape::Sharp;
    double epsilon = 0.0;

    static CutoffSpec sharp() { return {}; }
    static CutoffSpec smooth(double epsilon) {
        if (!(epsilon > 0.0)) throw DomainError("CutoffSpec::smooth: need epsilon > 0");
        CutoffSpec c;
        c.shape = Shape::SmoothBump;
        c.epsilon = epsilon;
        return c;
    }

    double support_end() const { return shape == Shape::Sharp ? 1.0 : 1.0 + 0.5 * epsilon; }

    double operator()(double s) const {
        if (s <= 0.0) return 0.0;
        if (shape == Shape::Sharp) return s < 1.0 ? 1.0 : 0.0;
        if (s <= 1.0) return 1.0;
        const double u = (s - 1.0) / (0.5 * epsilon);
        if (u >= 1.0) return 0.0;
        const double a = std::exp(-1.0 / u);
        const double b = std::exp(-1.0 / (1.0 - u));
        return b / (a + b);
    }
};

namespace detail {

// signed edge-model integral sign * c * u^e over [lo, hi]
inline double model_integral(double sign, double c, double e, double lo, double hi) {
    if (hi <= lo) return 0.0;
    if (e == -1.0) return sign * c * std::log(hi / lo);
    return sign * c * (std::pow(hi, e + 1.0) - std::pow(lo, e + 1.0)) / (e + 1.0);
}

}  // namespace detail

// (1/t) int_0^inf phi(u/t) g(u) du.  Window mass integrates exactly on the
// plateau; the transition zone of a smooth cutoff goes through quadrature.
// Mass outside the window comes from the edge models: a power head must be
// integrable at 0, a reach beyond the window end needs a tail model, and a
// head of kind None contributes nothing (the window edge is the best we know).
// Edge models carry |g| only, so their sign is taken from the nearest sample.
inline double phi_average(const SampledFunction& g, const CutoffSpec& phi, double t) {
    if (!(t > 0.0)) throw DomainError("phi_average: need t > 0");
    if (!g.is_real()) throw DomainError("phi_average: data must be real");
    const Grid& gr = g.grid();
    const double front = gr.front(), back = gr.back();
    const double reach = t * phi.support_end();

    using K = TailDescriptor::Kind;
    TailDescriptor tails;
    if (g.tails()) tails = *g.tails();
    if (reach > back * (1.0 + 1e-12) && tails.tail_kind == K::None)
        throw DomainError("phi_average: t reaches x=" + std::to_string(reach) +
                          " beyond the window and no tail model is present");
    if (tails.head_kind == K::Power && tails.head_e <= -1.0)
        throw DomainError("phi_average: head model x^" + std::to_string(tails.head_e) +
                          " is not integrable at 0");

    const double head_sign = g.real_value(0) < 0.0 ? -1.0 : 1.0;
    const double tail_sign = g.real_value(gr.size() - 1) < 0.0 ? -1.0 : 1.0;

    // plateau (0, t]: head model + window + tail model pieces
    double acc = 0.0;
    if (tails.head_kind == K::Power)
        acc += detail::model_integral(head_sign, tails.head_c, tails.head_e, 0.0,
                                      std::min(front, t));
    if (t > front) acc += integrate_real(g, front, std::min(t, back));
    if (t > back && tails.tail_kind == K::Power)
        acc += detail::model_integral(tail_sign, tails.tail_c, tails.tail_e, back, t);

    if (phi.shape == CutoffSpec::Shape::SmoothBump && reach > t) {
        // transition zone (t, t(1+eps/2)); panels split at window edges and
        // at the grid nodes inside the zone
        auto value = [&](double u) {
            if (u < front)
                return tails.head_kind == K::Power ? head_sign * tails.head_c * std::pow(u, tails.head_e)
                                                   : 0.0;
            if (u > back)
                return tails.tail_kind == K::Power ? tail_sign * tails.tail_c * std::pow(u, tails.tail_e)
                                                   : 0.0;
            return g.eval_real(u);
        };
        std::vector<double> pts{t};
        for (double edge : {front, back})
            if (edge > t && edge < reach) pts.push_back(edge);
        if (reach > front && t < back) {
            const double lo = std::max(t, front), hi = std::min(reach, back);
            for (std::size_t i = 0; i < gr.size(); ++i)
                if (gr.node(i) > lo && gr.node(i) < hi) pts.push_back(gr.node(i));
        }
        pts.push_back(reach);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        acc += quad::panel_adaptive([&](double u) { return phi(u / t) * value(u); }, pts,
                                    1e-13 * (1.0 + std::abs(acc)));
    }
    return acc / t;
}

// sup_{x >= t} |Phi_g(x)| over the evaluation set {t} + grid nodes above t.
// Beyond the window Phi decays like (signed mass)/x, so its sup is already
// attained at the window end, which the node set covers.
inline double maximal_average(const SampledFunction& g, const CutoffSpec& phi, double t) {
    if (!(t > 0.0)) throw DomainError("maximal_average: need t > 0");
    const Grid& gr = g.grid();
    double sup = std::abs(phi_average(g, phi, t));
    for (std::size_t i = 0; i < gr.size(); ++i)
        if (gr.node(i) > t) sup = std::max(sup, std::abs(phi_average(g, phi, gr.node(i))));
    return sup;
}

// Phi_g evaluated at every node of g's grid.
inline SampledFunction average_profile(const SampledFunction& g, const CutoffSpec& phi) {
    const Grid& gr = g.grid();
    std::vector<std::complex<double>> values(gr.size());
    for (std::size_t i = 0; i < gr.size(); ++i) values[i] = phi_average(g, phi, gr.node(i));
    SampledFunction out(gr, std::move(values), Interp::PiecewiseLinear);
    out.set_source("cutoff-average-of:" + g.source());
    return out;
}

// MPhi_g on g's grid: the suffix maximum of |Phi| over the nodes, which is
// nonincreasing by construction.  Edge models for the norm layer: below the
// window MPhi continues with the dominant head behaviour (constant when the
// head average decays or is unknown-free), above it Phi ~ mass/x gives a 1/x
// tail.
inline SampledFunction maximal_profile(const SampledFunction& g, const CutoffSpec& phi) {
    const Grid& gr = g.grid();
    std::vector<std::complex<double>> values(gr.size());
    for (std::size_t i = 0; i < gr.size(); ++i) values[i] = std::abs(phi_average(g, phi, gr.node(i)));
    for (std::size_t i = gr.size() - 1; i-- > 0;)
        values[i] = std::max(values[i].real(), values[i + 1].real());

    const double at_back = std::abs(phi_average(g, phi, gr.back()));
    SampledFunction out(gr, std::move(values), Interp::PiecewiseLinear);
    out.set_source("maximal-average-of:" + g.source());

    using K = TailDescriptor::Kind;
    TailDescriptor t;
    t.tail_kind = K::Power;
    t.tail_c = at_back * gr.back();
    t.tail_e = -1.0;
    const TailDescriptor src = g.tails() ? *g.tails() : TailDescriptor{};
    if (src.head_kind == K::None) {
        t.head_kind = K::None;
    } else if (src.head_kind == K::Power && src.head_e < 0.0) {
        // |Phi(t)| = c t^e / (e+1) below the window, taking over from the
        // interior sup right at the edge
        t.head_kind = K::Power;
        t.head_c = src.head_c / (src.head_e + 1.0);
        t.head_e = src.head_e;
    } else {
        t.head_kind = K::Power;
        t.head_c = out.real_value(0);
        t.head_e = 0.0;
    }
    out.set_tails(t);
    return out;
}

// gamma_{m,n}(phi) = sup_x |x^m (x^{-1} d/dx)^n (x^{-alpha-1/2} phi(x))|.
// In the variable v = x^2 the operator (x^{-1} d/dx)^n is 2^n (d/dv)^n, so
// order-2 stencils with an absolute step stay conditioned all the way down to
// v -> 0 (one-sided forms take over when centred points would cross zero).
// The sup is chased over widening log windows with a shrinking step, with a
// local sub-scan around the winning node; a sup that keeps growing as the
// window extends reads as +infinity.
inline double seminorm_gamma(const std::function<double(double)>& phi, double alpha, int m, int n) {
    if (m < 0 || n < 0) throw DomainError("seminorm_gamma: need m, n >= 0");
    if (n > 4) throw DomainError("seminorm_gamma: derivative order capped at 4");

    const long double expo = (-static_cast<long double>(alpha) - 0.5L) / 2.0L;
    auto psi = [&](long double v) -> long double {
        return std::pow(v, expo) * static_cast<long double>(phi(static_cast<double>(std::sqrt(v))));
    };
    auto deriv = [&](long double v, long double h) -> long double {
        auto f = [&](int j) { return psi(v + j * h); };
        switch (n) {
            case 0:
                return psi(v);
            case 1:
                if (v > 1.5L * h) return (f(1) - f(-1)) / (2.0L * h);
                return (-3.0L * f(0) + 4.0L * f(1) - f(2)) / (2.0L * h);
            case 2:
                if (v > 1.5L * h) return (f(1) - 2.0L * f(0) + f(-1)) / (h * h);
                return (2.0L * f(0) - 5.0L * f(1) + 4.0L * f(2) - f(3)) / (h * h);
            case 3:
                if (v > 2.5L * h)
                    return (f(2) - 2.0L * f(1) + 2.0L * f(-1) - f(-2)) / (2.0L * h * h * h);
                return (-5.0L * f(0) + 18.0L * f(1) - 24.0L * f(2) + 14.0L * f(3) - 3.0L * f(4)) /
                       (2.0L * h * h * h);
            default:
                if (v > 2.5L * h)
                    return (f(2) - 4.0L * f(1) + 6.0L * f(0) - 4.0L * f(-1) + f(-2)) /
                           (h * h * h * h);
                return (3.0L * f(0) - 14.0L * f(1) + 26.0L * f(2) - 24.0L * f(3) + 11.0L * f(4) -
                        2.0L * f(5)) /
                       (h * h * h * h);
        }
    };

    double prev = -1.0;
    for (int stage = 0; stage < 5; ++stage) {
        const double e_lo = -6.0 - 4.0 * stage, e_hi = 3.0 + stage;
        const int count = 96 << stage;
        const long double h = std::exp2(-6.0L - 2.0L * stage);
        auto weighted = [&](double x) -> double {
            const long double v = static_cast<long double>(x) * x;
            const long double d = static_cast<long double>(1 << n) * deriv(v, h);
            return std::abs(static_cast<double>(
                std::pow(static_cast<long double>(x), static_cast<long double>(m)) * d));
        };
        // returns the scan max and narrows [lo, hi] to the bracket around it
        auto scan = [&](double& lo, double& hi, int steps) -> double {
            double best = -1.0;
            int at = 0;
            for (int i = 0; i <= steps; ++i) {
                const double x = lo * std::pow(hi / lo, static_cast<double>(i) / steps);
                const double a = weighted(x);
                if (!std::isfinite(a)) return kInf;
                if (a > best) {
                    best = a;
                    at = i;
                }
            }
            const double l = lo, r = hi / lo;
            lo = l * std::pow(r, static_cast<double>(std::max(at - 1, 0)) / steps);
            hi = l * std::pow(r, static_cast<double>(std::min(at + 1, steps)) / steps);
            return best;
        };
        double lo = std::exp2(e_lo), hi = std::exp2(e_hi);
        double sup = scan(lo, hi, count);
        for (int round = 0; round < 2 && std::isfinite(sup); ++round)
            sup = std::max(sup, scan(lo, hi, 32));
        if (!std::isfinite(sup)) return kInf;
        if (prev >= 0.0 && sup <= prev * 1.02 + 1e-300) return sup;
        prev = sup;
    }
    return kInf;
}

// ||g||_{L^q(w)} vs ||MPhi_g||_{L^q(w)} under the hypotheses that make the
// comparison meaningful: a scale-ratio certificate for g, decay at both
// window edges, and a doubling weight.
struct MaximalBoundReport {
    double norm_g = 0.0;
    double norm_mphi = 0.0;
    double ratio = 0.0;        // norm_g / norm_mphi, the certified direction
    double gm_constant = 0.0;  // C backing the hypothesis
    double epsilon = 0.0;      // cutoff slack in use
    NormParts parts_g, parts_mphi;
};

inline MaximalBoundReport maximal_bound_check(const SampledFunction& g, const WeightFunction& w,
                                              double q, const CutoffSpec& phi, double r = 2.0) {
    if (!g.is_real()) throw DomainError("maximal_bound_check: data must be real");
    auto cert = certify_gm(g, 2.0);
    if (!cert.is_gm)
        throw DomainError("maximal_bound_check: scale-ratio certificate failed (" + cert.note + ")");

    const Grid& gr = g.grid();
    double sup = 0.0, head_sup = 0.0;
    for (std::size_t i = 0; i < gr.size(); ++i) {
        const double a = std::abs(g.real_value(i));
        sup = std::max(sup, a);
        head_sup = std::max(head_sup, std::pow(gr.node(i), r) * a);
    }
    if (sup == 0.0) throw DomainError("maximal_bound_check: data vanishes identically");
    if (std::abs(g.real_value(gr.size() - 1)) > 1e-6 * sup)
        throw DomainError("maximal_bound_check: data does not vanish at the window end");
    if (std::pow(gr.front(), r) * std::abs(g.real_value(0)) > 0.01 * head_sup)
        throw DomainError("maximal_bound_check: x^r g does not vanish at 0 for r=" +
                          std::to_string(r));
    // any positive weight measures finite on a window, so certification needs
    // an explicit cap; 2^10 admits every power weight of practical exponent
    const double doubling = w.doubling_constant(gr.front(), gr.back());
    if (doubling > 1024.0)
        throw DomainError("maximal_bound_check: weight is not doubling (measured constant " +
                          std::to_string(doubling) + ")");

    MaximalBoundReport rep;
    rep.gm_constant = cert.constant;
    rep.epsilon = phi.epsilon;
    rep.norm_g = weighted_q_norm(g, w, q, &rep.parts_g);
    auto mphi = maximal_profile(g, phi);
    rep.norm_mphi = weighted_q_norm(mphi, w, q, &rep.parts_mphi);
    rep.ratio = rep.norm_g / rep.norm_mphi;
    return rep;
}

}  // namespace hankelgm

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hankelgm/quadrature.hpp"
#include "hankelgm/sampled.hpp"

namespace hankelgm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// 1/p with the usual convention 1/infinity = 0.
inline double reciprocal(double p) {
    if (!(p > 0.0)) throw DomainError("reciprocal: exponent must be positive (or infinity)");
    return std::isinf(p) ? 0.0 : 1.0 / p;
}

// Weight on (0, infinity).  Power weights carry their exponent so norm code
// can add closed-form head/tail contributions; anything else integrates only
// across the sampling window.
class WeightFunction {
public:
    static WeightFunction power(double s) {
        WeightFunction w;
        w.is_power_ = true;
        w.s_ = s;
        w.name_ = "x^" + std::to_string(s);
        return w;
    }

    static WeightFunction custom(std::function<double(double)> fn, std::string name) {
        WeightFunction w;
        w.fn_ = std::move(fn);
        w.name_ = std::move(name);
        return w;
    }

    double operator()(double x) const { return is_power_ ? std::pow(x, s_) : fn_(x); }
    bool is_power() const { return is_power_; }
    double exponent() const {
        if (!is_power_) throw DomainError("exponent: weight is not a power");
        return s_;
    }
    const std::string& name() const { return name_; }

    // Measured doubling bound sup w(2x)/w(x) over a log sweep of [lo, hi].
    // For x^s this is 2^s up to rounding.
    double doubling_constant(double lo, double hi, int samples = 400) const {
        if (!(lo > 0.0) || !(hi > lo)) throw DomainError("doubling_constant: need 0 < lo < hi");
        double sup = 0.0;
        for (int i = 0; i <= samples; ++i) {
            const double x = lo * std::pow(hi / lo, static_cast<double>(i) / samples);
            const double wx = (*this)(x);
            if (!(wx > 0.0)) throw DomainError("doubling_constant: weight must be positive");
            sup = std::max(sup, (*this)(2.0 * x) / wx);
        }
        return sup;
    }

private:
    bool is_power_ = false;
    double s_ = 0.0;
    std::function<double(double)> fn_;
    std::string name_;
};

// Contributions to the q-th power of a norm (or to the sup when q = infinity).
// head/tail are closed-form pieces from the attached edge models; _known goes
// false when no model is available and the window result is all there is.
struct NormParts {
    double window = 0.0, head = 0.0, tail = 0.0;
    bool head_known = true, tail_known = true;
};

namespace detail {

// int_a^b x^s dx, 0 <= a < b, log branch at s = -1 (a > 0 then)
inline double power_integral(double a, double b, double s) {
    if (s == -1.0) return std::log(b / a);
    const double e = s + 1.0;
    return (std::pow(b, e) - std::pow(a, e)) / e;
}

// measure of { x in (0, x0) : c x^e > s } under the head model
inline double head_measure(const TailDescriptor& t, double x0, double s) {
    if (t.head_kind != TailDescriptor::Kind::Power || !(t.head_c > 0.0) || !(x0 > 0.0)) return 0.0;
    const double c = t.head_c, e = t.head_e;
    if (e < 0.0) return std::min(x0, std::pow(s / c, 1.0 / e));
    if (e == 0.0) return s < c ? x0 : 0.0;
    return std::max(0.0, x0 - std::min(x0, std::pow(s / c, 1.0 / e)));
}

// measure of { x > x1 : c x^e > s } under the tail model
inline double tail_measure(const TailDescriptor& t, double x1, double s) {
    if (t.tail_kind != TailDescriptor::Kind::Power || !(t.tail_c > 0.0)) return 0.0;
    const double c = t.tail_c, e = t.tail_e;
    if (e < 0.0) return std::max(0.0, std::pow(s / c, 1.0 / e) - x1);
    if (e == 0.0) return s < c ? kInf : 0.0;
    return kInf;  // growing tail exceeds every level on an unbounded set
}

}  // namespace detail

// Lebesgue distribution function d(s) = |{ x : |f(x)| > s }| of real sampled
// data.  Inside the window the cell inverse is computed exactly (per cell |f|
// is linear or constant in x, so d is piecewise linear in s between the sorted
// node values); outside it the attached edge models contribute in closed form.
// Built once, evaluated in O(log n).
class DistributionProfile {
public:
    explicit DistributionProfile(const SampledFunction& f) {
        if (!f.is_real()) throw DomainError("DistributionProfile: data must be real");
        build_pieces(f);
        build_sweep();
        if (f.tails()) td_ = *f.tails();
        x_lo_ = f.grid().front();
        x_hi_ = f.grid().back();
    }

    // window part only
    double window(double s) const {
        if (!(s > 0.0)) throw DomainError("distribution: level must be positive");
        if (bounds_.empty() || s >= bounds_.back()) return 0.0;
        const std::size_t j = static_cast<std::size_t>(
            std::upper_bound(bounds_.begin(), bounds_.end(), s) - bounds_.begin());
        return a_[j] - b_[j] * s;
    }

    double operator()(double s) const {
        return window(s) + detail::head_measure(td_, x_lo_, s) + detail::tail_measure(td_, x_hi_, s);
    }

    // sorted positive node levels where the window part changes slope
    const std::vector<double>& levels() const { return bounds_; }
    double window_measure() const { return bounds_.empty() ? 0.0 : a_[0]; }
    const TailDescriptor& edge_models() const { return td_; }
    double window_lo() const { return x_lo_; }
    double window_hi() const { return x_hi_; }

private:
    struct Piece {
        double w, lo, hi;  // |f| runs linearly from lo to hi over width w
    };

    void build_pieces(const SampledFunction& f) {
        const bool steps = f.interp() == Interp::PiecewiseConstantLeft;
        f.for_each_cell(f.grid().front(), f.grid().back(),
                        [&](double xa, double xb, std::complex<double> cva, std::complex<double> cvb) {
                            const double va = cva.real(), vb = cvb.real(), w = xb - xa;
                            if (steps) {
                                const double v = std::abs(va);
                                if (v > 0.0) pieces_.push_back({w, v, v});
                                return;
                            }
                            if (va == 0.0 && vb == 0.0) return;
                            if ((va < 0.0) != (vb < 0.0) && va != 0.0 && vb != 0.0) {
                                // sign change: split at the root so |f| stays linear
                                const double t = va / (va - vb);
                                pieces_.push_back({w * t, 0.0, std::abs(va)});
                                pieces_.push_back({w * (1.0 - t), 0.0, std::abs(vb)});
                                return;
                            }
                            const double lo = std::min(std::abs(va), std::abs(vb));
                            const double hi = std::max(std::abs(va), std::abs(vb));
                            if (hi > 0.0) pieces_.push_back({w, lo, hi});
                        });
    }

    // Sweep the levels downward, tracking which pieces are fully above s and
    // which straddle it.  Slot j covers s in [bounds_[j-1], bounds_[j]) (slot 0
    // runs down to 0) with d_win(s) = a_[j] - b_[j] s.
    void build_sweep() {
        for (const Piece& p : pieces_) {
            if (p.lo > 0.0) bounds_.push_back(p.lo);
            if (p.hi > 0.0) bounds_.push_back(p.hi);
        }
        std::sort(bounds_.begin(), bounds_.end());
        bounds_.erase(std::unique(bounds_.begin(), bounds_.end()), bounds_.end());
        const std::size_t m = bounds_.size();
        a_.assign(m + 1, 0.0);
        b_.assign(m + 1, 0.0);
        if (m == 0) return;

        std::vector<std::size_t> by_hi(pieces_.size()), by_lo(pieces_.size());
        for (std::size_t i = 0; i < pieces_.size(); ++i) by_hi[i] = by_lo[i] = i;
        auto hi_of = [&](std::size_t i) { return pieces_[i].hi; };
        auto lo_of = [&](std::size_t i) { return pieces_[i].lo; };
        std::sort(by_hi.begin(), by_hi.end(), [&](auto x, auto y) { return hi_of(x) > hi_of(y); });
        std::sort(by_lo.begin(), by_lo.end(), [&](auto x, auto y) { return lo_of(x) > lo_of(y); });

        double full = 0.0, lin_a = 0.0, lin_b = 0.0;
        std::size_t ih = 0, il = 0;
        for (std::size_t j = m; j-- > 0;) {
            const double v = bounds_[j];
            // pieces whose top is v start straddling below v
            for (; ih < by_hi.size() && hi_of(by_hi[ih]) == v; ++ih) {
                const Piece& p = pieces_[by_hi[ih]];
                if (p.lo < p.hi) {
                    lin_a += p.w * p.hi / (p.hi - p.lo);
                    lin_b += p.w / (p.hi - p.lo);
                }
            }
            // pieces whose bottom is v become fully counted below v
            for (; il < by_lo.size() && lo_of(by_lo[il]) == v; ++il) {
                const Piece& p = pieces_[by_lo[il]];
                if (p.lo < p.hi) {
                    lin_a -= p.w * p.hi / (p.hi - p.lo);
                    lin_b -= p.w / (p.hi - p.lo);
                }
                full += p.w;
            }
            a_[j] = full + lin_a;
            b_[j] = lin_b;
        }
        // pieces starting at 0 straddle all the way down; slot 0 keeps them
    }

    std::vector<Piece> pieces_;
    std::vector<double> bounds_;
    std::vector<double> a_, b_;
    TailDescriptor td_;
    double x_lo_ = 0.0, x_hi_ = 0.0;
};

inline double distribution_function(const SampledFunction& f, double s) {
    return DistributionProfile(f)(s);
}

// Decreasing rearrangement of the window content as an explicit step function
// on [0, measure of support].  Exact for step data; linear cells are diced
// into `refine` constant bits first.  Mass outside the window is not carried
// over (a warning records that when edge models say it exists).
inline SampledFunction decreasing_rearrangement(const SampledFunction& f, int refine = 32) {
    if (!f.is_real()) throw DomainError("decreasing_rearrangement: data must be real");
    if (refine < 1) throw DomainError("decreasing_rearrangement: refine must be >= 1");

    std::vector<std::pair<double, double>> bits;  // (value, width)
    auto add_linear = [&](double a, double b, double w) {
        // |f| runs linearly a -> b over width w; midpoint dicing
        for (int k = 0; k < refine; ++k) {
            const double v = a + (b - a) * (k + 0.5) / refine;
            if (v > 0.0) bits.emplace_back(v, w / refine);
        }
    };
    const bool steps = f.interp() == Interp::PiecewiseConstantLeft;
    f.for_each_cell(f.grid().front(), f.grid().back(),
                    [&](double xa, double xb, std::complex<double> cva, std::complex<double> cvb) {
                        const double va = cva.real(), vb = cvb.real(), w = xb - xa;
                        if (steps) {
                            if (std::abs(va) > 0.0) bits.emplace_back(std::abs(va), w);
                            return;
                        }
                        if (va == 0.0 && vb == 0.0) return;
                        if ((va < 0.0) != (vb < 0.0) && va != 0.0 && vb != 0.0) {
                            const double t = va / (va - vb);
                            add_linear(std::abs(va), 0.0, w * t);
                            add_linear(0.0, std::abs(vb), w * (1.0 - t));
                        } else if (std::abs(va) == std::abs(vb)) {
                            bits.emplace_back(std::abs(va), w);
                        } else {
                            add_linear(std::abs(va), std::abs(vb), w);
                        }
                    });

    std::sort(bits.begin(), bits.end(), [](const auto& x, const auto& y) { return x.first > y.first; });

    std::vector<double> nodes{0.0};
    std::vector<double> values;
    for (const auto& [v, w] : bits) {
        if (!values.empty() && values.back() == v) {
            nodes.back() += w;  // merge equal levels into one step
        } else {
            values.push_back(v);
            nodes.push_back(nodes.back() + w);
        }
    }
    if (values.empty()) {
        nodes = {0.0, 1.0};
        values = {0.0};
    }
    values.push_back(0.0);  // level beyond the support

    SampledFunction out = SampledFunction::real(Grid::explicit_nodes(std::move(nodes)),
                                                std::move(values), Interp::PiecewiseConstantLeft);
    out.set_source("rearrangement-of:" + f.source());
    out.set_tails(TailDescriptor::zero());
    if (f.tails()) {
        const auto& t = *f.tails();
        if (t.head_kind == TailDescriptor::Kind::Power || t.tail_kind == TailDescriptor::Kind::Power)
            out.add_warning("rearrangement covers the window only; modelled mass outside it is dropped");
    }
    return out;
}

// (int |f|^q w dx)^(1/q) for finite q.  Window cells integrate exactly (steps)
// or by a 15-point rule per sign-constant piece; power weights pick up
// closed-form head/tail terms from the edge models, which may be +infinity.
inline double weighted_q_norm(const SampledFunction& f, const WeightFunction& w, double q,
                              NormParts* parts = nullptr) {
    if (!f.is_real()) throw DomainError("weighted_q_norm: data must be real");
    if (!(q > 0.0) || std::isinf(q)) throw DomainError("weighted_q_norm: need finite q > 0");

    const bool steps = f.interp() == Interp::PiecewiseConstantLeft;
    double window = 0.0;
    auto piece = [&](double xa, double xb, double va, double vb) {
        // sign-constant piece, |f| linear va -> vb
        if (va == 0.0 && vb == 0.0) return;
        if (va == vb) {
            window += std::pow(std::abs(va), q) *
                      (w.is_power() ? detail::power_integral(xa, xb, w.exponent())
                                    : quad::gk15(w, xa, xb).value);
            return;
        }
        const double m = (vb - va) / (xb - xa);
        window += quad::gk15([&](double x) { return std::pow(std::abs(va + m * (x - xa)), q) * w(x); },
                             xa, xb)
                      .value;
    };
    f.for_each_cell(f.grid().front(), f.grid().back(),
                    [&](double xa, double xb, std::complex<double> cva, std::complex<double> cvb) {
                        const double va = cva.real(), vb = cvb.real();
                        if (steps) {
                            piece(xa, xb, va, va);
                        } else if ((va < 0.0) != (vb < 0.0) && va != 0.0 && vb != 0.0) {
                            const double t = va / (va - vb), xm = xa + t * (xb - xa);
                            piece(xa, xm, va, 0.0);
                            piece(xm, xb, 0.0, vb);
                        } else {
                            piece(xa, xb, va, vb);
                        }
                    });

    NormParts np;
    np.window = window;
    if (f.tails() && w.is_power()) {
        const TailDescriptor& t = *f.tails();
        const double sigma = w.exponent();
        const double x0 = f.grid().front(), x1 = f.grid().back();
        if (t.head_kind == TailDescriptor::Kind::Power && t.head_c > 0.0 && x0 > 0.0) {
            const double ex = q * t.head_e + sigma + 1.0;
            np.head = ex > 0.0 ? std::pow(t.head_c, q) * std::pow(x0, ex) / ex : kInf;
        } else if (t.head_kind == TailDescriptor::Kind::None) {
            np.head_known = false;
        }
        if (t.tail_kind == TailDescriptor::Kind::Power && t.tail_c > 0.0) {
            const double ex = q * t.tail_e + sigma + 1.0;
            np.tail = ex < 0.0 ? std::pow(t.tail_c, q) * std::pow(x1, ex) / (-ex) : kInf;
        } else if (t.tail_kind == TailDescriptor::Kind::None) {
            np.tail_known = false;
        }
    } else if (f.tails()) {
        // non-power weight: only a zero model guarantees nothing is missing
        np.head_known = f.tails()->head_kind == TailDescriptor::Kind::Zero;
        np.tail_known = f.tails()->tail_kind == TailDescriptor::Kind::Zero;
    } else {
        np.head_known = np.tail_known = false;
    }
    if (parts) *parts = np;
    return std::pow(np.window + np.head + np.tail, 1.0 / q);
}

// Norm on the scale indexed by (p, q): weight x^(q/p - 1) for finite q, and
// sup x^(1/p) |f(x)| when q = infinity.
inline double weighted_norm(const SampledFunction& f, double p, double q,
                            NormParts* parts = nullptr) {
    const double rp = reciprocal(p);
    if (!std::isinf(q)) return weighted_q_norm(f, WeightFunction::power(q * rp - 1.0), q, parts);

    if (!f.is_real()) throw DomainError("weighted_norm: data must be real");
    const bool steps = f.interp() == Interp::PiecewiseConstantLeft;
    double window = 0.0;
    auto piece = [&](double xa, double xb, double va, double vb) {
        window = std::max({window, std::pow(xa, rp) * std::abs(va), std::pow(xb, rp) * std::abs(vb)});
        if (va == vb) {
            window = std::max(window, std::pow(xb, rp) * std::abs(va));
            return;
        }
        // interior critical point of x^r (A + B x)
        const double B = (vb - va) / (xb - xa), A = va - B * xa;
        if (B != 0.0 && rp > 0.0) {
            const double xc = -rp * A / ((rp + 1.0) * B);
            if (xc > xa && xc < xb)
                window = std::max(window, std::pow(xc, rp) * std::abs(A + B * xc));
        }
    };
    f.for_each_cell(f.grid().front(), f.grid().back(),
                    [&](double xa, double xb, std::complex<double> cva, std::complex<double> cvb) {
                        const double va = cva.real(), vb = cvb.real();
                        piece(xa, xb, va, steps ? va : vb);
                    });

    NormParts np;
    np.window = window;
    if (f.tails()) {
        const TailDescriptor& t = *f.tails();
        const double x0 = f.grid().front(), x1 = f.grid().back();
        if (t.head_kind == TailDescriptor::Kind::Power && t.head_c > 0.0 && x0 > 0.0) {
            const double ex = t.head_e + rp;
            np.head = ex < 0.0 ? kInf : (ex == 0.0 ? t.head_c : t.head_c * std::pow(x0, ex));
        } else if (t.head_kind == TailDescriptor::Kind::None) {
            np.head_known = false;
        }
        if (t.tail_kind == TailDescriptor::Kind::Power && t.tail_c > 0.0) {
            const double ex = t.tail_e + rp;
            np.tail = ex > 0.0 ? kInf : (ex == 0.0 ? t.tail_c : t.tail_c * std::pow(x1, ex));
        } else if (t.tail_kind == TailDescriptor::Kind::None) {
            np.tail_known = false;
        }
    } else {
        np.head_known = np.tail_known = false;
    }
    if (parts) *parts = np;
    return std::max({np.window, np.head, np.tail});
}

enum class LorentzRoute { Auto, Rearrangement, Distribution };

// Lorentz norm via the rearrangement formula (weighted norm of f*) or the
// distribution formula p^(1/q) (int (s d(s)^(1/p))^q ds/s)^(1/q).  Auto means
// Distribution, which is exact for the interpolant on both interpretation
// classes; the rearrangement route is the independent cross-check and is
// restricted to window-supported data.
inline double lorentz_norm(const SampledFunction& f, double p, double q,
                           LorentzRoute route = LorentzRoute::Auto, NormParts* parts = nullptr,
                           int refine = 32) {
    const double rp = reciprocal(p);
    if (std::isinf(p) && !std::isinf(q))
        throw DomainError("lorentz_norm: p = infinity needs q = infinity");

    // a bounded power head (e >= 0) only hides vanishing bottom levels below
    // the window, which the rearrangement can drop; a singular head or a power
    // tail carries real mass the window route cannot see
    bool window_supported = true;
    if (f.tails()) {
        const auto& t = *f.tails();
        if (t.head_kind == TailDescriptor::Kind::Power && t.head_e < 0.0) window_supported = false;
        if (t.tail_kind == TailDescriptor::Kind::Power) window_supported = false;
    }
    if (route == LorentzRoute::Auto) route = LorentzRoute::Distribution;
    if (route == LorentzRoute::Rearrangement) {
        if (!window_supported)
            throw DomainError(
                "lorentz_norm: rearrangement route needs window-supported data; use the "
                "distribution route");
        return weighted_norm(decreasing_rearrangement(f, refine), p, q, parts);
    }

    DistributionProfile prof(f);
    const TailDescriptor& t = prof.edge_models();
    const double x0 = prof.window_lo(), x1 = prof.window_hi();
    const bool head_pow = t.head_kind == TailDescriptor::Kind::Power && t.head_c > 0.0;
    const bool tail_pow = t.tail_kind == TailDescriptor::Kind::Power && t.tail_c > 0.0;
    NormParts np;
    np.head_known = t.head_kind != TailDescriptor::Kind::None;
    np.tail_known = t.tail_kind != TailDescriptor::Kind::None;
    auto done = [&](double value) {
        if (parts) *parts = np;
        return value;
    };

    // panel skeleton in s: window levels plus model transition levels
    std::vector<double> pts = prof.levels();
    if (head_pow) pts.push_back(t.head_e == 0.0 ? t.head_c : t.head_c * std::pow(x0, t.head_e));
    if (tail_pow && t.tail_e < 0.0) pts.push_back(t.tail_c * std::pow(x1, t.tail_e));
    if (t.tail_kind == TailDescriptor::Kind::Power && t.tail_e >= 0.0 && t.tail_c > 0.0)
        pts.push_back(t.tail_c);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    while (!pts.empty() && !(pts.front() > 0.0)) pts.erase(pts.begin());
    if (pts.empty()) return done(0.0);
    const double s_min = pts.front(), s_max = pts.back();

    if (std::isinf(q)) {
        // sup_s s d(s)^(1/p)
        if (rp == 0.0) {
            // plain essential sup: highest window level with positive measure,
            // or the model's own sup over the unsampled regions
            double sup = 0.0;
            for (double s : pts)
                if (prof.window(s * (1.0 - 1e-12)) > 0.0) sup = std::max(sup, s);
            np.window = sup;
            if (head_pow)
                np.head = t.head_e < 0.0 ? kInf
                                         : (t.head_e == 0.0 ? t.head_c
                                                            : t.head_c * std::pow(x0, t.head_e));
            if (tail_pow)
                np.tail = t.tail_e > 0.0 ? kInf
                                         : (t.tail_e == 0.0 ? t.tail_c
                                                            : t.tail_c * std::pow(x1, t.tail_e));
            return done(std::max({np.window, np.head, np.tail}));
        }
        if (tail_pow) {
            if (t.tail_e >= 0.0) { np.tail = kInf; return done(kInf); }
            const double beta = 1.0 + 1.0 / (t.tail_e * p);
            if (beta < 0.0) { np.tail = kInf; return done(kInf); }
            if (beta == 0.0) np.tail = std::pow(t.tail_c, -1.0 / (t.tail_e * p));
        }
        if (head_pow && t.head_e < 0.0) {
            const double beta = 1.0 + 1.0 / (t.head_e * p);
            if (beta > 0.0) { np.head = kInf; return done(kInf); }
            if (beta == 0.0) np.head = std::pow(t.head_c, -1.0 / (t.head_e * p));
        }
        double sup = 0.0;
        auto cand = [&](double s) {
            if (s > 0.0) sup = std::max(sup, s * std::pow(prof(s), rp));
        };
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            for (int k = 0; k <= 8; ++k) cand(pts[i] + (pts[i + 1] - pts[i]) * k / 8.0);
        for (double s : pts) cand(s * (1.0 - 1e-12));
        for (int k = 0; k <= 40; ++k) cand(s_min * std::exp2(-k));     // below the lowest level
        if (head_pow && t.head_e < 0.0)
            for (int k = 0; k <= 40; ++k) cand(s_max * std::exp2(k));  // above the highest
        np.window = sup;
        return done(std::max({sup, np.head, np.tail}));
    }

    // finite q: divergence screens first
    if (t.tail_kind == TailDescriptor::Kind::Power && t.tail_c > 0.0) {
        if (t.tail_e >= 0.0) { np.tail = kInf; return done(kInf); }
        if (1.0 + 1.0 / (t.tail_e * p) <= 0.0) { np.tail = kInf; return done(kInf); }
    }
    if (head_pow && t.head_e < 0.0 && 1.0 + 1.0 / (t.head_e * p) >= 0.0) {
        np.head = kInf;
        return done(kInf);
    }

    // closed form above the top level: only the head model lives there, and it
    // is exactly a power of s
    if (head_pow && t.head_e < 0.0) {
        const double g = q * (1.0 + 1.0 / (t.head_e * p));  // negative here
        np.head = std::pow(t.head_c, -q / (t.head_e * p)) * std::pow(s_max, g) / (-g);
    }

    // below the bottom level d(s) approaches a constant unless a power tail
    // keeps growing; extend panels down until the remainder is modelled well
    double s_bot;
    if (tail_pow && t.tail_e < 0.0) {
        const double scale = std::max(1.0, prof.window_measure() + x0 + x1);
        const double s_dom = t.tail_c * std::pow(1e6 * scale, t.tail_e);
        s_bot = std::min(s_min / 256.0, s_dom);
        const double octaves = std::log2(s_min / s_bot);
        if (octaves > 900.0) s_bot = s_min * std::exp2(-900.0);
    } else {
        s_bot = s_min * std::exp2(-52.0);
    }
    // levels can sit in the denormal range (sampled gaussian tails), where
    // halving further underflows to an exact zero; stop at the normal floor,
    // the remainder below it is immaterial at any q
    s_bot = std::max(s_bot, 2.0 * std::numeric_limits<double>::min());
    std::vector<double> below;
    for (double s = s_min; s > s_bot * 1.5; s *= 0.5) below.push_back(s * 0.5);
    below.push_back(s_bot);
    pts.insert(pts.end(), below.begin(), below.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    double remainder;
    if (tail_pow && t.tail_e < 0.0) {
        const double g = q * (1.0 + 1.0 / (t.tail_e * p));  // positive or we bailed
        const double pure = std::pow(t.tail_c, -q / (t.tail_e * p)) * std::pow(s_bot, g) / g;
        const double power_bot = std::pow(s_bot * 0.5 / t.tail_c, 1.0 / t.tail_e);
        const double extra = prof(s_bot * 0.5) - power_bot;  // window and head left-overs
        remainder = pure * std::pow(std::max(0.0, 1.0 + extra / power_bot), q * rp);
    } else {
        remainder = std::pow(s_bot, q) / q * std::pow(prof(s_bot * 0.5), q * rp);
    }
    np.tail += remainder;  // bookkeeping: the below-bottom piece rides with the tail slot

    auto integrand = [&](double s) { return std::pow(s, q - 1.0) * std::pow(prof(s), q * rp); };
    double rough = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) rough += quad::gk15(integrand, pts[i], pts[i + 1]).value;
    const double tol = std::max(1e-300, 1e-11 * (rough + np.head + remainder));
    np.window = quad::panel_adaptive(integrand, pts, tol, 6000);

    const double total = np.window + np.head + np.tail;
    return done(std::pow(p, 1.0 / q) * std::pow(total, 1.0 / q));
}

}  // namespace hankelgm

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hankelgm/analytic.hpp"
#include "hankelgm/grid.hpp"

namespace hankelgm {

// How values between nodes are interpreted.  PiecewiseLinear joins nodes;
// PiecewiseConstantLeft holds the left node's value on [x_i, x_{i+1}), which
// is the right representation for step data (indicators, rearrangements).
enum class Interp { PiecewiseLinear, PiecewiseConstantLeft };

class SampledFunction {
public:
    SampledFunction(Grid grid, std::vector<std::complex<double>> values, Interp interp)
        : grid_(std::move(grid)), values_(std::move(values)), interp_(interp) {
        if (values_.size() != grid_.size())
            throw DomainError("SampledFunction: value count must match node count");
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag()))
                throw SamplingError("non-finite value at node x=" + std::to_string(grid_.node(i)));
        is_real_ = true;
        for (const auto& v : values_)
            if (v.imag() != 0.0) { is_real_ = false; break; }
    }

    static SampledFunction real(Grid grid, std::vector<double> values, Interp interp) {
        std::vector<std::complex<double>> cv(values.begin(), values.end());
        return SampledFunction(std::move(grid), std::move(cv), interp);
    }

    const Grid& grid() const { return grid_; }
    Interp interp() const { return interp_; }
    std::size_t size() const { return values_.size(); }
    std::complex<double> value(std::size_t i) const { return values_[i]; }
    bool is_real() const { return is_real_; }

    double real_value(std::size_t i) const {
        if (!is_real_) throw DomainError("real_value: function has complex values");
        return values_[i].real();
    }

    std::vector<double> real_values() const {
        std::vector<double> out(values_.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = real_value(i);
        return out;
    }

    // Interpolated evaluation inside the window.
    std::complex<double> eval(double x) const {
        const Grid& g = grid_;
        if (!g.contains(x)) throw DomainError("eval: x outside sampling window");
        std::size_t i = g.locate(x);
        if (i + 1 >= g.size()) return values_.back();
        if (interp_ == Interp::PiecewiseConstantLeft) return values_[i];
        const double a = g.node(i), b = g.node(i + 1);
        const double t = (x - a) / (b - a);
        return values_[i] * (1.0 - t) + values_[i + 1] * t;
    }

    double eval_real(double x) const {
        if (!is_real_) throw DomainError("eval_real: function has complex values");
        return eval(x).real();
    }

    // Source bookkeeping (descriptor string, window edge behaviour).
    const std::string& source() const { return source_; }
    void set_source(std::string s) { source_ = std::move(s); }
    const std::optional<TailDescriptor>& tails() const { return tails_; }
    void set_tails(TailDescriptor t) { tails_ = t; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

    // Visit each (possibly clipped) cell of [a, b] as (xa, xb, va, vb), where
    // the endpoint values follow the interpretation rule.  Most integral and
    // variation code below is written against this.
    template <class F>
    void for_each_cell(double a, double b, F&& visit) const {
        const Grid& g = grid_;
        const double lo = g.front(), hi = g.back();
        const double slack = 1e-9 * (hi - lo);
        if (a < lo - slack || b > hi + slack || a > b)
            throw DomainError("cell walk: interval [" + std::to_string(a) + ", " + std::to_string(b) +
                              "] not inside window");
        a = std::max(a, lo);
        b = std::min(b, hi);
        if (a >= b) return;
        std::size_t i = g.locate(a);
        while (i + 1 < g.size() && g.node(i + 1) <= a) ++i;
        for (; i + 1 < g.size() && g.node(i) < b; ++i) {
            const double xa = std::max(a, g.node(i));
            const double xb = std::min(b, g.node(i + 1));
            if (xb <= xa) continue;
            std::complex<double> va, vb;
            if (interp_ == Interp::PiecewiseConstantLeft) {
                va = vb = values_[i];
            } else {
                const double ga = g.node(i), gb = g.node(i + 1), w = gb - ga;
                const double ta = (xa - ga) / w, tb = (xb - ga) / w;
                va = values_[i] * (1.0 - ta) + values_[i + 1] * ta;
                vb = values_[i] * (1.0 - tb) + values_[i + 1] * tb;
            }
            visit(xa, xb, va, vb);
        }
    }

private:
    Grid grid_;
    std::vector<std::complex<double>> values_;
    Interp interp_;
    bool is_real_ = true;
    std::string source_;
    std::optional<TailDescriptor> tails_;
    std::vector<std::string> warnings_;
};

// Node-exact sampling of a closed-form function.  Breakpoints that miss the
// grid are recorded as warnings so jump bookkeeping stays honest.
inline SampledFunction sample(const AnalyticFunction& f, const Grid& grid, Interp interp) {
    std::vector<std::complex<double>> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = f(grid.node(i));
        if (!std::isfinite(v))
            throw SamplingError("sample: non-finite value at node x=" + std::to_string(grid.node(i)));
        values[i] = v;
    }
    SampledFunction s(grid, std::move(values), interp);
    s.set_source(f.descriptor());
    TailDescriptor tails = f.tails();
    for (double b : f.breakpoints()) {
        if (grid.contains(b)) {
            const std::size_t i = grid.locate(b);
            const double near = std::min(std::abs(grid.node(i) - b),
                                         i + 1 < grid.size() ? std::abs(grid.node(i + 1) - b) : 1e300);
            if (near > 1e-12 * b)
                s.add_warning("breakpoint x=" + std::to_string(b) + " is not a grid node");
            continue;
        }
        // structure outside the window invalidates a claimed zero edge
        if (b > grid.back() && tails.tail_kind == TailDescriptor::Kind::Zero) {
            tails.tail_kind = TailDescriptor::Kind::None;
            s.add_warning("support reaches x=" + std::to_string(b) + " beyond the window");
        }
        if (b < grid.front() && b > 0.0 && tails.head_kind == TailDescriptor::Kind::Zero) {
            tails.head_kind = TailDescriptor::Kind::None;
            s.add_warning("support starts at x=" + std::to_string(b) + " below the window");
        }
    }
    s.set_tails(tails);
    return s;
}

// Integral over [a, b] under the interpretation rule (exact per cell).
inline std::complex<double> integrate(const SampledFunction& f, double a, double b) {
    std::complex<double> acc = 0.0;
    f.for_each_cell(a, b, [&](double xa, double xb, std::complex<double> va, std::complex<double> vb) {
        acc += 0.5 * (va + vb) * (xb - xa);
    });
    return acc;
}

inline double integrate_real(const SampledFunction& f, double a, double b) {
    return integrate(f, a, b).real();
}

// Total variation over [a, b].  Node jumps are attributed to the node they
// occur at, and the half-open convention (a, b] decides edge ownership: a
// jump exactly at b counts, a jump exactly at a does not.
inline double total_variation(const SampledFunction& f, double a, double b) {
    const Grid& g = f.grid();
    const double slack = 1e-9 * (g.back() - g.front());
    if (a < g.front() - slack || b > g.back() + slack || a > b)
        throw DomainError("total_variation: interval not inside window");
    a = std::max(a, g.front());
    b = std::min(b, g.back());
    if (a >= b) return 0.0;

    double tv = 0.0;
    if (f.interp() == Interp::PiecewiseConstantLeft) {
        for (std::size_t i = 1; i < g.size(); ++i) {
            const double x = g.node(i);
            if (x > a && x <= b) tv += std::abs(f.value(i) - f.value(i - 1));
        }
        return tv;
    }
    std::complex<double> prev = f.eval(a);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.node(i);
        if (x <= a) continue;
        if (x >= b) break;
        tv += std::abs(f.value(i) - prev);
        prev = f.value(i);
    }
    tv += std::abs(f.eval(b) - prev);
    return tv;
}

// Integral of |f(t)|/t over [a, b], exact per cell.  On each cell the
// interpolant is A + B*t, so after splitting at a sign change the integrand
// has antiderivative A*log(t) + B*t on sign-constant pieces.
inline double integrate_abs_over_t(const SampledFunction& f, double a, double b) {
    if (!f.is_real()) throw DomainError("integrate_abs_over_t: function has complex values");
    if (!(a > 0.0)) throw DomainError("integrate_abs_over_t: need a > 0");
    double acc = 0.0;
    f.for_each_cell(a, b, [&](double xa, double xb, std::complex<double> cva, std::complex<double> cvb) {
        const double va = cva.real(), vb = cvb.real();
        const double B = (vb - va) / (xb - xa);
        const double A = va - B * xa;
        auto piece = [&](double lo, double hi) {
            return std::abs(A * std::log(hi / lo) + B * (hi - lo));
        };
        const double root = (va * vb < 0.0) ? -A / B : 0.0;
        if (root > xa && root < xb)
            acc += piece(xa, root) + piece(root, xb);
        else
            acc += piece(xa, xb);
    });
    return acc;
}

// Even/odd decomposition of a real-line function, represented by its samples
// on (0, infinity): fe(x) = (f(x)+f(-x))/2, fo(x) = (f(x)-f(-x))/2.
inline std::pair<SampledFunction, SampledFunction> even_odd_split(
    const std::function<double(double)>& f, const Grid& grid,
    Interp interp = Interp::PiecewiseLinear) {
    std::vector<std::complex<double>> fe(grid.size()), fo(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.node(i);
        const double vp = f(x), vm = f(-x);
        if (!std::isfinite(vp) || !std::isfinite(vm))
            throw SamplingError("even_odd_split: non-finite value at node |x|=" + std::to_string(x));
        fe[i] = 0.5 * (vp + vm);
        fo[i] = 0.5 * (vp - vm);
    }
    SampledFunction e(grid, std::move(fe), interp);
    SampledFunction o(grid, std::move(fo), interp);
    e.set_source("even-part");
    o.set_source("odd-part");
    return {std::move(e), std::move(o)};
}

}  // namespace hankelgm

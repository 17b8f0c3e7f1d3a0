#pragma once

// General-monotonicity diagnostics.  gm_ratio and certify_gm measure the
// defining variation-vs-average ratio across scales; dyadic_profile splits
// octaves into good and bad blocks; bad_chain walks a bad block to its good
// anchor; good_level_sets measures how much of a good block stays above the
// guaranteed level, including the single-signed core interval.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hankelgm/errors.hpp"
#include "hankelgm/sampled.hpp"

namespace hankelgm {

inline constexpr double kGmSafety = 1.05;        // pad on the measured ratio sup
inline constexpr double kGmRatioCap = 1e4;       // beyond this we refuse to certify
inline constexpr double kGmGrowthFactor = 10.0;  // edge-trend trigger, see certify_gm

// var(f; [x, 2x]) / int_{x/lambda}^{lambda*x} |f(t)|/t dt at a single scale.
// A zero denominator with zero variation reads as ratio 0; with nonzero
// variation it is +infinity (the scale cannot be averaged away).
inline double gm_ratio(const SampledFunction& f, double x, double lambda) {
    if (!(x > 0.0) || !(lambda > 1.0)) throw DomainError("gm_ratio: need x > 0 and lambda > 1");
    if (!f.is_real()) throw DomainError("gm_ratio: data must be real");
    const Grid& g = f.grid();
    const double need_lo = x / lambda;
    const double need_hi = std::max(2.0 * x, lambda * x);
    if (need_lo < g.front() * (1.0 - 1e-12) || need_hi > g.back() * (1.0 + 1e-12))
        throw DomainError("gm_ratio: window does not cover [x/lambda, max(2x, lambda*x)] at x=" +
                          std::to_string(x));
    const double tv = total_variation(f, x, std::min(2.0 * x, g.back()));
    const double denom =
        integrate_abs_over_t(f, std::max(need_lo, g.front()), std::min(lambda * x, g.back()));
    if (denom == 0.0) return tv == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return tv / denom;
}

struct GMCertificate {
    bool is_gm = false;
    double constant = 0.0;  // kGmSafety * sup_ratio when certified
    double lambda = 2.0;
    int nu = 1;
    double sup_ratio = 0.0;
    double sup_scale = 0.0;
    std::vector<std::pair<double, double>> profile;  // (x, ratio) per probed scale
    std::string note;
};

// Sweep gm_ratio over a log grid of scales and certify with a padded constant.
// Certification is refused when a ratio is non-finite, when the sup exceeds
// kGmRatioCap, or when the ratios still climb at the window edge (sup attained
// in the last few scales and more than kGmGrowthFactor above the mid-window
// level); the last rule is what catches growth like e^x, whose ratio rises
// roughly linearly in x and so never hits the cap on a representable window.
inline GMCertificate certify_gm(const SampledFunction& f, double lambda, int max_scales = 240) {
    const int nu = static_cast<int>(std::lround(std::log2(lambda)));
    if (nu < 1 || std::exp2(nu) != lambda)
        throw DomainError("certify_gm: lambda must be 2^nu with integer nu >= 1");
    if (!f.is_real()) throw DomainError("certify_gm: data must be real");
    const Grid& g = f.grid();
    const double x_lo = g.front() * lambda;
    const double x_hi = g.back() / lambda;
    if (!(x_lo < x_hi)) throw DomainError("certify_gm: window narrower than two lambda factors");

    GMCertificate cert;
    cert.lambda = lambda;
    cert.nu = nu;
    const int n = std::max(2, std::min(max_scales,
                                       static_cast<int>(std::lround(8.0 * std::log2(x_hi / x_lo))) + 1));
    const double step = std::log(x_hi / x_lo) / (n - 1);
    bool finite = true;
    for (int i = 0; i < n; ++i) {
        const double x = x_lo * std::exp(step * i);
        const double rho = gm_ratio(f, x, lambda);
        cert.profile.emplace_back(x, rho);
        if (!std::isfinite(rho)) finite = false;
        if (rho > cert.sup_ratio) {
            cert.sup_ratio = rho;
            cert.sup_scale = x;
        }
    }

    if (!finite) {
        cert.note = "non-finite ratio observed";
        return cert;
    }
    if (cert.sup_ratio > kGmRatioCap) {
        cert.note = "ratio cap exceeded";
        return cert;
    }
    if (n >= 12) {
        double mid_max = 0.0;
        for (int i = n / 3; i < 2 * n / 3; ++i) mid_max = std::max(mid_max, cert.profile[i].second);
        const bool sup_at_edge = cert.sup_scale >= cert.profile[n - 3].first;
        if (sup_at_edge && cert.sup_ratio > kGmGrowthFactor * mid_max) {
            cert.note = "ratios keep growing toward the window edge";
            return cert;
        }
    }
    cert.is_gm = true;
    cert.constant = kGmSafety * cert.sup_ratio;
    cert.note = "ok";
    return cert;
}

// Per-octave suprema A_n = sup |g| over [2^n, 2^(n+1)], window maxima
// B_n = max A_k for k in [n-2nu, n+2nu), and the split B_n <= 2^(2 r nu) A_n
// deciding which octaves are good.  A is kept on the widened range
// [n_lo-2nu, n_hi+2nu-1] so classification and chain walking have the data
// they need; classification itself covers [n_lo, n_hi].
class DyadicProfile {
public:
    DyadicProfile(std::vector<double> a, std::vector<double> b, std::vector<char> good, int n_lo,
                  int a_lo, double r, int nu)
        : a_(std::move(a)), b_(std::move(b)), good_(std::move(good)), n_lo_(n_lo), a_lo_(a_lo),
          r_(r), nu_(nu) {}

    int n_lo() const { return n_lo_; }
    int n_hi() const { return n_lo_ + static_cast<int>(b_.size()) - 1; }
    int a_lo() const { return a_lo_; }
    int a_hi() const { return a_lo_ + static_cast<int>(a_.size()) - 1; }
    double r() const { return r_; }
    int nu() const { return nu_; }
    double threshold() const { return std::exp2(2.0 * r_ * nu_); }

    bool has_a(int n) const { return n >= a_lo() && n <= a_hi(); }
    double a(int n) const {
        if (!has_a(n))
            throw DomainError("DyadicProfile::a: octave " + std::to_string(n) + " not held");
        return a_[static_cast<std::size_t>(n - a_lo_)];
    }
    double b(int n) const {
        require(n, "b");
        return b_[static_cast<std::size_t>(n - n_lo_)];
    }
    bool good(int n) const {
        require(n, "good");
        return good_[static_cast<std::size_t>(n - n_lo_)] != 0;
    }

    // max A over [n-2nu, n+2nu), or nothing when an octave is missing
    std::optional<double> window_max(int n) const {
        if (n - 2 * nu_ < a_lo() || n + 2 * nu_ - 1 > a_hi()) return std::nullopt;
        double m = 0.0;
        for (int k = n - 2 * nu_; k <= n + 2 * nu_ - 1; ++k) m = std::max(m, a(k));
        return m;
    }

private:
    void require(int n, const char* who) const {
        if (n < n_lo() || n > n_hi())
            throw DomainError(std::string("DyadicProfile::") + who + ": octave " +
                              std::to_string(n) + " outside classified range");
    }

    std::vector<double> a_;
    std::vector<double> b_;
    std::vector<char> good_;
    int n_lo_, a_lo_;
    double r_;
    int nu_;
};

// Classify octaves [n_lo, n_hi] of a real function on a dyadic-aligned grid.
// Blocks are closed, so suprema are maxima over the nodes of the octave with
// both endpoints included; that covers both interpretation rules exactly.
inline DyadicProfile dyadic_profile(const SampledFunction& g, double r, int nu, int n_lo, int n_hi) {
    if (!g.is_real()) throw DomainError("dyadic_profile: data must be real");
    if (!(r > 0.0) || nu < 1) throw DomainError("dyadic_profile: need r > 0 and nu >= 1");
    if (n_hi < n_lo) throw DomainError("dyadic_profile: empty octave range");
    const Grid& grid = g.grid();
    const int m = grid.per_octave();
    if (m == 0) throw DomainError("dyadic_profile: grid must be dyadic-aligned");
    const int e_lo = grid.e_lo();
    const int e_hi = e_lo + static_cast<int>(grid.size() - 1) / m;
    const int a_lo = n_lo - 2 * nu, a_hi = n_hi + 2 * nu - 1;
    if (a_lo < e_lo || a_hi + 1 > e_hi)
        throw DomainError("dyadic_profile: window holds octaves [" + std::to_string(e_lo) + ", " +
                          std::to_string(e_hi) + ") but A_" +
                          std::to_string(a_lo < e_lo ? a_lo : a_hi) + " is needed");

    std::vector<double> A(static_cast<std::size_t>(a_hi - a_lo + 1));
    for (int n = a_lo; n <= a_hi; ++n) {
        const std::size_t i0 = static_cast<std::size_t>(n - e_lo) * static_cast<std::size_t>(m);
        double s = 0.0;
        for (std::size_t i = i0; i <= i0 + static_cast<std::size_t>(m); ++i)
            s = std::max(s, std::abs(g.real_value(i)));
        A[static_cast<std::size_t>(n - a_lo)] = s;
    }

    const double thr = std::exp2(2.0 * r * nu);
    std::vector<double> B(static_cast<std::size_t>(n_hi - n_lo + 1));
    std::vector<char> good(B.size());
    for (int n = n_lo; n <= n_hi; ++n) {
        double w = 0.0;
        for (int k = n - 2 * nu; k <= n + 2 * nu - 1; ++k)
            w = std::max(w, A[static_cast<std::size_t>(k - a_lo)]);
        B[static_cast<std::size_t>(n - n_lo)] = w;
        good[static_cast<std::size_t>(n - n_lo)] =
            (w <= thr * A[static_cast<std::size_t>(n - a_lo)]) ? 1 : 0;
    }
    return DyadicProfile(std::move(A), std::move(B), std::move(good), n_lo, a_lo, r, nu);
}

// A chain of bad octaves: gamma_0 = start, each step jumps to the octave
// achieving the previous window max (minimal choice below, maximal above),
// and the chain ends at the first good octave.  Along the way every A grows
// by more than the 2^(2 r nu) threshold, which is what caps how many bad
// octaves can share a good anchor.
struct BadChain {
    int start = 0;
    std::vector<int> gammas;  // gamma_0 .. gamma_s; the last is good unless exhausted
    bool increasing = false;
    bool exhausted = false;  // profile ran out of octaves before a good one appeared
    int length() const { return static_cast<int>(gammas.size()) - 1; }
};

inline BadChain bad_chain(const DyadicProfile& prof, int m) {
    if (m < prof.n_lo() || m > prof.n_hi())
        throw DomainError("bad_chain: start octave outside classified range");
    if (prof.good(m)) throw DomainError("bad_chain: start octave is good");
    const int nu = prof.nu();
    const double thr = prof.threshold();

    BadChain chain;
    chain.start = m;
    chain.gammas.push_back(m);

    // first hop: minimal achiever of B_m over the full window; it cannot be m
    // itself, since A_m = B_m would make m good
    const double bm = prof.b(m);
    int cur = m;
    for (int k = m - 2 * nu; k <= m + 2 * nu - 1; ++k)
        if (prof.a(k) == bm) {
            cur = k;
            break;
        }
    chain.increasing = cur > m;

    while (true) {
        chain.gammas.push_back(cur);
        const auto w = prof.window_max(cur);
        if (!w) {
            chain.exhausted = true;
            break;
        }
        if (*w <= thr * prof.a(cur)) break;  // cur is good, chain complete
        // next achiever on the chain's side of cur (minimal below, maximal
        // above); it sits there whenever the data is a genuine profile
        bool found = false;
        int nxt = cur;
        if (!chain.increasing) {
            for (int k = cur - 2 * nu; k <= cur - 1; ++k)
                if (prof.has_a(k) && prof.a(k) == *w) {
                    nxt = k;
                    found = true;
                    break;
                }
        } else {
            for (int k = cur + 2 * nu - 1; k >= cur + 1; --k)
                if (prof.has_a(k) && prof.a(k) == *w) {
                    nxt = k;
                    found = true;
                    break;
                }
        }
        if (!found) {
            chain.exhausted = true;
            break;
        }
        cur = nxt;
    }
    return chain;
}

// Measurements of E_n = { x in [2^(n-nu), 2^(n+nu)] : |g(x)| > A_n/(C 2^(2nu+3)) }
// for a good octave n, with the guaranteed lower bounds alongside.  The
// single-signed core is the sign-constant run of g inside the block holding
// the largest share of E_n; runs absorb zero stretches, which break neither
// a nonnegative nor a nonpositive interval.
struct LevelSetReport {
    int n = 0;
    double threshold = 0.0;
    double measure = 0.0;      // |E_n|
    double measure_pos = 0.0;  // |{x in E_n : g(x) > 0}|
    double measure_neg = 0.0;  // |{x in E_n : g(x) <= 0}|
    double bound = 0.0;        // 2^n / (C 2^(2 r nu + nu + 3))
    double interval_lo = 0.0;
    double interval_hi = 0.0;
    int interval_sign = 0;          // +1, -1, or 0 when E_n is empty
    double interval_measure = 0.0;  // share of E_n inside the core interval
    double interval_bound = 0.0;    // 2^n / (C^3 2^(4 r nu + 5 nu + 12))
};

namespace detail {

// length of { t in [lo, hi] : A + B*t > c } for a linear piece
inline double linear_above(double A, double B, double c, double lo, double hi) {
    if (B == 0.0) return A > c ? hi - lo : 0.0;
    const double t = (c - A) / B;
    if (B > 0.0) return hi - std::clamp(t, lo, hi);
    return std::clamp(t, lo, hi) - lo;
}

}  // namespace detail

inline LevelSetReport good_level_sets(const SampledFunction& g, const DyadicProfile& prof, int n,
                                      double C) {
    if (!(C > 0.0)) throw DomainError("good_level_sets: need C > 0");
    if (!prof.good(n)) throw DomainError("good_level_sets: octave " + std::to_string(n) + " is bad");
    const int nu = prof.nu();
    const double r = prof.r();

    LevelSetReport rep;
    rep.n = n;
    rep.threshold = prof.a(n) / (C * std::exp2(2.0 * nu + 3.0));
    rep.bound = std::exp2(static_cast<double>(n)) / (C * std::exp2(2.0 * r * nu + nu + 3.0));
    rep.interval_bound = std::exp2(static_cast<double>(n)) /
                         (std::pow(C, 3) * std::exp2(4.0 * r * nu + 5.0 * nu + 12.0));

    struct Run {
        int sign = 0;
        double lo = 0.0, hi = 0.0;
        double content = 0.0;
    };
    Run cur, best;
    auto close = [&]() {
        if (cur.sign != 0 || cur.content > 0.0)
            if (cur.content > best.content || best.sign == 0) best = cur;
        cur = Run{};
    };
    auto feed = [&](double lo, double hi, int sign, double content) {
        if (cur.hi == 0.0) {
            cur = Run{sign, lo, hi, content};
            return;
        }
        if (sign == 0 || cur.sign == 0 || sign == cur.sign) {
            cur.hi = hi;
            cur.content += content;
            if (cur.sign == 0) cur.sign = sign;
            return;
        }
        close();
        cur = Run{sign, lo, hi, content};
    };

    const double thr = rep.threshold;
    g.for_each_cell(std::exp2(n - nu), std::exp2(n + nu),
                    [&](double xa, double xb, std::complex<double> cva, std::complex<double> cvb) {
                        const double va = cva.real(), vb = cvb.real();
                        const double B = (vb - va) / (xb - xa);
                        const double A = va - B * xa;
                        auto segment = [&](double lo, double hi) {
                            if (hi <= lo) return;
                            const double mid = 0.5 * (lo + hi);
                            const double vm = A + B * mid;
                            const double above = detail::linear_above(A, B, thr, lo, hi);
                            const double below = detail::linear_above(-A, -B, thr, lo, hi);
                            rep.measure_pos += above;
                            rep.measure_neg += below;
                            const int sign = vm > 0.0 ? 1 : (vm < 0.0 ? -1 : 0);
                            feed(lo, hi, sign, sign >= 0 ? above : below);
                        };
                        const double root = (va * vb < 0.0) ? -A / B : 0.0;
                        if (root > xa && root < xb) {
                            segment(xa, root);
                            segment(root, xb);
                        } else {
                            segment(xa, xb);
                        }
                    });
    close();

    rep.measure = rep.measure_pos + rep.measure_neg;
    if (best.content > 0.0) {
        rep.interval_lo = best.lo;
        rep.interval_hi = best.hi;
        rep.interval_sign = best.sign >= 0 ? 1 : -1;
        rep.interval_measure = best.content;
    }
    return rep;
}

// Cutoff slack for the smoothed averaging operator: a cutoff supported on
// (0, 1 + eps/2) with eps below this keeps the maximal-function lower bound.
inline double epsilon_for(double C, double r, int nu) {
    if (!(C > 0.0) || !(r > 0.0) || nu < 1)
        throw DomainError("epsilon_for: need C > 0, r > 0, nu >= 1");
    return 1.0 / (std::pow(C, 4) * std::exp2(6.0 * r * nu + 8.0 * nu + 16.0));
}

}  // namespace hankelgm

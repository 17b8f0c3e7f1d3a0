#pragma once

// Experiment layer: two-sided norm-equivalence ratios for the Hankel
// transform over a certified corpus, the one-sided Pitt / Hardy / Booton
// checks behind them, and the flat-config plus report plumbing that keeps
// runs reproducible.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hankelgm/analytic.hpp"
#include "hankelgm/errors.hpp"
#include "hankelgm/gm.hpp"
#include "hankelgm/norms.hpp"
#include "hankelgm/sampled.hpp"
#include "hankelgm/transform.hpp"

namespace hankelgm {

// Dual exponent via 1/p' = 1 - 1/p, with 1' = infinity and infinity' = 1.
inline double conjugate_exponent(double p) {
    const double r = 1.0 - reciprocal(p);
    return r == 0.0 ? kInf : 1.0 / r;
}

// One experiment run described as a flat key=value document.  Lists use ';'
// separators because function descriptors already contain commas.  Keys:
//
//   alpha=0.5
//   corpus=indicator:a=0,b=1 ; gauss-hermite:a=1     descriptor strings
//   spaces=2,2 ; 1.5,inf                             (p, q) pairs
//   dilations=0.5 ; 1 ; 2                            ladder of c in f(cx)
//   window_lo_exp / window_hi_exp / per_octave       sampling grid 2^lo..2^hi
//   y_lo_exp / y_hi_exp / y_per_octave               transform output grid
//   lambda=2                                         variation-window factor
//   tail=ibp|direct  quad_tol  ladder  cell_order  accelerate=0|1
//   out=PATH  format=csv|json  seed=1
//
// '#' starts a comment, later duplicates of a key win, and the token
// seed=auto inside a descriptor picks up the configured seed so randomized
// corpus members stay reproducible.
struct ExperimentConfig {
    std::vector<std::string> corpus;
    double alpha = 0.5;
    std::vector<std::pair<double, double>> spaces;  // (p, q), q may be infinity
    std::vector<double> dilations = {1.0};
    int window_lo_exp = -10, window_hi_exp = 5, per_octave = 32;
    int y_lo_exp = -5, y_hi_exp = 5, y_per_octave = 8;
    TransformSettings settings = [] {
        TransformSettings s;
        s.cell_order = 3;  // smooth corpus members dominate; step data ignores it
        return s;
    }();
    double lambda = 2.0;
    std::string out_path;
    std::string format = "csv";
    std::uint64_t seed = 1;

    void validate() const;
    static ExperimentConfig parse_text(const std::string& text);
    static ExperimentConfig parse_file(const std::string& path);
};

// One (function, p, q, c) cell of an equivalence run.  ratio_lebesgue is
// ||Hf|| on the x^(q/p'-1) scale over ||f|| on the x^(q/p-1) scale;
// ratio_lorentz compares ||Hf||_{p',q} with ||f||_{p,q}.  err_budget bounds
// the slack in ratio_lebesgue from the transform's quadrature budget.  Flags:
// ok, sup (q = infinity), vacuous (0/0), both-infinite (both scales blow up
// together, which the equivalence allows), mismatch (one side infinite only).
struct EquivalenceRow {
    std::string fn;
    double p = 0.0, q = 0.0, c = 1.0;
    double ratio_lebesgue = 0.0;
    double ratio_lorentz = 0.0;
    double err_budget = 0.0;
    std::string flag;
};

struct RatioReport {
    int schema_version = 1;
    double alpha = 0.0;
    std::vector<EquivalenceRow> rows;
    std::vector<std::string> skipped;  // "descriptor => why it was not certified"
    std::string note;                  // run-level caveats, empty when clean
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline double config_number(const std::string& raw, const std::string& key) {
    const std::string t = trim(raw);
    if (t == "inf" || t == "infinity") return kInf;
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != t.size())
        throw ConfigError("config: bad number '" + raw + "' for key '" + key + "'");
    return v;
}

inline long config_integer(const std::string& raw, const std::string& key) {
    const double v = config_number(raw, key);
    const long n = std::lround(v);
    if (std::isinf(v) || static_cast<double>(n) != v)
        throw ConfigError("config: key '" + key + "' needs an integer, got '" + raw + "'");
    return n;
}

// Steps sample exactly as left-constant cells; everything else reads better
// through chords (and through the cubic window when the order asks for it).
inline Interp natural_interp(const AnalyticFunction& f) {
    switch (f.kind()) {
        case AnalyticFunction::Kind::Indicator:
        case AnalyticFunction::Kind::StepMix:
        case AnalyticFunction::Kind::RandomStep:
            return Interp::PiecewiseConstantLeft;
        default:
            return Interp::PiecewiseLinear;
    }
}

// Transforms come back as bare samples, but the norms need to know what sits
// outside the y window.  Fit c*y^e per outer octave by least squares on the
// log-log pairs; accept only a clean single-signed fit, call the edge Zero
// when it sits below rounding relative to the peak, and otherwise leave it
// None so the norm honestly reports the window-only result.  Declared models
// are respected and never overwritten.
inline void fit_power_edges(SampledFunction& h) {
    if (h.tails() || !h.is_real() || h.size() < 8) return;
    const Grid& g = h.grid();
    double peak = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) peak = std::max(peak, std::abs(h.real_value(i)));
    TailDescriptor t;
    if (peak == 0.0) {
        h.set_tails(TailDescriptor::zero());
        return;
    }
    auto fit = [&](std::size_t i0, std::size_t i1, double& c, double& e) {
        bool tiny = true, pos = true, neg = true;
        for (std::size_t i = i0; i <= i1; ++i) {
            const double v = h.real_value(i);
            tiny = tiny && std::abs(v) <= 1e-13 * peak;
            pos = pos && v > 0.0;
            neg = neg && v < 0.0;
        }
        if (tiny) return TailDescriptor::Kind::Zero;
        if (!pos && !neg) return TailDescriptor::Kind::None;
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        const double n = static_cast<double>(i1 - i0 + 1);
        for (std::size_t i = i0; i <= i1; ++i) {
            const double lx = std::log(g.node(i)), lv = std::log(std::abs(h.real_value(i)));
            sx += lx;
            sy += lv;
            sxx += lx * lx;
            sxy += lx * lv;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double inter = (sy - slope * sx) / n;
        double resid = 0.0;
        for (std::size_t i = i0; i <= i1; ++i)
            resid = std::max(resid, std::abs(std::log(std::abs(h.real_value(i))) -
                                             (inter + slope * std::log(g.node(i)))));
        if (resid > 0.12 || std::abs(slope) > 40.0) return TailDescriptor::Kind::None;
        c = std::exp(inter);
        e = slope;
        return TailDescriptor::Kind::Power;
    };
    std::size_t ih = 0;
    while (ih + 1 < g.size() && g.node(ih + 1) <= 2.0 * g.front() * (1.0 + 1e-12)) ++ih;
    std::size_t it = g.size() - 1;
    while (it > 0 && g.node(it - 1) >= 0.5 * g.back() * (1.0 - 1e-12)) --it;
    if (ih >= 2) t.head_kind = fit(0, ih, t.head_c, t.head_e);
    if (it + 2 < g.size()) t.tail_kind = fit(it, g.size() - 1, t.tail_c, t.tail_e);
    h.set_tails(t);
}

// Shared flag logic for a single num/den pair.  The ratio goes NaN whenever
// a single number would misrepresent the outcome.
inline std::string one_ratio(double num, double den, double& ratio) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const bool ni = std::isinf(num), di = std::isinf(den);
    if (num == 0.0 && den == 0.0) {
        ratio = nan;
        return "vacuous";
    }
    if (ni && di) {
        ratio = nan;
        return "both-infinite";
    }
    if (ni != di || den == 0.0) {
        ratio = nan;
        return "mismatch";
    }
    ratio = num / den;
    return "ok";
}

inline std::string merge_flags(const std::string& a, const std::string& b, double q) {
    for (const char* worst : {"mismatch", "both-infinite", "vacuous"})
        if (a == worst || b == worst) return worst;
    return std::isinf(q) ? "sup" : "ok";
}

struct RatioPairResult {
    double lebesgue = 0.0, lorentz = 0.0;
    double num_w = 0.0, den_w = 0.0;
    std::string flag;
};

inline RatioPairResult ratio_pair(const SampledFunction& fs, const SampledFunction& hs, double p,
                                  double q) {
    const double cp = conjugate_exponent(p);
    RatioPairResult out;
    out.den_w = weighted_norm(fs, p, q);
    out.num_w = weighted_norm(hs, cp, q);
    const double den_l = lorentz_norm(fs, p, q);
    const double num_l = lorentz_norm(hs, cp, q);
    const std::string fw = one_ratio(out.num_w, out.den_w, out.lebesgue);
    const std::string fl = one_ratio(num_l, den_l, out.lorentz);
    out.flag = merge_flags(fw, fl, q);
    return out;
}

// Norm of a uniform error band of height eps across the y window, on the
// same scale as the numerator; the first-order perturbation bound for the
// weighted ratio.
inline double error_band_norm(const Grid& g, double rp, double q, double eps) {
    if (!(eps > 0.0)) return 0.0;
    if (std::isinf(q)) return eps * std::max(std::pow(g.front(), rp), std::pow(g.back(), rp));
    return eps * std::pow(power_integral(g.front(), g.back(), q * rp - 1.0), 1.0 / q);
}

}  // namespace detail

inline void ExperimentConfig::validate() const {
    if (!(alpha >= -0.5)) throw ConfigError("config: alpha must be >= -1/2");
    if (corpus.empty()) throw ConfigError("config: corpus is empty");
    if (spaces.empty()) throw ConfigError("config: no (p, q) spaces");
    const double p_lo = std::max(1.0, 1.0 / (alpha + 1.5));
    for (const auto& [p, q] : spaces) {
        if (!(p > p_lo) || std::isinf(p))
            throw ConfigError("config: p=" + std::to_string(p) + " outside (" +
                              std::to_string(p_lo) + ", infinity)");
        if (!(q >= 1.0)) throw ConfigError("config: q must be >= 1 (or infinity)");
    }
    if (dilations.empty()) throw ConfigError("config: dilation list is empty");
    for (double c : dilations)
        if (!(c > 0.0) || std::isinf(c)) throw ConfigError("config: dilations must be positive");
    if (window_lo_exp >= window_hi_exp || y_lo_exp >= y_hi_exp)
        throw ConfigError("config: window exponents must satisfy lo < hi");
    if (per_octave < 4 || y_per_octave < 1)
        throw ConfigError("config: sampling density too low");
    const int nu = static_cast<int>(std::lround(std::log2(lambda)));
    if (nu < 1 || std::exp2(nu) != lambda)
        throw ConfigError("config: lambda must be 2^nu with integer nu >= 1");
    if (format != "csv" && format != "json")
        throw ConfigError("config: format must be csv or json");
    settings.validate();
}

inline ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
    ExperimentConfig cfg;
    cfg.spaces.clear();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key == "alpha") {
            cfg.alpha = detail::config_number(val, key);
        } else if (key == "corpus") {
            cfg.corpus = detail::split_list(val, ';');
        } else if (key == "spaces") {
            cfg.spaces.clear();
            for (const std::string& item : detail::split_list(val, ';')) {
                const auto pq = detail::split_list(item, ',');
                if (pq.size() != 2)
                    throw ConfigError("config: space '" + item + "' is not a p,q pair");
                cfg.spaces.emplace_back(detail::config_number(pq[0], "spaces"),
                                        detail::config_number(pq[1], "spaces"));
            }
        } else if (key == "dilations") {
            cfg.dilations.clear();
            for (const std::string& item : detail::split_list(val, ';'))
                cfg.dilations.push_back(detail::config_number(item, key));
        } else if (key == "window_lo_exp") {
            cfg.window_lo_exp = static_cast<int>(detail::config_integer(val, key));
        } else if (key == "window_hi_exp") {
            cfg.window_hi_exp = static_cast<int>(detail::config_integer(val, key));
        } else if (key == "per_octave") {
            cfg.per_octave = static_cast<int>(detail::config_integer(val, key));
        } else if (key == "y_lo_exp") {
            cfg.y_lo_exp = static_cast<int>(detail::config_integer(val, key));
        } else if (key == "y_hi_exp") {
            cfg.y_hi_exp = static_cast<int>(detail::config_integer(val, key));
        } else if (key == "y_per_octave") {
            cfg.y_per_octave = static_cast<int>(detail::config_integer(val, key));
        } else if (key == "lambda") {
            cfg.lambda = detail::config_number(val, key);
        } else if (key == "tail") {
            if (val == "ibp")
                cfg.settings.tail_mode = TailMode::IntegrateByParts;
            else if (val == "direct")
                cfg.settings.tail_mode = TailMode::Direct;
            else
                throw ConfigError("config: tail must be ibp or direct, got '" + val + "'");
        } else if (key == "quad_tol") {
            cfg.settings.quad_tol = detail::config_number(val, key);
        } else if (key == "ladder") {
            cfg.settings.ladder = static_cast<int>(detail::config_integer(val, key));
        } else if (key == "cell_order") {
            cfg.settings.cell_order = static_cast<int>(detail::config_integer(val, key));
        } else if (key == "accelerate") {
            cfg.settings.accelerate = detail::config_integer(val, key) != 0;
        } else if (key == "out") {
            cfg.out_path = val;
        } else if (key == "format") {
            cfg.format = val;
        } else if (key == "seed") {
            const long n = detail::config_integer(val, key);
            if (n < 0) throw ConfigError("config: seed must be nonnegative");
            cfg.seed = static_cast<std::uint64_t>(n);
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    const std::string token = "seed=auto";
    for (std::string& d : cfg.corpus) {
        const std::size_t at = d.find(token);
        if (at != std::string::npos) d.replace(at, token.size(), "seed=" + std::to_string(cfg.seed));
    }
    return cfg;
}

inline ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_text(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

// One-sided transform bound on the power-weighted scale: the norm of H_a f
// with the dual index over the norm of f, endpoints q = 1 and q = infinity
// included.  The transform's edge behaviour is fitted so mass outside the y
// window is counted (or honestly dropped when no model fits).
struct PittResult {
    double num = 0.0, den = 0.0, ratio = 0.0;
    std::string flag;
};

inline PittResult pitt_check(const SampledFunction& f, double alpha, double p, double q,
                             const TransformSettings& st = {}) {
    if (std::isinf(p) || !(p > 1.0 / (alpha + 1.5)))
        throw DomainError("pitt_check: need 1/(alpha + 3/2) < p < infinity");
    if (!(q >= 1.0)) throw DomainError("pitt_check: need q >= 1");
    TransformResult tr = hankel_transform(f, alpha, st);
    detail::fit_power_edges(tr.values);
    PittResult out;
    out.den = weighted_norm(f, p, q);
    out.num = weighted_norm(tr.values, conjugate_exponent(p), q);
    const std::string flag = detail::one_ratio(out.num, out.den, out.ratio);
    out.flag = flag == "ok" && std::isinf(q) ? "sup" : flag;
    if (!std::isfinite(out.ratio)) out.ratio = 0.0;
    return out;
}

// Averaging-operator bounds in the multiplicative measure dx/x.  Head side:
//
//   ( int_0^inf (y^-sigma int_0^y |f| dx/x)^q dy/y )^(1/q)
//       <= C ( int_0^inf (x^-sigma |f|)^q dx/x )^(1/q)
//
// and the tail side mirrors it with y^sigma and the inner integral from y
// upward.  The sharp C is 1/sigma, attained in the limit; at q = 1 Fubini
// turns both into exact equalities, which the tests lean on.  A divergent
// right side makes that side inconclusive rather than a failure.
struct HardySide {
    double lhs = 0.0, rhs = 0.0, ratio = 0.0;
    bool conclusive = true;
    std::string note = "ok";
};

struct HardyResult {
    HardySide head, tail;
};

inline HardyResult hardy_check(const SampledFunction& f, double sigma, double q) {
    if (!(sigma > 0.0)) throw DomainError("hardy_check: sigma must be positive");
    if (!(q >= 1.0) || std::isinf(q)) throw DomainError("hardy_check: need 1 <= q < infinity");
    if (!f.is_real()) throw DomainError("hardy_check: data must be real");

    // |f| as sign-constant pieces: (xa, xb) with end values (va, vb)
    struct Piece {
        double xa, xb, va, vb;
    };
    std::vector<Piece> pieces;
    const bool steps = f.interp() == Interp::PiecewiseConstantLeft;
    f.for_each_cell(f.grid().front(), f.grid().back(),
                    [&](double xa, double xb, std::complex<double> cva, std::complex<double> cvb) {
                        const double va = cva.real(), vb = cvb.real();
                        if (steps) {
                            pieces.push_back({xa, xb, std::abs(va), std::abs(va)});
                        } else if ((va < 0.0) != (vb < 0.0) && va != 0.0 && vb != 0.0) {
                            const double xm = xa + va / (va - vb) * (xb - xa);
                            pieces.push_back({xa, xm, std::abs(va), 0.0});
                            pieces.push_back({xm, xb, 0.0, std::abs(vb)});
                        } else {
                            pieces.push_back({xa, xb, std::abs(va), std::abs(vb)});
                        }
                    });
    const double x0 = f.grid().front(), x1 = f.grid().back();

    // node values of int |f|/x over the window, plus edge-model magnitudes
    std::vector<double> cum(pieces.size() + 1, 0.0);
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const auto& pc = pieces[k];
        const double m = (pc.vb - pc.va) / (pc.xb - pc.xa);
        const double a0 = pc.va - m * pc.xa;
        cum[k + 1] = cum[k] + a0 * std::log(pc.xb / pc.xa) + m * (pc.xb - pc.xa);
    }
    double hc = 0.0, he = 0.0, tc = 0.0, te = 0.0;
    bool head_pow = false, tail_pow = false;
    if (f.tails()) {
        const auto& t = *f.tails();
        if (t.head_kind == TailDescriptor::Kind::Power && t.head_c != 0.0) {
            head_pow = true;
            hc = std::abs(t.head_c);
            he = t.head_e;
        }
        if (t.tail_kind == TailDescriptor::Kind::Power && t.tail_c != 0.0) {
            tail_pow = true;
            tc = std::abs(t.tail_c);
            te = t.tail_e;
        }
    }
    // mass below the window; the rhs divergence screen runs before any use
    const double head_mass = head_pow ? (he > 0.0 ? hc * std::pow(x0, he) / he : kInf) : 0.0;
    const double tail_mass = tail_pow ? (te < 0.0 ? tc * std::pow(x1, te) / (-te) : kInf) : 0.0;

    // cumulative from the left including the head model, valid when head_mass
    // is finite; partial(y) inside piece k uses the same closed forms
    auto a_at = [&](std::size_t k, double y) {
        const auto& pc = pieces[k];
        const double m = (pc.vb - pc.va) / (pc.xb - pc.xa);
        const double a0 = pc.va - m * pc.xa;
        return head_mass + cum[k] + a0 * std::log(y / pc.xa) + m * (y - pc.xa);
    };
    // remaining integral from y upward, independent of the head model
    auto t_at = [&](std::size_t k, double y) {
        const auto& pc = pieces[k];
        const double m = (pc.vb - pc.va) / (pc.xb - pc.xa);
        const double a0 = pc.va - m * pc.xa;
        return (cum.back() - cum[k]) - (a0 * std::log(y / pc.xa) + m * (y - pc.xa)) + tail_mass;
    };

    // geometric panel march for the improper bands; the integrands decay
    // geometrically per octave once the window is left, so two consecutive
    // negligible panels end the sum
    auto band = [&](double edge, bool downward, auto integrand) {
        double acc = 0.0;
        int calm = 0;
        double a = edge;
        for (int j = 0; j < 600 && calm < 2; ++j) {
            const double b = downward ? a * 0.5 : a * 2.0;
            const double part = downward ? quad::gk15(integrand, b, a).value
                                         : quad::gk15(integrand, a, b).value;
            acc += part;
            calm = std::abs(part) <= 1e-14 * std::abs(acc) ? calm + 1 : 0;
            a = b;
        }
        return acc;
    };

    HardyResult out;
    auto run_side = [&](bool head_form, HardySide& side) {
        const double sgn = head_form ? -sigma : sigma;
        side.rhs = weighted_q_norm(f, WeightFunction::power(sgn * q - 1.0), q);
        if (side.rhs == 0.0) {
            side.note = "vacuous";
            return;
        }
        if (std::isinf(side.rhs)) {
            side.conclusive = false;
            side.note = "rhs divergent";
            side.lhs = kInf;
            side.ratio = std::numeric_limits<double>::quiet_NaN();
            return;
        }
        double acc = 0.0;
        if (head_form) {
            // below the window A(y) is the head model's own integral; a finite
            // rhs forces he > sigma here, so the band closes in closed form
            if (head_pow)
                acc += std::pow(hc / he, q) * std::pow(x0, q * (he - sigma)) / (q * (he - sigma));
            for (std::size_t k = 0; k < pieces.size(); ++k)
                acc += quad::gk15(
                           [&](double y) { return std::pow(std::pow(y, -sigma) * a_at(k, y), q) / y; },
                           pieces[k].xa, pieces[k].xb)
                           .value;
            const double a1 = head_mass + cum.back();
            acc += band(x1, false, [&](double y) {
                double a = a1;
                if (tail_pow) a += te == 0.0 ? tc * std::log(y / x1) : tc * (std::pow(y, te) - std::pow(x1, te)) / te;
                return std::pow(std::pow(y, -sigma) * a, q) / y;
            });
        } else {
            // above the window T(y) is the tail model's own integral; a finite
            // rhs forces te < -sigma, closed form again
            if (tail_pow)
                acc += std::pow(tc / -te, q) * std::pow(x1, q * (sigma + te)) / (-q * (sigma + te));
            for (std::size_t k = 0; k < pieces.size(); ++k)
                acc += quad::gk15(
                           [&](double y) { return std::pow(std::pow(y, sigma) * t_at(k, y), q) / y; },
                           pieces[k].xa, pieces[k].xb)
                           .value;
            const double t0 = cum.back() + tail_mass;
            acc += band(x0, true, [&](double y) {
                double t = t0;
                if (head_pow) t += he == 0.0 ? hc * std::log(x0 / y) : hc * (std::pow(x0, he) - std::pow(y, he)) / he;
                return std::pow(std::pow(y, sigma) * t, q) / y;
            });
        }
        side.lhs = std::pow(acc, 1.0 / q);
        side.ratio = side.lhs / side.rhs;
    };
    run_side(true, out.head);
    run_side(false, out.tail);
    return out;
}

// The same function measured on the two scales the equivalence experiments
// move between: x^(q/p-1)-weighted Lebesgue versus Lorentz (p, q).  The two
// coincide for nonincreasing data, so the ratio doubles as an exactness
// check there and as a stability band for sign-changing corpus members.
struct BootonResult {
    double weighted = 0.0, lorentz = 0.0, ratio = 0.0;
    std::string flag;
};

inline BootonResult booton_check(const SampledFunction& f, double p, double q) {
    if (std::isinf(p) ? !std::isinf(q) : !(p > 1.0))
        throw DomainError("booton_check: need 1 < p < infinity, or p = q = infinity");
    if (!(q >= 1.0)) throw DomainError("booton_check: need q >= 1");
    BootonResult out;
    out.weighted = weighted_norm(f, p, q);
    out.lorentz = lorentz_norm(f, p, q);
    const std::string flag = detail::one_ratio(out.weighted, out.lorentz, out.ratio);
    out.flag = flag == "ok" && std::isinf(q) ? "sup" : flag;
    if (!std::isfinite(out.ratio)) out.ratio = 0.0;
    return out;
}

// Full equivalence sweep: certify each corpus member, transform it once per
// dilation rung, and measure both ratio scales for every configured (p, q).
// Rows come out in corpus x spaces x dilations order, so identical configs
// give identical reports.  Members that fail certification are recorded in
// `skipped`, never silently included.
inline RatioReport run_equivalence(const ExperimentConfig& cfg) {
    cfg.validate();
    RatioReport rep;
    rep.alpha = cfg.alpha;
    const Grid xg = Grid::dyadic(cfg.window_lo_exp, cfg.window_hi_exp, cfg.per_octave);
    TransformSettings st = cfg.settings;
    st.y_grid = Grid::dyadic(cfg.y_lo_exp, cfg.y_hi_exp, cfg.y_per_octave);

    bool sign_change = false;
    for (const std::string& desc : cfg.corpus) {
        const AnalyticFunction fn = AnalyticFunction::parse(desc);
        const Interp interp = detail::natural_interp(fn);
        const SampledFunction probe = sample(fn, xg, interp);
        const GMCertificate cert = certify_gm(probe, cfg.lambda);
        if (!cert.is_gm) {
            rep.skipped.push_back(desc + " => " + cert.note);
            continue;
        }
        bool pos = false, neg = false;
        for (std::size_t i = 0; i < probe.size(); ++i) {
            pos = pos || probe.real_value(i) > 0.0;
            neg = neg || probe.real_value(i) < 0.0;
        }
        sign_change = sign_change || (pos && neg);

        struct Rung {
            SampledFunction fs, hs;
            double eps;
        };
        std::vector<Rung> rungs;
        for (double c : cfg.dilations) {
            SampledFunction fs = sample(fn.dilated(c), xg, interp);
            TransformResult tr = hankel_transform(fs, cfg.alpha, st);
            detail::fit_power_edges(tr.values);
            double eps = 0.0;
            for (double e : tr.err_est) eps = std::max(eps, e);
            rungs.push_back({std::move(fs), std::move(tr.values), eps});
        }
        for (const auto& [p, q] : cfg.spaces) {
            for (std::size_t ci = 0; ci < cfg.dilations.size(); ++ci) {
                const auto pair = detail::ratio_pair(rungs[ci].fs, rungs[ci].hs, p, q);
                EquivalenceRow row;
                row.fn = desc;
                row.p = p;
                row.q = q;
                row.c = cfg.dilations[ci];
                row.ratio_lebesgue = pair.lebesgue;
                row.ratio_lorentz = pair.lorentz;
                row.flag = pair.flag;
                if (pair.flag == "ok" || pair.flag == "sup") {
                    const double band = detail::error_band_norm(
                        st.y_grid, reciprocal(conjugate_exponent(p)), q, rungs[ci].eps);
                    row.err_budget = pair.lebesgue * band / pair.num_w;
                } else {
                    row.err_budget = std::numeric_limits<double>::quiet_NaN();
                }
                rep.rows.push_back(std::move(row));
            }
        }
    }
    if (!sign_change) rep.note = "corpus has no certified sign-changing member";
    return rep;
}

enum class ReportFormat { Csv, Json };

namespace detail {

// Shortest exact decimal text; inf and nan round-trip through strtod.
inline std::string number_text(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double number_value(const std::string& s, const char* where) {
    const std::string t = trim(s);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || t.empty())
        throw ConfigError(std::string(where) + ": bad number '" + s + "'");
    return v;
}

inline nlohmann::ordered_json json_number(double v) {
    if (std::isfinite(v)) return v;
    return number_text(v);
}

inline double json_number_value(const nlohmann::ordered_json& j, const char* where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return number_value(j.get<std::string>(), where);
    throw ConfigError(std::string(where) + ": expected a number");
}

}  // namespace detail

inline std::string render_report(const RatioReport& rep, ReportFormat format) {
    if (format == ReportFormat::Json) {
        nlohmann::ordered_json j;
        j["schema_version"] = rep.schema_version;
        j["kind"] = "hankelgm-equivalence-report";
        j["alpha"] = detail::json_number(rep.alpha);
        j["note"] = rep.note;
        j["skipped"] = rep.skipped;
        auto& rows = j["rows"] = nlohmann::ordered_json::array();
        for (const auto& r : rep.rows) {
            nlohmann::ordered_json o;
            o["fn"] = r.fn;
            o["p"] = detail::json_number(r.p);
            o["q"] = detail::json_number(r.q);
            o["c"] = detail::json_number(r.c);
            o["ratio_lebesgue"] = detail::json_number(r.ratio_lebesgue);
            o["ratio_lorentz"] = detail::json_number(r.ratio_lorentz);
            o["err_budget"] = detail::json_number(r.err_budget);
            o["flag"] = r.flag;
            rows.push_back(std::move(o));
        }
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "# hankelgm equivalence report v" << rep.schema_version << "\n";
    os << "# alpha=" << detail::number_text(rep.alpha) << "\n";
    if (!rep.note.empty()) os << "# note: " << rep.note << "\n";
    for (const std::string& s : rep.skipped) os << "# skipped: " << s << "\n";
    os << "fn,p,q,c,ratio_lebesgue,ratio_lorentz,err_budget,flag\n";
    for (const auto& r : rep.rows) {
        os << '"' << r.fn << "\"," << detail::number_text(r.p) << ',' << detail::number_text(r.q)
           << ',' << detail::number_text(r.c) << ',' << detail::number_text(r.ratio_lebesgue)
           << ',' << detail::number_text(r.ratio_lorentz) << ','
           << detail::number_text(r.err_budget) << ',' << r.flag << "\n";
    }
    return os.str();
}

inline RatioReport parse_report(const std::string& text) {
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw ConfigError("report parse: empty input");
    RatioReport rep;
    if (text[first] == '{') {
        nlohmann::ordered_json j;
        try {
            j = nlohmann::ordered_json::parse(text);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("report parse: ") + e.what());
        }
        rep.schema_version = j.at("schema_version").get<int>();
        rep.alpha = detail::json_number_value(j.at("alpha"), "alpha");
        rep.note = j.value("note", std::string());
        for (const auto& s : j.value("skipped", nlohmann::ordered_json::array()))
            rep.skipped.push_back(s.get<std::string>());
        for (const auto& o : j.at("rows")) {
            EquivalenceRow r;
            r.fn = o.at("fn").get<std::string>();
            r.p = detail::json_number_value(o.at("p"), "p");
            r.q = detail::json_number_value(o.at("q"), "q");
            r.c = detail::json_number_value(o.at("c"), "c");
            r.ratio_lebesgue = detail::json_number_value(o.at("ratio_lebesgue"), "ratio_lebesgue");
            r.ratio_lorentz = detail::json_number_value(o.at("ratio_lorentz"), "ratio_lorentz");
            r.err_budget = detail::json_number_value(o.at("err_budget"), "err_budget");
            r.flag = o.at("flag").get<std::string>();
            rep.rows.push_back(std::move(r));
        }
        return rep;
    }
    std::istringstream in(text);
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.rfind("# hankelgm equivalence report v", 0) == 0) {
            rep.schema_version = static_cast<int>(
                detail::number_value(line.substr(31), "report parse: schema"));
            continue;
        }
        if (line.rfind("# alpha=", 0) == 0) {
            rep.alpha = detail::number_value(line.substr(8), "report parse: alpha");
            continue;
        }
        if (line.rfind("# note: ", 0) == 0) {
            rep.note = line.substr(8);
            continue;
        }
        if (line.rfind("# skipped: ", 0) == 0) {
            rep.skipped.push_back(line.substr(11));
            continue;
        }
        if (line[0] == '#') continue;
        if (!saw_header) {
            if (line != "fn,p,q,c,ratio_lebesgue,ratio_lorentz,err_budget,flag")
                throw ConfigError("report parse: unexpected header '" + line + "'");
            saw_header = true;
            continue;
        }
        if (line.size() < 2 || line[0] != '"')
            throw ConfigError("report parse: row must start with a quoted descriptor");
        const std::size_t close = line.find('"', 1);
        if (close == std::string::npos || close + 1 >= line.size() || line[close + 1] != ',')
            throw ConfigError("report parse: malformed row '" + line + "'");
        EquivalenceRow r;
        r.fn = line.substr(1, close - 1);
        const auto cols = detail::split_list(line.substr(close + 2), ',');
        if (cols.size() != 7)
            throw ConfigError("report parse: expected 7 columns after fn in '" + line + "'");
        r.p = detail::number_value(cols[0], "report parse: p");
        r.q = detail::number_value(cols[1], "report parse: q");
        r.c = detail::number_value(cols[2], "report parse: c");
        r.ratio_lebesgue = detail::number_value(cols[3], "report parse: ratio_lebesgue");
        r.ratio_lorentz = detail::number_value(cols[4], "report parse: ratio_lorentz");
        r.err_budget = detail::number_value(cols[5], "report parse: err_budget");
        r.flag = cols[6];
        rep.rows.push_back(std::move(r));
    }
    if (!saw_header) throw ConfigError("report parse: no header line found");
    return rep;
}

inline void emit_report(const RatioReport& rep, const std::string& path, ReportFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("emit_report: cannot open '" + path + "' for writing");
    out << render_report(rep, format);
    out.close();
    if (!out) throw Error("emit_report: write failed for '" + path + "'");
}

}  // namespace hankelgm

#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hankelgm/errors.hpp"

namespace hankelgm {

// Power-law behaviour of |f| outside a sampling window, used by the norm layer
// to add closed-form head/tail contributions (or to report divergence).
//
//   head: |f(x)| ~ c0 * x^e0   as x -> 0+
//   tail: |f(x)| ~ ci * x^ei   as x -> infinity   (ei < 0 for decay)
//
// kind Zero means the function vanishes (or underflows to zero) outside the
// window; kind None means nothing is known and window truncation is silent.
struct TailDescriptor {
    enum class Kind { None, Zero, Power };
    Kind head_kind = Kind::None;
    double head_c = 0.0, head_e = 0.0;
    Kind tail_kind = Kind::None;
    double tail_c = 0.0, tail_e = 0.0;

    static TailDescriptor zero() {
        TailDescriptor t;
        t.head_kind = Kind::Zero;
        t.tail_kind = Kind::Zero;
        return t;
    }
};

// Closed-form test function on (0, infinity).  Shipped kinds:
//
//   power-truncated   a,b      x^(-a) on (0,b), 0 beyond
//   gauss-hermite     a        x^a * exp(-x^2/2)
//   dyadic-sign-power a[,b]    x^(-a) * (-1)^floor(log2 x), optionally cut at b
//   indicator         a,b      chi_[a,b), right-open so step sampling is exact
//   step-mix          (fixed)  3*chi_(0,1) - chi_(1,4)
//   random-step       n,seed   n random levels on dyadic cells of (0,1]
//   custom            closure supplied by the caller, not serialisable
//
// `amplitude` and `dilation` wrap any kind as amplitude * base(dilation * x);
// both transform the tail descriptor exactly, which is what keeps dilation
// ladders closed under the descriptor algebra.
class AnalyticFunction {
public:
    enum class Kind { PowerTruncated, GaussHermite, DyadicSignPower, Indicator, StepMix, RandomStep, Custom };

    static AnalyticFunction power_truncated(double a, double b = 1.0) {
        if (!(b > 0.0)) throw DomainError("power-truncated: support end must be positive");
        AnalyticFunction f;
        f.kind_ = Kind::PowerTruncated;
        f.a_ = a;
        f.b_ = b;
        return f;
    }

    static AnalyticFunction gauss_hermite(double a) {
        AnalyticFunction f;
        f.kind_ = Kind::GaussHermite;
        f.a_ = a;
        return f;
    }

    static AnalyticFunction dyadic_sign_power(double a, double cutoff = 0.0) {
        AnalyticFunction f;
        f.kind_ = Kind::DyadicSignPower;
        f.a_ = a;
        f.b_ = cutoff;  // 0 means no cutoff
        return f;
    }

    static AnalyticFunction indicator(double a, double b) {
        if (!(b > a) || a < 0.0) throw DomainError("indicator: need 0 <= a < b");
        AnalyticFunction f;
        f.kind_ = Kind::Indicator;
        f.a_ = a;
        f.b_ = b;
        return f;
    }

    static AnalyticFunction step_mix() {
        AnalyticFunction f;
        f.kind_ = Kind::StepMix;
        return f;
    }

    static AnalyticFunction random_step(int n, std::uint64_t seed) {
        if (n < 1 || n > 64) throw DomainError("random-step: need 1 <= n <= 64");
        AnalyticFunction f;
        f.kind_ = Kind::RandomStep;
        f.a_ = static_cast<double>(n);
        f.b_ = static_cast<double>(seed);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> level(-2.0, 2.0);
        f.levels_.resize(static_cast<std::size_t>(n));
        for (auto& v : f.levels_) v = level(rng);
        return f;
    }

    static AnalyticFunction custom(std::function<double(double)> eval, std::string name,
                                   TailDescriptor tails = {}) {
        AnalyticFunction f;
        f.kind_ = Kind::Custom;
        f.custom_ = std::move(eval);
        f.custom_name_ = std::move(name);
        f.custom_tails_ = tails;
        return f;
    }

    Kind kind() const { return kind_; }
    double param_a() const { return a_; }
    double param_b() const { return b_; }

    double operator()(double x) const {
        const double v = amplitude_ * base(dilation_ * x);
        return v;
    }

    // amplitude * f(c * x) as a new descriptor.
    AnalyticFunction dilated(double c, double amplitude = 1.0) const {
        if (!(c > 0.0)) throw DomainError("dilated: factor must be positive");
        AnalyticFunction f = *this;
        f.dilation_ *= c;
        f.amplitude_ *= amplitude;
        return f;
    }

    double dilation() const { return dilation_; }
    double amplitude() const { return amplitude_; }

    // Window edge behaviour of the base kind, adjusted for amplitude/dilation:
    // if base ~ c x^e then amplitude*base(dx) ~ amplitude*c*d^e * x^e.
    TailDescriptor tails() const {
        TailDescriptor t = base_tails();
        const double s = std::abs(amplitude_);
        if (t.head_kind == TailDescriptor::Kind::Power)
            t.head_c *= s * std::pow(dilation_, t.head_e);
        if (t.tail_kind == TailDescriptor::Kind::Power) {
            t.tail_c *= s * std::pow(dilation_, t.tail_e);
        } else if (t.tail_kind == TailDescriptor::Kind::Zero) {
            // compact support shrinks by 1/dilation; nothing else to record
        }
        return t;
    }

    // Abscissae where the function jumps or loses smoothness; sampling grids
    // should contain these so variation and level sets are captured exactly.
    std::vector<double> breakpoints() const {
        std::vector<double> b;
        switch (kind_) {
            case Kind::PowerTruncated: b = {b_}; break;
            case Kind::Indicator: b = {a_, b_}; break;
            case Kind::StepMix: b = {1.0, 4.0}; break;
            case Kind::DyadicSignPower:
                if (b_ > 0.0) b = {b_};
                break;  // the dyadic flips themselves sit on aligned grids already
            case Kind::RandomStep: {
                const int n = static_cast<int>(a_);
                for (int i = 0; i <= n; ++i) b.push_back(std::exp2(static_cast<double>(i - n)));
                break;
            }
            default: break;
        }
        for (auto& x : b) x /= dilation_;
        return b;
    }

    // Descriptor string such as "gauss-hermite:a=1.5" or
    // "power-truncated:a=0.25,b=1*dil:c=2".  parse() round-trips these.
    std::string descriptor() const {
        std::ostringstream os;
        os.precision(17);
        switch (kind_) {
            case Kind::PowerTruncated: os << "power-truncated:a=" << a_ << ",b=" << b_; break;
            case Kind::GaussHermite: os << "gauss-hermite:a=" << a_; break;
            case Kind::DyadicSignPower:
                os << "dyadic-sign-power:a=" << a_;
                if (b_ > 0.0) os << ",b=" << b_;
                break;
            case Kind::Indicator: os << "indicator:a=" << a_ << ",b=" << b_; break;
            case Kind::StepMix: os << "step-mix"; break;
            case Kind::RandomStep:
                os << "random-step:n=" << static_cast<int>(a_) << ",seed=" << static_cast<std::uint64_t>(b_);
                break;
            case Kind::Custom: os << "custom:" << custom_name_; break;
        }
        if (dilation_ != 1.0) os << "*dil:c=" << dilation_;
        if (amplitude_ != 1.0) os << "*amp:c=" << amplitude_;
        return os.str();
    }

    static AnalyticFunction parse(const std::string& text);

private:
    double base(double x) const {
        switch (kind_) {
            case Kind::PowerTruncated: return (x > 0.0 && x < b_) ? std::pow(x, -a_) : 0.0;
            case Kind::GaussHermite: return std::pow(x, a_) * std::exp(-0.5 * x * x);
            case Kind::DyadicSignPower: {
                if (x <= 0.0) return 0.0;
                if (b_ > 0.0 && x >= b_) return 0.0;
                const int n = std::ilogb(x);  // exact for dyadic x: sign flips at 2^n
                const double sgn = (n & 1) ? -1.0 : 1.0;
                return sgn * std::pow(x, -a_);
            }
            case Kind::Indicator: return (x >= a_ && x < b_) ? 1.0 : 0.0;
            case Kind::StepMix:
                if (x > 0.0 && x < 1.0) return 3.0;
                if (x >= 1.0 && x < 4.0) return -1.0;
                return 0.0;
            case Kind::RandomStep: {
                // level i on [2^(i-n), 2^(i-n+1)), support [2^-n, 1)
                if (x <= 0.0 || x >= 1.0) return 0.0;
                const int n = static_cast<int>(a_);
                const int i = std::ilogb(x) + n;
                if (i < 0 || i >= n) return 0.0;
                return levels_[static_cast<std::size_t>(i)];
            }
            case Kind::Custom: return custom_(x);
        }
        return 0.0;
    }

    TailDescriptor base_tails() const {
        TailDescriptor t;
        using K = TailDescriptor::Kind;
        switch (kind_) {
            case Kind::PowerTruncated:
                t.head_kind = K::Power;
                t.head_c = 1.0;
                t.head_e = -a_;
                t.tail_kind = K::Zero;
                break;
            case Kind::GaussHermite:
                // x^a at the origin; gaussian decay underflows well inside any
                // practical window, so the tail reads as zero
                t.head_kind = K::Power;
                t.head_c = 1.0;
                t.head_e = a_;
                t.tail_kind = K::Zero;
                break;
            case Kind::DyadicSignPower:
                t.head_kind = K::Power;
                t.head_c = 1.0;
                t.head_e = -a_;
                if (b_ > 0.0) {
                    t.tail_kind = K::Zero;
                } else {
                    t.tail_kind = K::Power;
                    t.tail_c = 1.0;
                    t.tail_e = -a_;
                }
                break;
            case Kind::Indicator:
                t.head_kind = (a_ == 0.0) ? K::Power : K::Zero;
                if (a_ == 0.0) {
                    t.head_c = 1.0;
                    t.head_e = 0.0;
                }
                t.tail_kind = K::Zero;
                break;
            case Kind::StepMix:
                t.head_kind = K::Power;
                t.head_c = 3.0;
                t.head_e = 0.0;
                t.tail_kind = K::Zero;
                break;
            case Kind::RandomStep:
                t.head_kind = K::Zero;  // support starts at 2^-n
                t.tail_kind = K::Zero;
                break;
            case Kind::Custom: return custom_tails_;
        }
        return t;
    }

    Kind kind_ = Kind::Indicator;
    double a_ = 0.0, b_ = 1.0;
    double amplitude_ = 1.0;
    double dilation_ = 1.0;
    std::vector<double> levels_;
    std::function<double(double)> custom_;
    std::string custom_name_;
    TailDescriptor custom_tails_;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// "a=1.5,b=2" -> list of (key, value) pairs
inline std::vector<std::pair<std::string, double>> parse_kv(const std::string& s,
                                                            const std::string& ctx) {
    std::vector<std::pair<std::string, double>> kv;
    if (s.empty()) return kv;
    for (const auto& item : split(s, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("descriptor '" + ctx + "': expected key=value, got '" + item + "'");
        try {
            kv.emplace_back(item.substr(0, eq), std::stod(item.substr(eq + 1)));
        } catch (const std::exception&) {
            throw ConfigError("descriptor '" + ctx + "': bad number in '" + item + "'");
        }
    }
    return kv;
}

inline double kv_get(const std::vector<std::pair<std::string, double>>& kv, const std::string& key,
                     std::optional<double> fallback, const std::string& ctx) {
    for (const auto& [k, v] : kv)
        if (k == key) return v;
    if (fallback) return *fallback;
    throw ConfigError("descriptor '" + ctx + "': missing required parameter '" + key + "'");
}

}  // namespace detail

inline AnalyticFunction AnalyticFunction::parse(const std::string& text) {
    // wrapper segments ("*dil:c=2") apply left to right after the base kind
    auto segments = detail::split(text, '*');
    const std::string& base = segments.front();
    auto colon = base.find(':');
    const std::string name = base.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : base.substr(colon + 1);
    auto kv = detail::parse_kv(args, text);

    AnalyticFunction f;
    if (name == "power-truncated")
        f = power_truncated(detail::kv_get(kv, "a", std::nullopt, text),
                            detail::kv_get(kv, "b", 1.0, text));
    else if (name == "gauss-hermite")
        f = gauss_hermite(detail::kv_get(kv, "a", std::nullopt, text));
    else if (name == "dyadic-sign-power")
        f = dyadic_sign_power(detail::kv_get(kv, "a", std::nullopt, text),
                              detail::kv_get(kv, "b", 0.0, text));
    else if (name == "indicator")
        f = indicator(detail::kv_get(kv, "a", std::nullopt, text),
                      detail::kv_get(kv, "b", std::nullopt, text));
    else if (name == "step-mix")
        f = step_mix();
    else if (name == "random-step")
        f = random_step(static_cast<int>(detail::kv_get(kv, "n", std::nullopt, text)),
                        static_cast<std::uint64_t>(detail::kv_get(kv, "seed", 1.0, text)));
    else
        throw ConfigError("unknown function kind '" + name + "' in descriptor '" + text + "'");

    for (std::size_t i = 1; i < segments.size(); ++i) {
        auto c2 = segments[i].find(':');
        const std::string wname = segments[i].substr(0, c2);
        auto wkv = detail::parse_kv(c2 == std::string::npos ? "" : segments[i].substr(c2 + 1), text);
        const double c = detail::kv_get(wkv, "c", std::nullopt, text);
        if (wname == "dil")
            f = f.dilated(c);
        else if (wname == "amp")
            f = f.dilated(1.0, c);
        else
            throw ConfigError("unknown wrapper '" + wname + "' in descriptor '" + text + "'");
    }
    return f;
}

}  // namespace hankelgm

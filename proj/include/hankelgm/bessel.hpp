#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "hankelgm/errors.hpp"
#include "hankelgm/quadrature.hpp"

namespace hankelgm {

namespace detail {

inline constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// 1/Gamma(x) with poles mapped to 0, so closed-form moment limits involving
// Gamma poles in the denominator come out right.
inline double rgamma(double x) {
    if (x <= 0.0) {
        const double r = std::round(x);
        if (std::abs(x - r) < 1e-12) return 0.0;
    }
    return 1.0 / std::tgamma(x);
}

struct SeriesEval {
    double value;
    double bound;  // rounding bound, ~eps_longdouble * largest term
};

// Ascending series J_alpha(x) = sum_k (-1)^k / (k! Gamma(k+alpha+1)) (x/2)^(alpha+2k),
// accumulated in long double.  Valid for any alpha >= -1/2; the caller keeps x
// below the crossover so cancellation stays harmless.
inline SeriesEval bessel_j_series(double alpha, double x) {
    const long double half = 0.5L * static_cast<long double>(x);
    const long double h2 = half * half;
    long double term = std::pow(half, static_cast<long double>(alpha)) /
                       std::tgamma(static_cast<long double>(alpha) + 1.0L);
    long double sum = term, peak = std::fabs(term);
    for (int k = 1; k <= 200; ++k) {
        term *= -h2 / (static_cast<long double>(k) * (static_cast<long double>(k) + alpha));
        sum += term;
        const long double a = std::fabs(term);
        if (a > peak) peak = a;
        if (a < 1e-22L * std::fabs(sum) + 1e-320L) break;
    }
    return {static_cast<double>(sum), static_cast<double>(peak) * 2.2e-19};
}

// Large-x Hankel expansion J_alpha(x) ~ sqrt(2/(pi x)) (P cos w - Q sin w),
// w = x - alpha pi/2 - pi/4.  Stops at the smallest term; the bound reported
// is that term's size times the prefactor.
inline SeriesEval bessel_j_asymptotic(double alpha, double x) {
    const double mu = 4.0 * alpha * alpha;
    double ak = 1.0;  // A_k = prod_j (mu - (2j-1)^2) / (k! 8^k)
    double p = 1.0, q = 0.0, xk = 1.0;
    double min_term = 1.0;
    for (int k = 1; k <= 40; ++k) {
        const double tm1 = 2.0 * k - 1.0;
        ak *= (mu - tm1 * tm1) / (8.0 * k);
        xk /= x;
        const double term = ak * xk;
        const double at = std::abs(term);
        if (at >= min_term && k > 4) break;  // asymptotic tail started growing
        min_term = std::min(min_term, at);
        switch (k % 4) {
            case 1: q += term; break;
            case 2: p -= term; break;
            case 3: q -= term; break;
            case 0: p += term; break;
        }
    }
    // phase reduced in long double; at x ~ 1e9 a double-precision reduction
    // would already cost ~1e-7 of phase
    const long double w = static_cast<long double>(x) -
                          (static_cast<long double>(alpha) * 0.5L + 0.25L) * kPiL;
    const double cw = static_cast<double>(std::cos(w));
    const double sw = static_cast<double>(std::sin(w));
    const double pref = std::sqrt(2.0 / (kPiL * x));
    return {pref * (p * cw - q * sw), pref * (min_term + 1e-16 * (std::abs(p) + std::abs(q)))};
}

}  // namespace detail

// Bessel function of the first kind, alpha >= -1/2.  Series below
// max(20, 2|alpha|), Hankel expansion above; both sides were validated against
// the elementary alpha = +-1/2 forms.  Throws AccuracyError when neither
// regime can meet `tol` (far outside the orders this library is used with).
inline double bessel_j(double alpha, double x, double tol = 1e-12) {
    if (alpha < -0.5) throw DomainError("bessel_j: order must be >= -1/2");
    if (!(x >= 0.0)) throw DomainError("bessel_j: argument must be >= 0");
    if (x == 0.0) {
        if (alpha > 0.0) return 0.0;
        if (alpha == 0.0) return 1.0;
        return std::numeric_limits<double>::infinity();  // x^alpha blow-up, alpha in (-1/2, 0)
    }
    const double crossover = std::max(20.0, 2.0 * std::abs(alpha));
    detail::SeriesEval e = (x < crossover) ? detail::bessel_j_series(alpha, x)
                                           : detail::bessel_j_asymptotic(alpha, x);
    if (e.bound > tol) {
        // near the crossover the other regime is often sharper (for
        // half-integer orders the expansion even terminates); keep the better
        detail::SeriesEval alt = (x < crossover && x >= 10.0)
                                     ? detail::bessel_j_asymptotic(alpha, x)
                                     : detail::bessel_j_series(alpha, x);
        if (alt.bound < e.bound) e = alt;
    }
    if (e.bound > tol)
        throw AccuracyError("bessel_j: cannot reach tolerance at alpha=" + std::to_string(alpha) +
                                ", x=" + std::to_string(x),
                            e.bound);
    return e.value;
}

// d/dx J_alpha(x) through the recurrence J'_a = (a/x) J_a - J_{a+1}.
inline double bessel_j_deriv(double alpha, double x) {
    if (!(x > 0.0)) throw DomainError("bessel_j_deriv: argument must be positive");
    return (alpha / x) * bessel_j(alpha, x) - bessel_j(alpha + 1.0, x);
}

// k-th positive zero of J_alpha: McMahon estimate polished by Newton.
inline double bessel_j_zero(double alpha, int k) {
    if (alpha < -0.5 || alpha > 30.0) throw DomainError("bessel_j_zero: order out of range");
    if (k < 1) throw DomainError("bessel_j_zero: zero index starts at 1");
    const double pi = static_cast<double>(detail::kPiL);
    const double mu = 4.0 * alpha * alpha;
    const double beta = (k + 0.5 * alpha - 0.25) * pi;
    double x = beta - (mu - 1.0) / (8.0 * beta) -
               4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * std::pow(8.0 * beta, 3));
    if (!(x > 0.0)) x = beta;
    for (int it = 0; it < 30; ++it) {
        const double f = bessel_j(alpha, x);
        const double d = bessel_j_deriv(alpha, x);
        if (d == 0.0) break;
        const double step = f / d;
        x -= step;
        if (std::abs(step) < 1e-14 * x) break;
    }
    return x;
}

// All zeros of J_alpha inside (a, b), ascending.
inline std::vector<double> bessel_j_zeros_in(double alpha, double a, double b) {
    std::vector<double> out;
    if (!(b > a) || b <= 0.0) return out;
    const double pi = static_cast<double>(detail::kPiL);
    int k = std::max(1, static_cast<int>(std::floor(a / pi - 0.5 * alpha + 0.25)) - 2);
    for (;; ++k) {
        const double z = bessel_j_zero(alpha, k);
        if (z >= b) break;
        if (z > a) out.push_back(z);
        if (k > 2000000) throw ConvergenceError("bessel_j_zeros_in: runaway zero enumeration");
    }
    return out;
}

namespace detail {

// Abel-regularised value of integral_0^inf u^s J_alpha(u) du.
inline double bessel_moment_limit(double alpha, double s) {
    return std::pow(2.0, s) * std::tgamma(0.5 * (alpha + s + 1.0)) * rgamma(0.5 * (alpha - s + 1.0));
}

// Tail integral_z^inf u^s J_alpha(u) du by termwise integration by parts of the
// Hankel expansion.  u^s J_alpha(u) = sqrt(2/pi) Re[e^{-i phi} g(u) e^{iu}] with
// g(u) = sum_k i^k A_k u^{s-1/2-k}, and
//   I_p(z) = integral_z^inf u^p e^{iu} du = i z^p e^{iz} + i p I_{p-1}(z)
// (boundary at infinity in the Abel sense).  The recursion is run upward from a
// two-term seed at the lowest power, which is stable for |p| < z.
inline double bessel_moment_tail(double alpha, double s, double z, double* bound) {
    const double mu = 4.0 * alpha * alpha;
    // coefficients i^k A_k and the powers p_k = s - 1/2 - k, truncated at the
    // smallest surviving term
    std::vector<std::complex<double>> coef;
    double ak = 1.0, min_term = std::numeric_limits<double>::max();
    int kmax = 0;
    {
        double zp = std::pow(z, s - 0.5);
        for (int k = 0; k <= 30; ++k) {
            if (k > 0) {
                const double tm1 = 2.0 * k - 1.0;
                ak *= (mu - tm1 * tm1) / (8.0 * k);
                zp /= z;
            }
            const double mag = std::abs(ak) * zp;
            if (k > 2 && mag >= min_term) break;
            min_term = std::min(min_term, mag);
            static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            coef.push_back(ipow[k % 4] * ak);
            kmax = k;
        }
    }
    // e^{iz} with long-double phase reduction
    const long double zr = std::fmod(static_cast<long double>(z), 2.0L * kPiL);
    const std::complex<double> eiz(static_cast<double>(std::cos(zr)), static_cast<double>(std::sin(zr)));
    const std::complex<double> iu(0.0, 1.0);

    const double p_low = s - 0.5 - kmax;
    std::complex<double> I = iu * std::pow(z, p_low - 1.0) * eiz;
    I = iu * std::pow(z, p_low) * eiz + iu * p_low * I;  // two-term seed
    std::complex<double> acc = coef[static_cast<std::size_t>(kmax)] * I;
    for (int k = kmax - 1; k >= 0; --k) {
        const double p = s - 0.5 - k;
        I = iu * std::pow(z, p) * eiz + iu * p * I;
        acc += coef[static_cast<std::size_t>(k)] * I;
    }
    const double phi = (0.5 * alpha + 0.25) * static_cast<double>(kPiL);
    const std::complex<double> rot(std::cos(phi), -std::sin(phi));
    const double pref = std::sqrt(2.0 / static_cast<double>(kPiL));
    if (bound) *bound = pref * (min_term + 1e-15 * std::abs(acc));
    return pref * (rot * acc).real();
}

}  // namespace detail

// integral_0^x t^s J_alpha(t) dt for the moments the transform needs (s = 1/2
// and s = 3/2 for the cell algebra, other powers for edge models).  Series
// head, short quadrature stretch, and the integration-by-parts tail beyond
// z = 24 stitched together.
inline double bessel_moment_primitive(double alpha, double s, double z, double tol = 1e-10) {
    if (alpha < -0.5) throw DomainError("bessel_moment_primitive: order must be >= -1/2");
    if (s < -0.95 || s > 3.5) throw DomainError("bessel_moment_primitive: moment power out of range");
    if (s + alpha <= -0.99)
        throw DomainError("bessel_moment_primitive: integrand not integrable at 0");
    if (!(z >= 0.0)) throw DomainError("bessel_moment_primitive: upper limit must be >= 0");
    if (z == 0.0) return 0.0;

    const double series_end = 20.0;
    const double asym_start = std::max(24.0, 2.5 * std::abs(alpha) * std::abs(alpha));
    if (z > asym_start) {
        double bound = 0.0;
        const double tail = detail::bessel_moment_tail(alpha, s, z, &bound);
        // the primitive oscillates with amplitude ~ z^(s-1/2); the tolerance
        // is read relative to that scale, else s = 3/2 at large z could never pass
        const double scale = std::max(1.0, std::pow(z, s - 0.5));
        if (bound > tol * scale)
            throw AccuracyError("bessel_moment_primitive: tail expansion stalled at z=" +
                                    std::to_string(z),
                                bound);
        return detail::bessel_moment_limit(alpha, s) - tail;
    }

    // series piece on [0, min(z, 12)]
    const double zh = std::min(z, series_end);
    long double sum = 0.0L;
    {
        const long double half = 0.5L * static_cast<long double>(zh);
        long double c = std::pow(half, static_cast<long double>(alpha)) /
                        std::tgamma(static_cast<long double>(alpha) + 1.0L);
        // term_k integrated: c_k * zh^(s+1) / (s + alpha + 2k + 1), c_k the J series coefficient at zh
        long double zpow = std::pow(static_cast<long double>(zh), static_cast<long double>(s) + 1.0L);
        const long double h2 = half * half;
        for (int k = 0; k <= 200; ++k) {
            if (k > 0) c *= -h2 / (static_cast<long double>(k) * (static_cast<long double>(k) + alpha));
            const long double term = c * zpow / (static_cast<long double>(s) + alpha + 2.0L * k + 1.0L);
            sum += term;
            if (std::fabs(term) < 1e-24L * std::fabs(sum) + 1e-320L && k > 2) break;
        }
    }
    double result = static_cast<double>(sum);
    if (z > series_end) {
        result += quad::adaptive([alpha, s](double u) { return std::pow(u, s) * bessel_j(alpha, u); },
                                 series_end, z, 0.25 * tol, 4000);
    }
    return result;
}

// integral_z^inf u^s J_alpha(u) du, improper for s < 1/2.  Straight from the
// asymptotic expansion when z is already in its regime, else as the Abel limit
// minus the primitive, with a short quadrature bridge when the integrand is
// too singular at 0 for the primitive to exist.
inline double bessel_moment_from(double alpha, double s, double z, double tol = 1e-10) {
    if (alpha < -0.5) throw DomainError("bessel_moment_from: order must be >= -1/2");
    if (!(s < 0.5)) throw DomainError("bessel_moment_from: tail integral needs s < 1/2");
    if (!(z > 0.0)) throw DomainError("bessel_moment_from: lower limit must be positive");
    const double asym_start = std::max(24.0, 2.5 * std::abs(alpha) * std::abs(alpha));
    if (z >= asym_start) {
        double bound = 0.0;
        const double tail = detail::bessel_moment_tail(alpha, s, z, &bound);
        if (bound > tol)
            throw AccuracyError("bessel_moment_from: tail expansion stalled at z=" +
                                    std::to_string(z),
                                bound);
        return tail;
    }
    if (s >= -0.95 && s + alpha > -0.99)
        return detail::bessel_moment_limit(alpha, s) - bessel_moment_primitive(alpha, s, z, tol);
    const double mid =
        quad::adaptive([alpha, s](double u) { return std::pow(u, s) * bessel_j(alpha, u); }, z,
                       asym_start, 0.25 * tol, 4000);
    double bound = 0.0;
    const double tail = detail::bessel_moment_tail(alpha, s, asym_start, &bound);
    return mid + tail;
}

// Kernel primitive K_y^alpha(x) = integral_0^x t^(1/2) J_alpha(t y) dt
//                               = y^(-3/2) integral_0^(xy) u^(1/2) J_alpha(u) du.
inline double kernel_primitive(double alpha, double y, double x, double tol = 1e-10) {
    if (!(y > 0.0)) throw DomainError("kernel_primitive: frequency y must be positive");
    if (!(x >= 0.0)) throw DomainError("kernel_primitive: upper limit must be >= 0");
    // tolerance is honoured on the y^(3/2)-normalised level, matching the
    // uniform bound |K| <= C y^(-3/2)
    return std::pow(y, -1.5) * bessel_moment_primitive(alpha, 0.5, x * y, tol);
}

}  // namespace hankelgm

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hankelgm/bessel.hpp"
#include "hankelgm/quadrature.hpp"

using namespace hankelgm;

namespace {
constexpr double kPi = 3.14159265358979323846;

double j_half(double x) { return std::sqrt(2.0 / (kPi * x)) * std::sin(x); }
double j_minus_half(double x) { return std::sqrt(2.0 / (kPi * x)) * std::cos(x); }
}  // namespace

TEST_CASE("half-integer orders reduce to elementary forms") {
    // spot values first
    CHECK(bessel_j(0.5, kPi / 2) == Catch::Approx(2.0 / kPi).epsilon(1e-12));
    CHECK(bessel_j(-0.5, kPi) == Catch::Approx(-std::sqrt(2.0) / kPi).epsilon(1e-12));

    // sweep across both evaluation regimes
    for (int i = 0; i <= 400; ++i) {
        const double x = 1e-2 * std::pow(50.0 / 1e-2, i / 400.0);
        CHECK(std::abs(bessel_j(0.5, x) - j_half(x)) < 1e-12);
        CHECK(std::abs(bessel_j(-0.5, x) - j_minus_half(x)) < 1e-12);
    }
}

TEST_CASE("series limit at the origin") {
    CHECK(bessel_j(0.0, 1e-8) == Catch::Approx(1.0).margin(1e-12));
    CHECK(bessel_j(0.0, 0.0) == 1.0);
    CHECK(bessel_j(2.0, 0.0) == 0.0);
    CHECK(std::isinf(bessel_j(-0.25, 0.0)));
}

TEST_CASE("series and asymptotic regimes agree across the crossover") {
    for (double alpha : {-0.5, 0.0, 0.7, 1.0, 2.0, 3.5}) {
        // crossover sits at max(20, 2|alpha|); compare one-sided evaluations
        // against a fine adaptive integral of the derivative relation instead
        // of trusting either branch: J(b) - J(a) = int_a^b J'(t) dt
        const double a = 19.0, b = 21.0;
        const double lhs = bessel_j(alpha, b) - bessel_j(alpha, a);
        const double rhs = quad::adaptive(
            [alpha](double t) { return bessel_j_deriv(alpha, t); }, a, b, 1e-13);
        CHECK(lhs == Catch::Approx(rhs).margin(1e-11));
    }
}

TEST_CASE("envelope bound holds on a log-spaced sweep") {
    for (double alpha : {-0.5, 0.0, 0.5, 1.5, 2.0}) {
        // |J_alpha(x)| <= C min(x^alpha, x^(-1/2)) with a fixed C
        const double c_alpha = 1.1;
        for (int i = 0; i <= 160; ++i) {
            const double x = std::pow(10.0, -3.0 + 6.0 * i / 160.0);
            const double env = c_alpha * std::min(std::pow(x, alpha), std::pow(x, -0.5));
            CHECK(std::abs(bessel_j(alpha, x)) <= env + 1e-14);
        }
    }
}

TEST_CASE("zeros interlace and vanish") {
    for (double alpha : {-0.5, 0.0, 0.5, 1.0, 2.5}) {
        double prev = 0.0;
        for (int k = 1; k <= 12; ++k) {
            const double z = bessel_j_zero(alpha, k);
            CHECK(z > prev);
            CHECK(std::abs(bessel_j(alpha, z)) < 1e-11);
            prev = z;
        }
    }
    // J_{1/2} zeros are exactly k*pi
    for (int k = 1; k <= 8; ++k)
        CHECK(bessel_j_zero(0.5, k) == Catch::Approx(k * kPi).epsilon(1e-12));
}

TEST_CASE("zeros_in enumerates exactly the zeros of an interval") {
    auto zs = bessel_j_zeros_in(0.5, 2.0, 20.0);
    REQUIRE(zs.size() == 6);  // pi..6pi
    for (std::size_t i = 0; i < zs.size(); ++i)
        CHECK(zs[i] == Catch::Approx((i + 1) * kPi).epsilon(1e-12));
}

TEST_CASE("moment primitives match the elementary forms at alpha = +-1/2") {
    const double c = std::sqrt(2.0 / kPi);
    for (double z : {0.3, 2.0, 9.0, 25.0, 39.0, 55.0, 300.0, 4e3, 2e7}) {
        CHECK(std::abs(bessel_moment_primitive(-0.5, 0.5, z) - c * std::sin(z)) < 2e-10);
        CHECK(std::abs(bessel_moment_primitive(0.5, 0.5, z) - c * (1.0 - std::cos(z))) < 2e-10);
        CHECK(std::abs(bessel_moment_primitive(0.5, 1.5, z) - c * (std::sin(z) - z * std::cos(z))) <
              2e-10 * std::max(1.0, z));
        CHECK(std::abs(bessel_moment_primitive(-0.5, 1.5, z) -
                       c * (std::cos(z) + z * std::sin(z) - 1.0)) < 2e-10 * std::max(1.0, z));
    }
}

TEST_CASE("moment primitive: quadrature route agrees with the tail expansion route") {
    for (double alpha : {0.0, 0.7, 1.5, 2.0}) {
        for (double s : {-0.5, 0.5, 1.5, 3.0}) {
            if (s + alpha <= -0.99) continue;
            // below 24 the implementation integrates; above it switches to
            // limit - tail; stitch across the seam by adding a bridge integral
            const double z0 = 23.5, z1 = 28.0;
            const double below = bessel_moment_primitive(alpha, s, z0);
            const double bridge = quad::adaptive(
                [alpha, s](double u) { return std::pow(u, s) * bessel_j(alpha, u); }, z0, z1, 1e-12);
            const double above = bessel_moment_primitive(alpha, s, z1);
            const double scale = std::max(1.0, std::pow(z1, s - 0.5));
            CHECK(below + bridge == Catch::Approx(above).margin(5e-10 * scale));
        }
    }
}

TEST_CASE("moment tail integral: differences match direct quadrature") {
    // from(z1) - from(z2) telescopes to a finite integral any quadrature can do
    for (double alpha : {0.0, 0.7, 1.5}) {
        for (double s : {-1.7, -0.5, 0.3}) {
            const double z1 = 5.0, z2 = 60.0;
            const double diff =
                bessel_moment_from(alpha, s, z1) - bessel_moment_from(alpha, s, z2);
            const double direct = quad::adaptive(
                [alpha, s](double u) { return std::pow(u, s) * bessel_j(alpha, u); }, z1, z2, 1e-12);
            CHECK(diff == Catch::Approx(direct).margin(1e-8));
        }
    }
    // the tail itself shrinks like z^(s-1/2)
    CHECK(std::abs(bessel_moment_from(0.0, -0.5, 400.0)) < 2.0 / 400.0);
}

TEST_CASE("kernel primitive: closed form, derivative relation, uniform bound") {
    const double c = std::sqrt(2.0 / kPi);
    // K_y^{-1/2}(x) = sqrt(2/pi) sin(xy) / y^{3/2}
    for (double y : {0.25, 1.0, 2.0, 7.0})
        for (double x : {0.1, 1.0, kPi / 2, 10.0, 123.0})
            CHECK(std::abs(kernel_primitive(-0.5, y, x) - c * std::sin(x * y) * std::pow(y, -1.5)) <
                  1e-9 * std::pow(y, -1.5));

    // frozen spot value: K_2^{1/2}(10) = sqrt(2/pi) (1 - cos 20) / 2^{3/2}
    CHECK(kernel_primitive(0.5, 2.0, 10.0) ==
          Catch::Approx(c * (1.0 - std::cos(20.0)) / std::pow(2.0, 1.5)).margin(1e-10));

    // d/dx K_y^alpha(x) = x^{1/2} J_alpha(x y), centred difference check
    for (double alpha : {0.0, 1.0}) {
        const double y = 1.7, x = 3.0, h = 1e-5;
        const double lhs = (kernel_primitive(alpha, y, x + h) - kernel_primitive(alpha, y, x - h)) /
                           (2.0 * h);
        CHECK(lhs == Catch::Approx(std::sqrt(x) * bessel_j(alpha, x * y)).margin(1e-7));
    }

    // sup_x |K_y^alpha(x)| stays below a fixed multiple of y^{-3/2}
    for (double alpha : {-0.5, 0.0, 0.5, 2.0}) {
        for (double y : {0.5, 1.0, 4.0}) {
            double sup = 0.0;
            for (int i = 0; i <= 300; ++i) {
                const double x = std::pow(10.0, -2.0 + 5.0 * i / 300.0);
                sup = std::max(sup, std::abs(kernel_primitive(alpha, y, x)));
            }
            CHECK(sup <= 2.5 * std::pow(y, -1.5));
        }
    }
}

TEST_CASE("domain and accuracy errors surface as typed exceptions") {
    CHECK_THROWS_AS(bessel_j(-0.75, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_j(0.5, -1.0), DomainError);
    CHECK_THROWS_AS(bessel_j_zero(0.5, 0), DomainError);
    CHECK_THROWS_AS(bessel_moment_primitive(0.5, 4.0, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_moment_primitive(0.0, -0.99, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_moment_from(0.0, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_moment_from(0.0, -0.5, 0.0), DomainError);
    // order far outside the supported envelope: the evaluation must refuse
    // rather than return garbage
    CHECK_THROWS_AS(bessel_j(28.0, 43.0, 1e-12), AccuracyError);
}

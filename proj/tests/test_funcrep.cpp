#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "hankelgm/analytic.hpp"
#include "hankelgm/grid.hpp"
#include "hankelgm/io.hpp"
#include "hankelgm/sampled.hpp"

using namespace hankelgm;

TEST_CASE("dyadic grids put powers of two on nodes exactly") {
    const Grid g = Grid::dyadic(-2, 3, 16);
    REQUIRE(g.size() == 5 * 16 + 1);
    for (int k = 0; k <= 5; ++k)
        CHECK(g.node(static_cast<std::size_t>(16 * k)) == std::exp2(-2 + k));
    CHECK(g.per_octave() == 16);
    CHECK(g.e_lo() == -2);
    CHECK(g.is_geometric());

    // geometric() with matching parameters lands on the same abscissae up to
    // rounding in log2(ratio)
    const Grid h = Grid::geometric(0.25, 8.0, std::pow(2.0, 1.0 / 16));
    REQUIRE(h.size() == g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(h.node(i) == Catch::Approx(g.node(i)).epsilon(1e-14));
    CHECK(h.per_octave() == 0);  // alignment witness only set by dyadic()

    CHECK(g.locate(0.5) == 16);
    CHECK(g.locate(g.node(7) * 1.0001) == 7);
    CHECK(g.locate(8.0) == g.size() - 1);
    CHECK_THROWS_AS(g.locate(0.1), DomainError);
    CHECK_THROWS_AS(g.locate(9.0), DomainError);
}

TEST_CASE("grid construction rejects bad parameters") {
    CHECK_THROWS_AS(Grid::geometric(1.0, 0.5, 1.1), DomainError);
    CHECK_THROWS_AS(Grid::geometric(1.0, 2.0, 1.0), DomainError);
    CHECK_THROWS_AS(Grid::geometric(1.0, 2.0, 2.5), DomainError);
    CHECK_THROWS_AS(Grid::dyadic(3, 3, 8), DomainError);
    CHECK_THROWS_AS(Grid::dyadic(0, 1, 0), DomainError);
    CHECK_THROWS_AS(Grid::explicit_nodes({1.0}), DomainError);
    CHECK_THROWS_AS(Grid::explicit_nodes({1.0, 1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(Grid::explicit_nodes({-1.0, 2.0}), DomainError);
    CHECK_NOTHROW(Grid::explicit_nodes({0.0, 1.0, 2.5}));  // rearrangements start at 0
}

TEST_CASE("analytic kinds evaluate their defining formulas") {
    const auto pt = AnalyticFunction::power_truncated(0.5, 1.0);
    CHECK(pt(0.25) == std::pow(0.25, -0.5));
    CHECK(pt(1.0) == 0.0);
    CHECK(pt(2.0) == 0.0);

    const auto gh = AnalyticFunction::gauss_hermite(2.0);
    CHECK(gh(1.5) == std::pow(1.5, 2.0) * std::exp(-0.5 * 1.5 * 1.5));

    const auto ind = AnalyticFunction::indicator(0.5, 2.0);
    CHECK(ind(1.0) == 1.0);
    CHECK(ind(0.5) == 1.0);  // right-open [a, b)
    CHECK(ind(0.4999) == 0.0);
    CHECK(ind(2.0) == 0.0);
    CHECK(ind(3.0) == 0.0);

    const auto sm = AnalyticFunction::step_mix();
    CHECK(sm(0.5) == 3.0);
    CHECK(sm(1.0) == -1.0);
    CHECK(sm(3.9) == -1.0);
    CHECK(sm(4.0) == 0.0);
}

TEST_CASE("dyadic sign flips happen exactly at powers of two") {
    const auto f = AnalyticFunction::dyadic_sign_power(0.0);
    CHECK(f(1.0) == 1.0);
    CHECK(f(1.999) == 1.0);
    CHECK(f(2.0) == -1.0);
    CHECK(f(3.0) == -1.0);
    CHECK(f(4.0) == 1.0);
    CHECK(f(0.5) == -1.0);
    CHECK(f(0.25) == 1.0);
    CHECK(f(0.7) == -1.0);

    const auto g = AnalyticFunction::dyadic_sign_power(0.5, 8.0);
    CHECK(g(3.0) == -std::pow(3.0, -0.5));
    CHECK(g(8.0) == 0.0);  // cutoff
    CHECK(g(9.0) == 0.0);
}

TEST_CASE("random step levels are reproducible from the seed") {
    const auto f = AnalyticFunction::random_step(6, 99);
    const auto g = AnalyticFunction::random_step(6, 99);
    const auto h = AnalyticFunction::random_step(6, 100);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 40; ++i) {
        const double x = 0.99 * (i + 1) / 41.0;
        all_equal = all_equal && f(x) == g(x);
        any_diff = any_diff || f(x) != h(x);
        CHECK(std::abs(f(x)) < 2.0);
    }
    CHECK(all_equal);
    CHECK(any_diff);
    // support is [2^-6, 1)
    CHECK(f(std::exp2(-7)) == 0.0);
    CHECK(f(1.0) == 0.0);
}

TEST_CASE("dilation and amplitude wrap values, tails, and breakpoints") {
    const auto f = AnalyticFunction::gauss_hermite(1.0).dilated(2.0, 3.0);
    CHECK(f(0.7) == 3.0 * (1.4 * std::exp(-0.5 * 1.4 * 1.4)));
    const TailDescriptor tf = f.tails();
    CHECK(tf.head_kind == TailDescriptor::Kind::Power);
    CHECK(tf.head_c == 6.0);  // 3 * 2^1
    CHECK(tf.head_e == 1.0);
    CHECK(tf.tail_kind == TailDescriptor::Kind::Zero);

    const auto g = AnalyticFunction::power_truncated(0.5, 1.0).dilated(4.0);
    CHECK(g(0.2) == std::pow(0.8, -0.5));
    CHECK(g(0.3) == 0.0);  // support shrank to (0, 1/4)
    REQUIRE(g.breakpoints().size() == 1);
    CHECK(g.breakpoints()[0] == 0.25);
    const TailDescriptor tg = g.tails();
    CHECK(tg.head_c == 0.5);  // 4^(-1/2)
    CHECK(tg.head_e == -0.5);

    CHECK_THROWS_AS(f.dilated(0.0), DomainError);
    CHECK_THROWS_AS(f.dilated(-1.0), DomainError);
}

TEST_CASE("descriptor strings round-trip through parse") {
    std::vector<AnalyticFunction> corpus;
    corpus.push_back(AnalyticFunction::power_truncated(0.25));
    corpus.push_back(AnalyticFunction::power_truncated(1.0, 3.0));
    corpus.push_back(AnalyticFunction::gauss_hermite(2.5));
    corpus.push_back(AnalyticFunction::dyadic_sign_power(0.5));
    corpus.push_back(AnalyticFunction::dyadic_sign_power(0.3, 8.0));
    corpus.push_back(AnalyticFunction::indicator(0.0, 1.0));
    corpus.push_back(AnalyticFunction::indicator(0.5, 2.25));
    corpus.push_back(AnalyticFunction::step_mix());
    corpus.push_back(AnalyticFunction::random_step(6, 99));
    const std::size_t n_base = corpus.size();
    for (std::size_t i = 0; i < n_base; ++i) corpus.push_back(corpus[i].dilated(2.0, 0.75));

    for (const auto& f : corpus) {
        const auto rt = AnalyticFunction::parse(f.descriptor());
        CHECK(rt.descriptor() == f.descriptor());
        for (int i = 1; i <= 30; ++i) {
            const double x = 0.3 * i;
            CHECK(rt(x) == f(x));  // bitwise: same kind, same parameters
        }
    }
}

TEST_CASE("descriptor parse rejects malformed input") {
    CHECK_THROWS_AS(AnalyticFunction::parse("wobble:a=1"), ConfigError);
    CHECK_THROWS_AS(AnalyticFunction::parse("indicator:a=0"), ConfigError);
    CHECK_THROWS_AS(AnalyticFunction::parse("power-truncated:a=abc"), ConfigError);
    CHECK_THROWS_AS(AnalyticFunction::parse("power-truncated:a"), ConfigError);
    CHECK_THROWS_AS(AnalyticFunction::parse("indicator:a=2,b=1"), DomainError);
    CHECK_THROWS_AS(AnalyticFunction::parse("gauss-hermite:a=1*wib:c=2"), ConfigError);
    CHECK_THROWS_AS(AnalyticFunction::parse("gauss-hermite:a=1*dil"), ConfigError);
}

TEST_CASE("sampling is node-exact and flags off-grid breakpoints") {
    const Grid g = Grid::dyadic(-2, 2, 4);
    const auto gh = AnalyticFunction::gauss_hermite(1.0);
    const SampledFunction s = sample(gh, g, Interp::PiecewiseLinear);
    REQUIRE(s.size() == g.size());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.real_value(i) == gh(g.node(i)));
    CHECK(s.source() == gh.descriptor());
    CHECK(s.warnings().empty());
    REQUIRE(s.tails().has_value());
    CHECK(s.tails()->head_e == 1.0);

    // indicator edge at 1 sits on a node, edge at 0 is outside the window
    const auto ok = sample(AnalyticFunction::indicator(0.0, 1.0), g, Interp::PiecewiseConstantLeft);
    CHECK(ok.warnings().empty());

    // 0.3 falls strictly between nodes
    const auto warned = sample(AnalyticFunction::indicator(0.0, 0.3), g, Interp::PiecewiseConstantLeft);
    REQUIRE(warned.warnings().size() == 1);
    CHECK(warned.warnings()[0].find("0.3") != std::string::npos);

    const auto bad = AnalyticFunction::custom([](double x) { return std::sqrt(x - 2.0); }, "sqrt-shift");
    CHECK_THROWS_AS(sample(bad, g, Interp::PiecewiseLinear), SamplingError);

    // support reaching past the window voids a claimed zero tail
    const auto clipped = sample(AnalyticFunction::power_truncated(0.5, 4.0), Grid::dyadic(-4, 0, 4),
                                Interp::PiecewiseLinear);
    REQUIRE(clipped.tails().has_value());
    CHECK(clipped.tails()->tail_kind == TailDescriptor::Kind::None);
    CHECK(!clipped.warnings().empty());

    // and support starting below the window voids a claimed zero head
    const auto rs = sample(AnalyticFunction::random_step(6, 3), Grid::dyadic(-3, 0, 1),
                           Interp::PiecewiseConstantLeft);
    CHECK(rs.tails()->head_kind == TailDescriptor::Kind::None);
}

TEST_CASE("interpolated evaluation follows the interpretation rule") {
    const Grid g = Grid::explicit_nodes({1.0, 2.0, 4.0});
    const SampledFunction lin = SampledFunction::real(g, {1.0, 3.0, 1.0}, Interp::PiecewiseLinear);
    CHECK(lin.eval_real(1.5) == 2.0);
    CHECK(lin.eval_real(3.0) == 2.0);
    CHECK(lin.eval_real(4.0) == 1.0);
    const SampledFunction stp = SampledFunction::real(g, {1.0, 3.0, 1.0}, Interp::PiecewiseConstantLeft);
    CHECK(stp.eval_real(1.5) == 1.0);
    CHECK(stp.eval_real(2.0) == 3.0);
    CHECK(stp.eval_real(3.999) == 3.0);
    CHECK(stp.eval_real(4.0) == 1.0);
    CHECK_THROWS_AS(lin.eval_real(0.5), DomainError);
    CHECK_THROWS_AS(lin.eval_real(5.0), DomainError);

    CHECK_THROWS_AS(SampledFunction::real(g, {1.0, 2.0}, Interp::PiecewiseLinear), DomainError);
    CHECK_THROWS_AS(
        SampledFunction::real(g, {1.0, std::nan(""), 2.0}, Interp::PiecewiseLinear), SamplingError);
}

TEST_CASE("integrate is exact on its interpretation class") {
    // piecewise linear: exact for an affine integrand, including partial cells
    const Grid g = Grid::explicit_nodes({1.0, 1.7, 2.5, 4.0});
    const auto aff = AnalyticFunction::custom([](double x) { return 2.0 * x + 1.0; }, "affine");
    const SampledFunction s = sample(aff, g, Interp::PiecewiseLinear);
    auto exact = [](double a, double b) { return (b * b + b) - (a * a + a); };
    CHECK(integrate_real(s, 1.0, 4.0) == Catch::Approx(exact(1.0, 4.0)).margin(1e-12));
    CHECK(integrate_real(s, 1.3, 3.1) == Catch::Approx(exact(1.3, 3.1)).margin(1e-12));
    CHECK(integrate_real(s, 2.5, 2.5) == 0.0);
    CHECK_THROWS_AS(integrate_real(s, 0.5, 3.0), DomainError);
    CHECK_THROWS_AS(integrate_real(s, 1.0, 5.0), DomainError);

    // piecewise constant: exact for step data on an aligned grid
    const auto rs = AnalyticFunction::random_step(3, 42);
    const Grid d = Grid::dyadic(-3, 0, 1);
    const SampledFunction t = sample(rs, d, Interp::PiecewiseConstantLeft);
    const double want = rs(0.125) * 0.125 + rs(0.25) * 0.25 + rs(0.5) * 0.5;
    CHECK(integrate_real(t, 0.125, 1.0) == Catch::Approx(want).margin(1e-15));
    CHECK(integrate_real(t, 0.25, 0.75) ==
          Catch::Approx(rs(0.25) * 0.25 + rs(0.5) * 0.25).margin(1e-15));

    // trapezoid accuracy on a smooth integrand: int_1^2 dx/x = log 2
    const Grid fine = Grid::dyadic(0, 1, 256);
    const auto inv = AnalyticFunction::power_truncated(1.0, 4.0);
    const SampledFunction u = sample(inv, fine, Interp::PiecewiseLinear);
    CHECK(integrate_real(u, 1.0, 2.0) == Catch::Approx(std::log(2.0)).margin(1e-6));
}

TEST_CASE("total variation of monotone data telescopes") {
    const Grid g = Grid::dyadic(0, 1, 32);
    const SampledFunction s =
        sample(AnalyticFunction::power_truncated(1.0, 4.0), g, Interp::PiecewiseLinear);
    CHECK(total_variation(s, 1.0, 2.0) == Catch::Approx(0.5).margin(1e-12));
    // 1.5 is off-node, so the reference value is the interpolant's own
    CHECK(total_variation(s, 1.0, 1.5) == Catch::Approx(1.0 - s.eval_real(1.5)).margin(1e-12));
    CHECK(total_variation(s, 1.2, 1.2) == 0.0);
}

TEST_CASE("total variation counts jumps on the half-open interval (a, b]") {
    // sign flips at 2 and 4; sampled piecewise linear the flip shows up as a
    // steep ramp in the final cell before the node, same total variation
    const Grid g = Grid::dyadic(-1, 2, 16);
    const SampledFunction s =
        sample(AnalyticFunction::dyadic_sign_power(0.0), g, Interp::PiecewiseLinear);
    CHECK(total_variation(s, 1.0, 2.0) == Catch::Approx(2.0).margin(1e-12));
    CHECK(total_variation(s, 1.0, 4.0) == Catch::Approx(4.0).margin(1e-12));
    CHECK(total_variation(s, 2.0, 4.0) == Catch::Approx(2.0).margin(1e-12));  // jump at 2 excluded
    CHECK(total_variation(s, 1.0, 1.9) == Catch::Approx(0.0).margin(1e-12));

    // step interpretation: jumps sit exactly at the nodes
    const Grid c = Grid::dyadic(-1, 2, 1);
    const SampledFunction t =
        sample(AnalyticFunction::dyadic_sign_power(0.0), c, Interp::PiecewiseConstantLeft);
    CHECK(total_variation(t, 1.0, 2.0) == 2.0);
    CHECK(total_variation(t, 0.5, 4.0) == 6.0);
    CHECK(total_variation(t, 2.0, 4.0) == 2.0);

    const SampledFunction ind =
        sample(AnalyticFunction::indicator(1.0, 2.0), Grid::dyadic(-1, 2, 8), Interp::PiecewiseLinear);
    CHECK(total_variation(ind, 0.5, 4.0) == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("even and odd parts of a real-line function") {
    // chi_(-1,2): even part chi_(0,1) + chi_(1,2)/2, odd part chi_(1,2)/2
    const Grid g = Grid::dyadic(-3, 2, 8);
    auto f = [](double x) { return (x > -1.0 && x < 2.0) ? 1.0 : 0.0; };
    const auto [fe, fo] = even_odd_split(f, g);
    CHECK(fe.eval_real(0.5) == 1.0);
    CHECK(fe.eval_real(1.5) == 0.5);
    CHECK(fe.eval_real(3.0) == 0.0);
    CHECK(fo.eval_real(0.5) == 0.0);
    CHECK(fo.eval_real(1.5) == 0.5);
    CHECK(fo.eval_real(3.0) == 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(fe.real_value(i) + fo.real_value(i) == f(g.node(i)));

    auto bad = [](double x) { return 1.0 / (x + 1.0); };  // blows up at node 1 mirrored
    CHECK_THROWS_AS(even_odd_split(bad, Grid::explicit_nodes({0.5, 1.0, 2.0})), SamplingError);
}

TEST_CASE("csv plus sidecar round-trips a sampled function") {
    const std::string path = "funcrep_roundtrip.csv";

    // dyadic grid, tails, warnings
    const Grid g = Grid::dyadic(-4, 2, 8);
    SampledFunction s =
        sample(AnalyticFunction::power_truncated(0.25, 1.0), g, Interp::PiecewiseLinear);
    s.add_warning("synthetic warning for the round trip");
    write_sampled(s, path);
    const SampledFunction r = read_sampled(path);
    REQUIRE(r.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(r.grid().node(i) == s.grid().node(i));
        CHECK(r.value(i) == s.value(i));
    }
    CHECK(r.grid().per_octave() == 8);
    CHECK(r.grid().e_lo() == -4);
    CHECK(r.interp() == Interp::PiecewiseLinear);
    CHECK(r.source() == s.source());
    REQUIRE(r.tails().has_value());
    CHECK(r.tails()->head_kind == s.tails()->head_kind);
    CHECK(r.tails()->head_c == s.tails()->head_c);
    CHECK(r.tails()->head_e == s.tails()->head_e);
    CHECK(r.tails()->tail_kind == s.tails()->tail_kind);
    REQUIRE(r.warnings().size() == 1);
    CHECK(r.warnings()[0] == s.warnings()[0]);

    // explicit grid, complex values, step interpretation, no tails
    const Grid e = Grid::explicit_nodes({0.0, 0.3, 1.0, 2.7});
    SampledFunction c(e, {{1.0, -2.0}, {0.5, 0.25}, {-1.0 / 3.0, 1e-300}, {0.0, 0.0}},
                      Interp::PiecewiseConstantLeft);
    c.set_source("hand-built");
    write_sampled(c, path);
    const SampledFunction rc = read_sampled(path);
    REQUIRE(rc.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(rc.grid().node(i) == c.grid().node(i));
        CHECK(rc.value(i) == c.value(i));
    }
    CHECK(rc.interp() == Interp::PiecewiseConstantLeft);
    CHECK(rc.grid().per_octave() == 0);
    CHECK(!rc.tails().has_value());
    CHECK(rc.source() == "hand-built");

    std::remove(path.c_str());
    std::remove((path + ".json").c_str());
    CHECK_THROWS_AS(read_sampled(path), ConfigError);
}

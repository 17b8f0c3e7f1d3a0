#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hankelgm/harness.hpp"

using namespace hankelgm;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

// two positive levels with the larger one away from the origin, so the
// modulus is not already nonincreasing and the two norm scales disagree
SampledFunction two_level_step() {
    auto fn = AnalyticFunction::custom(
        [](double x) { return x < 1.0 ? 0.5 : (x < 3.0 ? 2.0 : 0.0); }, "two-level",
        TailDescriptor::zero());
    return sample(fn, Grid::explicit_nodes({0.0, 0.5, 1.0, 2.0, 3.0}),
                  Interp::PiecewiseConstantLeft);
}

SampledFunction zero_function() {
    auto fn = AnalyticFunction::custom([](double) { return 0.0; }, "null", TailDescriptor::zero());
    return sample(fn, Grid::dyadic(-4, 2, 4), Interp::PiecewiseConstantLeft);
}

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

bool same_report(const RatioReport& a, const RatioReport& b) {
    if (a.schema_version != b.schema_version || !same_double(a.alpha, b.alpha)) return false;
    if (a.note != b.note || a.skipped != b.skipped || a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const auto& x = a.rows[i];
        const auto& y = b.rows[i];
        if (x.fn != y.fn || x.flag != y.flag) return false;
        if (!same_double(x.p, y.p) || !same_double(x.q, y.q) || !same_double(x.c, y.c))
            return false;
        if (!same_double(x.ratio_lebesgue, y.ratio_lebesgue) ||
            !same_double(x.ratio_lorentz, y.ratio_lorentz) ||
            !same_double(x.err_budget, y.err_budget))
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("conjugate exponents") {
    CHECK(conjugate_exponent(2.0) == 2.0);
    CHECK(conjugate_exponent(1.5) == Approx(3.0).margin(1e-14));
    CHECK(conjugate_exponent(4.0) == Approx(4.0 / 3.0).margin(1e-14));
    CHECK(std::isinf(conjugate_exponent(1.0)));
    CHECK(conjugate_exponent(kInf) == 1.0);
}

TEST_CASE("experiment config parses the flat key=value format") {
    const std::string text =
        "# equivalence run\n"
        "alpha = 1.5\n"
        "corpus = indicator:a=0,b=1 ; random-step:n=6,seed=auto\n"
        "spaces = 2,2 ; 1.5,inf\n"
        "dilations = 0.5 ; 1 ; 2\n"
        "window_lo_exp = -8\n"
        "window_hi_exp = 4\n"
        "per_octave = 16\n"
        "y_lo_exp = -3\n"
        "y_hi_exp = 3\n"
        "y_per_octave = 4\n"
        "lambda = 4\n"
        "tail = direct\n"
        "quad_tol = 1e-8\n"
        "ladder = 5\n"
        "cell_order = 1\n"
        "accelerate = 1\n"
        "out = run.csv\n"
        "format = json\n"
        "seed = 97\n"
        "alpha = 0.5   # duplicates win late\n";
    const ExperimentConfig cfg = ExperimentConfig::parse_text(text);
    CHECK(cfg.alpha == 0.5);
    REQUIRE(cfg.corpus.size() == 2);
    CHECK(cfg.corpus[0] == "indicator:a=0,b=1");
    CHECK(cfg.corpus[1] == "random-step:n=6,seed=97");
    REQUIRE(cfg.spaces.size() == 2);
    CHECK(cfg.spaces[0] == std::pair<double, double>{2.0, 2.0});
    CHECK(cfg.spaces[1].first == 1.5);
    CHECK(std::isinf(cfg.spaces[1].second));
    CHECK(cfg.dilations == std::vector<double>{0.5, 1.0, 2.0});
    CHECK(cfg.window_lo_exp == -8);
    CHECK(cfg.per_octave == 16);
    CHECK(cfg.y_per_octave == 4);
    CHECK(cfg.lambda == 4.0);
    CHECK(cfg.settings.tail_mode == TailMode::Direct);
    CHECK(cfg.settings.quad_tol == 1e-8);
    CHECK(cfg.settings.ladder == 5);
    CHECK(cfg.settings.cell_order == 1);
    CHECK(cfg.settings.accelerate);
    CHECK(cfg.out_path == "run.csv");
    CHECK(cfg.format == "json");
    CHECK(cfg.seed == 97);
    CHECK_NOTHROW(cfg.validate());
    CHECK_NOTHROW(AnalyticFunction::parse(cfg.corpus[1]));

    CHECK_THROWS_AS(ExperimentConfig::parse_text("spaces = 2,2,2\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse_text("no equals sign here\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse_text("mystery = 3\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse_text("alpha = fast\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse_text("tail = sideways\n"), ConfigError);
    CHECK_THROWS_WITH(ExperimentConfig::parse_file("/no/such/dir/run.cfg"),
                      ContainsSubstring("/no/such/dir/run.cfg"));
}

TEST_CASE("experiment config validation guards the theorem ranges") {
    ExperimentConfig cfg;
    cfg.corpus = {"indicator:a=0,b=1"};
    cfg.spaces = {{2.0, 2.0}};
    CHECK_NOTHROW(cfg.validate());

    ExperimentConfig bad = cfg;
    bad.corpus.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.spaces.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.spaces = {{1.0, 2.0}};  // p must sit strictly above max(1, 1/(alpha+3/2))
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.alpha = -0.5;
    bad.spaces = {{1.2, 2.0}};
    CHECK_NOTHROW(bad.validate());
    bad.spaces = {{1.2, 0.5}};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.alpha = -0.7;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.dilations = {1.0, -2.0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.lambda = 3.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.window_hi_exp = bad.window_lo_exp;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.format = "xml";
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("booton ratio is exactly one for nonincreasing data") {
    // box: both scales reduce to (p/q)^(1/q) in closed form
    auto box = sample(AnalyticFunction::indicator(0.0, 1.0), Grid::dyadic(-8, 0, 16),
                      Interp::PiecewiseConstantLeft);
    auto r = booton_check(box, 1.5, 4.0);
    CHECK(r.weighted == Approx(0.78254229003664366).margin(1e-12));
    CHECK(r.lorentz == Approx(0.78254229003664366).margin(1e-12));
    CHECK(r.ratio == Approx(1.0).margin(1e-11));
    CHECK(r.flag == "ok");

    // singular decreasing head, model-extended below the window
    auto sing = sample(AnalyticFunction::power_truncated(0.2), Grid::dyadic(-10, 0, 32),
                       Interp::PiecewiseLinear);
    CHECK(booton_check(sing, 2.0, 3.0).ratio == Approx(1.0).margin(1e-10));

    // p = q collapses both scales to plain L^p for any data, monotone or not
    auto mix = sample(AnalyticFunction::step_mix(), Grid::dyadic(-6, 2, 8),
                      Interp::PiecewiseConstantLeft);
    CHECK(booton_check(mix, 2.0, 2.0).ratio == Approx(1.0).margin(1e-11));
    auto gh = sample(AnalyticFunction::gauss_hermite(1.0), Grid::dyadic(-10, 4, 64),
                     Interp::PiecewiseLinear);
    CHECK(booton_check(gh, 1.5, 1.5).ratio == Approx(1.0).margin(1e-9));
}

TEST_CASE("booton ratios against frozen two-scale values") {
    auto f = two_level_step();
    auto r23 = booton_check(f, 2.0, 3.0);
    CHECK(r23.weighted == Approx(2.8215519231823354).margin(1e-12));
    CHECK(r23.lorentz == Approx(2.4815849599385932).margin(1e-11));
    CHECK(r23.ratio == Approx(1.1369958992869439).margin(1e-11));
    CHECK(r23.flag == "ok");
    CHECK(booton_check(f, 1.5, 4.0).ratio == Approx(1.2901334275860235).margin(1e-11));
    CHECK(booton_check(f, 3.0, 2.0).ratio == Approx(0.8402891948915391).margin(1e-11));

    // smooth hump: frozen against direct evaluation of both scale integrals
    auto gh = sample(AnalyticFunction::gauss_hermite(1.0), Grid::dyadic(-10, 4, 64),
                     Interp::PiecewiseLinear);
    CHECK(booton_check(gh, 2.0, 1.0).ratio == Approx(0.68351651421174672).margin(5e-5));
    CHECK(booton_check(gh, 3.0, 2.0).ratio == Approx(0.85815737040405349).margin(5e-5));

    // sup scale: both sides are the essential sup
    auto rinf = booton_check(f, kInf, kInf);
    CHECK(rinf.weighted == 2.0);
    CHECK(rinf.ratio == Approx(1.0).margin(1e-12));
    CHECK(rinf.flag == "sup");

    CHECK_THROWS_AS(booton_check(f, 1.0, 2.0), DomainError);
    CHECK_THROWS_AS(booton_check(f, 2.0, 0.5), DomainError);
    CHECK_THROWS_AS(booton_check(f, kInf, 2.0), DomainError);
}

TEST_CASE("hardy averaging bounds") {
    // f = x^(1/2) on (0, 1): head ratio is (1/a)(a/sigma)^(1/q) in closed form
    auto f = sample(AnalyticFunction::power_truncated(-0.5), Grid::dyadic(-12, 0, 64),
                    Interp::PiecewiseLinear);
    auto r = hardy_check(f, 0.25, 2.0);
    CHECK(r.head.conclusive);
    CHECK(r.tail.conclusive);
    CHECK(r.head.ratio == Approx(2.8284271247461901).epsilon(5e-4));
    CHECK(r.head.ratio <= (1.0 / 0.25) * 1.02);
    CHECK(r.tail.ratio > 0.0);
    CHECK(r.tail.ratio <= (1.0 / 0.25) * 1.02);

    // q = 1 collapses both sides to exact equality at 1/sigma by Fubini,
    // for any data, so it doubles as a quadrature accuracy check
    auto r1 = hardy_check(f, 0.25, 1.0);
    CHECK(r1.head.ratio == Approx(4.0).epsilon(1e-7));
    CHECK(r1.tail.ratio == Approx(4.0).epsilon(1e-7));
    auto det = sample(AnalyticFunction::indicator(0.25, 1.0), Grid::dyadic(-8, 2, 16),
                      Interp::PiecewiseConstantLeft);
    auto rdet = hardy_check(det, 0.25, 1.0);
    CHECK(rdet.head.ratio == Approx(4.0).epsilon(1e-6));
    CHECK(rdet.tail.ratio == Approx(4.0).epsilon(1e-6));
    auto sgn = sample(AnalyticFunction::dyadic_sign_power(-0.5, 1.0),
                      Grid::dyadic(-8, 0, 32), Interp::PiecewiseLinear);
    auto rsgn = hardy_check(sgn, 0.25, 1.0);
    CHECK(rsgn.head.ratio == Approx(4.0).epsilon(1e-6));
    CHECK(rsgn.tail.ratio == Approx(4.0).epsilon(1e-6));

    // x^(-sigma) head makes the right side diverge: inconclusive, not a fail
    auto sing = sample(AnalyticFunction::power_truncated(0.25), Grid::dyadic(-12, 0, 32),
                       Interp::PiecewiseLinear);
    auto rs = hardy_check(sing, 0.25, 2.0);
    CHECK_FALSE(rs.head.conclusive);
    CHECK_THAT(rs.head.note, ContainsSubstring("divergent"));
    CHECK_FALSE(rs.tail.conclusive);  // head exponent sits exactly at -sigma
    // past the head exponent the tail form converges and obeys its 1/sigma bound
    auto rt = hardy_check(sing, 0.5, 2.0);
    CHECK_FALSE(rt.head.conclusive);
    CHECK(rt.tail.conclusive);
    CHECK(rt.tail.ratio <= 2.0 * 1.02);

    auto rz = hardy_check(zero_function(), 0.5, 2.0);
    CHECK(rz.head.note == "vacuous");
    CHECK(rz.tail.note == "vacuous");
    CHECK(rz.head.ratio == 0.0);

    CHECK_THROWS_AS(hardy_check(f, 0.0, 2.0), DomainError);
    CHECK_THROWS_AS(hardy_check(f, 0.5, 0.9), DomainError);
    CHECK_THROWS_AS(hardy_check(f, 0.5, kInf), DomainError);
}

TEST_CASE("pitt bound at interior and endpoint exponents") {
    // transform eigenfunction at p = 2: numerator and denominator norms agree
    // for every q, endpoints included
    auto f = sample(AnalyticFunction::gauss_hermite(1.0), Grid::dyadic(-9, 4, 48),
                    Interp::PiecewiseLinear);
    TransformSettings st;
    st.cell_order = 3;
    st.y_grid = Grid::dyadic(-6, 3, 24);
    // the numerator reads the image through chords on the y grid, so the
    // agreement floor is the chord sag of that grid, not transform accuracy;
    // q = 2 is the exception because trapezoid bias cancels under the hump
    for (double q : {1.0, 2.0, 4.0}) {
        auto r = pitt_check(f, 0.5, 2.0, q, st);
        INFO("q=" << q);
        CHECK(r.flag == "ok");
        CHECK(r.ratio == Approx(1.0).epsilon(q == 2.0 ? 1e-4 : 2e-4));
    }
    auto rsup = pitt_check(f, 0.5, 2.0, kInf, st);
    CHECK(rsup.flag == "sup");
    CHECK(rsup.ratio == Approx(1.0).epsilon(5e-4));

    // box at the q = 1 endpoint: exact ratio is 1, but the oscillatory image
    // decays like 1/y, its octave fits are rejected, and the norm keeps only
    // the window; push the window far out and accept percent-level agreement
    auto box = sample(AnalyticFunction::indicator(0.0, 1.0), Grid::dyadic(-8, 2, 16),
                      Interp::PiecewiseConstantLeft);
    TransformSettings stb;
    stb.y_grid = Grid::dyadic(-5, 12, 8);
    stb.ladder = 10;  // the head-model partials need m*y << 1 at the top octaves
    auto rb = pitt_check(box, 0.5, 2.0, 1.0, stb);
    CHECK(rb.flag == "ok");
    CHECK(rb.ratio == Approx(1.0).epsilon(0.03));

    auto rz = pitt_check(zero_function(), 0.5, 2.0, 2.0, st);
    CHECK(rz.flag == "vacuous");
    CHECK(rz.ratio == 0.0);

    CHECK_THROWS_AS(pitt_check(f, 0.5, 0.4, 2.0, st), DomainError);
    CHECK_THROWS_AS(pitt_check(f, 0.5, 2.0, 0.5, st), DomainError);
    CHECK_THROWS_AS(pitt_check(f, 0.5, kInf, 2.0, st), DomainError);
}

namespace {

const char* kRunConfig =
    "alpha = 0.5\n"
    "corpus = gauss-hermite:a=1 ; indicator:a=0,b=1 ; dyadic-sign-power:a=0.25,b=8 ; "
    "indicator:a=1,b=2\n"
    "spaces = 2,2 ; 1.5,1\n"
    "dilations = 1 ; 2\n"
    "window_lo_exp = -10\n"
    "window_hi_exp = 5\n"
    "per_octave = 32\n"
    "y_lo_exp = -5\n"
    "y_hi_exp = 5\n"
    "y_per_octave = 8\n";

}  // namespace

TEST_CASE("equivalence sweep produces ordered, flagged, stable ratios") {
    const ExperimentConfig cfg = ExperimentConfig::parse_text(kRunConfig);
    const RatioReport rep = run_equivalence(cfg);

    CHECK(rep.skipped.empty());
    CHECK(rep.note.empty());  // the sign-power member changes sign and certifies

    REQUIRE(rep.rows.size() == 4 * 2 * 2);
    CHECK(rep.rows[0].fn == "gauss-hermite:a=1");
    CHECK(rep.rows[0].p == 2.0);
    CHECK(rep.rows[0].c == 1.0);
    CHECK(rep.rows[1].c == 2.0);
    CHECK(rep.rows[2].p == 1.5);
    CHECK(rep.rows[2].q == 1.0);
    CHECK(rep.rows[4].fn == "indicator:a=0,b=1");
    CHECK(rep.rows[8].fn == "dyadic-sign-power:a=0.25,b=8");

    for (const auto& row : rep.rows) {
        INFO(row.fn << " p=" << row.p << " q=" << row.q << " c=" << row.c);
        CHECK(row.flag == "ok");
        CHECK(std::isfinite(row.ratio_lebesgue));
        CHECK(row.ratio_lebesgue > 0.0);
        CHECK(std::isfinite(row.ratio_lorentz));
        CHECK(row.ratio_lorentz > 0.0);
        CHECK(row.ratio_lebesgue > 0.2);
        CHECK(row.ratio_lebesgue < 5.0);
        CHECK(row.ratio_lorentz > 0.2);
        CHECK(row.ratio_lorentz < 5.0);
        CHECK(row.err_budget >= 0.0);
        CHECK(row.err_budget < 0.05 * row.ratio_lebesgue);
        // p = q rows compare the same quantity on both scales
        if (row.p == row.q)
            CHECK(row.ratio_lorentz == Approx(row.ratio_lebesgue).epsilon(1e-10));
    }

    // p = 2 forward ratios are Plancherel ratios; the gaussian member is
    // captured to y-grid accuracy, the rough members lose window tail mass
    CHECK(rep.rows[0].ratio_lebesgue == Approx(1.0).epsilon(2e-3));
    CHECK(rep.rows[4].ratio_lebesgue == Approx(1.0).epsilon(0.05));
    CHECK(rep.rows[8].ratio_lebesgue == Approx(1.0).epsilon(0.12));
    CHECK(rep.rows[12].ratio_lebesgue == Approx(1.0).epsilon(0.05));

    // dilation moves both norms by the same factor; for the gaussian member
    // every piece is either exact or modelled, so the ratio barely moves,
    // while compact members push image mass past the fixed y window
    CHECK(rep.rows[1].ratio_lebesgue ==
          Approx(rep.rows[0].ratio_lebesgue).epsilon(1e-5));
    CHECK(rep.rows[1].ratio_lorentz == Approx(rep.rows[0].ratio_lorentz).epsilon(1e-5));
    for (std::size_t i = 0; i + 1 < rep.rows.size(); i += 2) {
        INFO(rep.rows[i].fn << " p=" << rep.rows[i].p << " q=" << rep.rows[i].q);
        CHECK(rep.rows[i + 1].ratio_lebesgue ==
              Approx(rep.rows[i].ratio_lebesgue).epsilon(0.1));
    }
}

TEST_CASE("certification refusals are recorded, not silently dropped") {
    // on the finest grid a one-cell plateau carries a unit jump on 1.7e-4 of
    // log-mass; blocks that graze the jump see almost none of it, so the
    // certification ratio blows past its cap (or to infinity outright)
    const ExperimentConfig cfg = ExperimentConfig::parse_text(
        "alpha = 0.5\n"
        "corpus = indicator:a=1,b=1.0001\n"
        "spaces = 2,2\n"
        "dilations = 1\n"
        "window_lo_exp = -2\n"
        "window_hi_exp = 2\n"
        "per_octave = 4096\n"
        "y_lo_exp = -2\n"
        "y_hi_exp = 1\n"
        "y_per_octave = 8\n");
    const RatioReport rep = run_equivalence(cfg);
    CHECK(rep.rows.empty());
    REQUIRE(rep.skipped.size() == 1);
    CHECK_THAT(rep.skipped[0], ContainsSubstring("indicator:a=1,b=1.0001 => "));
    CHECK_THAT(rep.skipped[0], ContainsSubstring("ratio"));
    CHECK_FALSE(rep.note.empty());  // nothing certified, so nothing sign-changing
}

TEST_CASE("equivalence run matches pitt on the same inputs") {
    ExperimentConfig cfg = ExperimentConfig::parse_text(kRunConfig);
    cfg.corpus = {"gauss-hermite:a=1"};
    cfg.spaces = {{1.5, 1.0}};
    cfg.dilations = {1.0};
    const RatioReport rep = run_equivalence(cfg);
    REQUIRE(rep.rows.size() == 1);

    TransformSettings st = cfg.settings;
    st.y_grid = Grid::dyadic(cfg.y_lo_exp, cfg.y_hi_exp, cfg.y_per_octave);
    auto f = sample(AnalyticFunction::parse("gauss-hermite:a=1"),
                    Grid::dyadic(cfg.window_lo_exp, cfg.window_hi_exp, cfg.per_octave),
                    Interp::PiecewiseLinear);
    const PittResult pr = pitt_check(f, cfg.alpha, 1.5, 1.0, st);
    CHECK(pr.ratio == Approx(rep.rows[0].ratio_lebesgue).epsilon(1e-13));
}

TEST_CASE("amplitude scaling leaves equivalence ratios unchanged") {
    ExperimentConfig cfg = ExperimentConfig::parse_text(kRunConfig);
    cfg.corpus = {"gauss-hermite:a=1", "gauss-hermite:a=1*amp:c=3"};
    cfg.spaces = {{2.0, 4.0}};
    cfg.dilations = {1.0};
    const RatioReport rep = run_equivalence(cfg);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[1].ratio_lebesgue == Approx(rep.rows[0].ratio_lebesgue).epsilon(1e-12));
    CHECK(rep.rows[1].ratio_lorentz == Approx(rep.rows[0].ratio_lorentz).epsilon(1e-12));
}

TEST_CASE("divergence on both sides is flagged as equivalence-consistent") {
    ExperimentConfig cfg = ExperimentConfig::parse_text(kRunConfig);
    // the x^(-0.9) head puts the (2, 2) norm past its convergence edge, and
    // the image decays like y^(-0.1), so its tail norm diverges in step
    cfg.corpus = {"power-truncated:a=0.9", "dyadic-sign-power:a=0.25,b=8"};
    cfg.spaces = {{2.0, 2.0}};
    cfg.dilations = {1.0};
    const RatioReport rep = run_equivalence(cfg);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].flag == "both-infinite");
    CHECK(std::isnan(rep.rows[0].ratio_lebesgue));
    CHECK(std::isnan(rep.rows[0].ratio_lorentz));
    CHECK(std::isnan(rep.rows[0].err_budget));
    CHECK(rep.rows[1].flag == "ok");
    CHECK(rep.note.empty());
}

TEST_CASE("a corpus without sign changes is noted") {
    ExperimentConfig cfg = ExperimentConfig::parse_text(kRunConfig);
    cfg.corpus = {"indicator:a=0,b=1"};
    cfg.spaces = {{2.0, 2.0}};
    cfg.dilations = {1.0};
    const RatioReport rep = run_equivalence(cfg);
    CHECK_THAT(rep.note, ContainsSubstring("sign-changing"));
}

namespace {

RatioReport sample_report() {
    RatioReport rep;
    rep.alpha = 0.5;
    rep.note = "corpus has no certified sign-changing member";
    rep.skipped = {"indicator:a=1,b=2 => non-finite ratio observed"};
    EquivalenceRow a;
    a.fn = "power-truncated:a=0.25,b=1*dil:c=2";
    a.p = 1.5;
    a.q = 2.0;
    a.c = 0.5;
    a.ratio_lebesgue = 1.125;
    a.ratio_lorentz = 0.9862931358799547;
    a.err_budget = 3.5e-9;
    a.flag = "ok";
    EquivalenceRow b;
    b.fn = "gauss-hermite:a=1";
    b.p = 2.0;
    b.q = kInf;
    b.c = 1.0;
    b.ratio_lebesgue = 1.0000000021;
    b.ratio_lorentz = 1.0;
    b.err_budget = 1e-8;
    b.flag = "sup";
    EquivalenceRow c;
    c.fn = "dyadic-sign-power:a=0.25";
    c.p = 2.0;
    c.q = 2.0;
    c.c = 1.0;
    c.ratio_lebesgue = std::numeric_limits<double>::quiet_NaN();
    c.ratio_lorentz = std::numeric_limits<double>::quiet_NaN();
    c.err_budget = std::numeric_limits<double>::quiet_NaN();
    c.flag = "both-infinite";
    rep.rows = {a, b, c};
    return rep;
}

}  // namespace

TEST_CASE("reports round-trip exactly through both formats") {
    const RatioReport rep = sample_report();

    const std::string csv = render_report(rep, ReportFormat::Csv);
    CHECK(csv == render_report(rep, ReportFormat::Csv));  // deterministic
    CHECK_THAT(csv, ContainsSubstring("fn,p,q,c,ratio_lebesgue,ratio_lorentz,err_budget,flag"));
    CHECK_THAT(csv, ContainsSubstring("\"power-truncated:a=0.25,b=1*dil:c=2\",1.5,2,0.5,"));
    CHECK_THAT(csv, ContainsSubstring(",inf,"));
    CHECK(same_report(parse_report(csv), rep));

    const std::string json = render_report(rep, ReportFormat::Json);
    CHECK(json.front() == '{');
    CHECK_THAT(json, ContainsSubstring("\"schema_version\": 1"));
    CHECK_THAT(json, ContainsSubstring("hankelgm-equivalence-report"));
    CHECK(same_report(parse_report(json), rep));

    // empty report: header-only table, zero rows back
    RatioReport empty;
    empty.alpha = 1.5;
    const RatioReport back = parse_report(render_report(empty, ReportFormat::Csv));
    CHECK(back.rows.empty());
    CHECK(back.alpha == 1.5);
    CHECK(same_report(back, empty));
    CHECK(same_report(parse_report(render_report(empty, ReportFormat::Json)), empty));

    CHECK_THROWS_AS(parse_report(""), ConfigError);
    CHECK_THROWS_AS(parse_report("hello\nworld\n"), ConfigError);
    CHECK_THROWS_AS(parse_report("{\"schema_version\": bad"), ConfigError);
}

TEST_CASE("emit_report writes files and surfaces path errors") {
    const RatioReport rep = sample_report();
    const std::string path = "harness_report_roundtrip.csv";
    emit_report(rep, path, ReportFormat::Csv);
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == render_report(rep, ReportFormat::Csv));
    in.close();
    std::remove(path.c_str());

    CHECK_THROWS_WITH(emit_report(rep, "/no/such/dir/report.csv", ReportFormat::Json),
                      ContainsSubstring("/no/such/dir/report.csv"));
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "thinfilm/asymptotics.hpp"
#include "thinfilm/error.hpp"

using namespace thinfilm;

namespace {

QuadConfig quick()
{
    QuadConfig c;
    c.samples = 1 << 13;
    c.workers = 1;
    return c;
}

std::vector<std::pair<double, double>> series(int k0, int k1, auto f)
{
    std::vector<std::pair<double, double>> out;
    for (int k = k0; k <= k1; ++k)
        out.emplace_back(std::ldexp(1.0, -k), f(k));
    return out;
}

Field unit_jump() { return Field::pwc({0.5}, {0.0, 1.0}); }

} // namespace

TEST_CASE("classify_schedule")
{
    const auto grid = dyadic_grid(3, 8);
    const auto c = classify_schedule(Schedule{Schedule::Constant{0.25}}, grid);
    CHECK(c.regime.tag == RegimeClass::Tag::rho_zero);
    CHECK(c.pconv_case == 1);
    const auto l = classify_schedule(Schedule{Schedule::LogReciprocal{1.0}}, grid);
    CHECK(l.regime.tag == RegimeClass::Tag::rho_mid);
    CHECK(l.regime.rho == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(l.pconv_case == 2);
    const auto p = classify_schedule(Schedule{Schedule::Power{1.0}}, grid);
    CHECK(p.regime.tag == RegimeClass::Tag::rho_one);
    CHECK(p.pconv_case == 3);
    // stable under refinement
    const auto fine = classify_schedule(Schedule{Schedule::LogReciprocal{1.0}}, dyadic_grid(3, 20));
    CHECK(fine.regime.rho == l.regime.rho);

    try {
        classify_schedule(Schedule{Schedule::Power{2.5}}, grid);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::unclassifiable);
    }
    // eps^s oscillates
    Schedule bumpy{Schedule::Table{{{0.5, 0.1}, {0.25, 0.9}, {0.125, 0.1}, {0.0625, 0.9}}}};
    CHECK_THROWS_AS(classify_schedule(bumpy, {0.5, 0.25, 0.125, 0.0625}), Error);
    // table that follows s = 1 / |log eps|
    std::vector<std::pair<double, double>> rows;
    for (double e : grid)
        rows.emplace_back(e, 1.0 / std::abs(std::log(e)));
    const auto t = classify_schedule(Schedule{Schedule::Table{rows}}, grid);
    CHECK(t.regime.tag == RegimeClass::Tag::rho_mid);
    CHECK(t.regime.rho == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("fit_power_law")
{
    const auto f = fit_power_law(series(3, 8, [](int k) { return 3.0 * std::ldexp(1.0, -2 * k); }));
    CHECK(f.exponent == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.prefactor == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
    const auto g = fit_power_law(series(3, 8, [](int k) { return std::pow(2.0, -1.5 * k); }));
    CHECK(g.exponent == doctest::Approx(1.5).epsilon(1e-12));

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    const auto n = fit_power_law(series(3, 8, [&](int k) { return std::ldexp(1.0, -2 * k) * (1.0 + 0.1 * noise(rng)); }));
    CHECK(std::abs(n.exponent - 2.0) < 0.1);

    CHECK_THROWS_AS(fit_power_law({{0.5, 1.0}, {0.25, -1.0}, {0.125, 1.0}}), Error);
    CHECK_THROWS_AS(fit_power_law({{0.5, 1.0}, {0.25, 1.0}}), Error);
}

TEST_CASE("extrapolate_limit")
{
    const auto c = extrapolate_limit(series(1, 5, [](int) { return 1.25; }));
    CHECK(c.limit == 1.25);
    CHECK(c.uncertainty == 0.0);

    const auto g = extrapolate_limit(series(1, 8, [](int k) { return 2.0 + 0.7 * std::ldexp(1.0, -k); }));
    CHECK(std::abs(g.limit - 2.0) < 1e-10);

    const auto slow = extrapolate_limit(series(1, 8, [](int k) { return 2.0 + 1.0 / k; }));
    CHECK(std::abs(slow.limit - 2.0) <= 10.0 * slow.uncertainty);

    CHECK_THROWS_AS(extrapolate_limit({{0.5, 1.0}, {0.25, 1.0}}), Error);
    CHECK_THROWS_AS(extrapolate_limit({{0.25, 1.0}, {0.5, 1.0}, {0.125, 1.0}}), Error);
}

TEST_CASE("extrapolate_polynomial")
{
    const auto e = extrapolate_polynomial({{0.1, 1.0 + 0.1 + 0.01}, {0.05, 1.0 + 0.05 + 0.0025}, {0.02, 1.0 + 0.02 + 0.0004}});
    CHECK(e.limit == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sweep records")
{
    SweepInput in;
    in.case_id = "flat";
    in.field = Field::smooth({SmoothFn::constant(2.0)});
    in.eps_grid = dyadic_grid(3, 5);
    const auto r = sweep(in, quick());
    REQUIRE(r.size() == 3);
    for (const auto& rec : r) {
        CHECK(rec.scaled == 0.0);
        CHECK(rec.case_id == "flat");
        CHECK(rec.scaled == rec.raw / rec.scaling);
    }
    CHECK(r[0].eps > r[1].eps);

    in.eps_grid = {0.25, 0.5};
    CHECK_THROWS_AS(sweep(in, quick()), Error);
}

TEST_CASE("scaling exponents")
{
    SweepInput in;
    in.scaling = Scaling::from_string("none");
    // the smooth x'-only field carries an eps^{1-2s} relative correction; k = 3..8 fits 1.92
    in.eps_grid = dyadic_grid(5, 10);
    auto raw_fit = [&]() {
        std::vector<std::pair<double, double>> pts;
        for (const auto& r : sweep(in, quick()))
            pts.emplace_back(r.eps, r.raw);
        return fit_power_law(pts);
    };
    in.field = Field::smooth({SmoothFn::cosine(1.0, 3.14159265358979)});
    CHECK(std::abs(raw_fit().exponent - 2.0) < 0.05);
    in.field = Field::smooth({SmoothFn::constant(1.0)}, SmoothFn::polynomial({0.0, 1.0}));
    CHECK(std::abs(raw_fit().exponent - 0.5) < 0.05);
    in.field = unit_jump();
    CHECK(std::abs(raw_fit().exponent - 1.5) < 0.1);
}

TEST_CASE("regime ordering")
{
    SweepInput in;
    in.field = Field::smooth({SmoothFn::cosine(1.0, 3.14159265358979)});
    in.eps_grid = dyadic_grid(3, 12);
    in.scaling = Scaling::from_string("eps_pow 3");
    const auto below = sweep(in, quick());
    CHECK(below.back().scaled > 10.0 * below.front().scaled);
    in.scaling = Scaling::from_string("lambda");
    const auto between = sweep(in, quick());
    CHECK(between.back().scaled < 0.1 * between.front().scaled);
}

TEST_CASE("constant field verifies as DR with predicted 0")
{
    VerifyInput v;
    v.kind = CaseKind::DR;
    v.sweep.case_id = "DR_flat";
    v.sweep.field = Field::smooth({SmoothFn::constant(1.0)});
    v.sweep.eps_grid = dyadic_grid(3, 8);
    v.tolerance = default_tolerance(CaseKind::DR);
    const auto r = verify_gamma_limit(v, quick());
    CHECK(r.verdict.pass);
    CHECK(*r.verdict.predicted == 0.0);
    CHECK(r.records.size() == 6);
}

TEST_CASE("jump case (iii)")
{
    VerifyInput v;
    v.kind = CaseKind::JUMP;
    v.sweep.case_id = "JUMP_iii";
    v.sweep.field = unit_jump();
    v.sweep.schedule = Schedule{Schedule::Power{1.0}};
    v.sweep.eps_grid = exp2log_grid(2, 8);
    v.sweep.scaling = Scaling::from_string("lambda");
    v.tolerance = default_tolerance(CaseKind::JUMP);
    const auto r = verify_gamma_limit(v, quick());
    CHECK(*r.verdict.predicted == 2.0);
    CHECK(r.verdict.pass);
}

TEST_CASE("constant-exponent jump limit is 1/((1-2s)(1-s))")
{
    // Exact weight-engine values of s eps^{2s-2} [u]^2, extrapolated over eps = 2^-3 .. 2^-20.
    for (double s : {0.1, 0.25}) {
        SweepInput in;
        in.field = unit_jump();
        in.schedule = Schedule{Schedule::Constant{s}};
        in.eps_grid = dyadic_grid(10, 20);
        in.scaling = Scaling::from_string("lambda");
        std::vector<std::pair<double, double>> pts;
        for (const auto& r : sweep(in, quick()))
            pts.emplace_back(r.eps, r.scaled);
        const double expect = 1.0 / ((1.0 - 2.0 * s) * (1.0 - s));
        CHECK(extrapolate_limit(pts).limit == doctest::Approx(expect).epsilon(2e-3));
    }
}

TEST_CASE("DR with an x_d-dependent field is predicted divergent")
{
    VerifyInput v;
    v.kind = CaseKind::DR;
    v.sweep.field = Field::smooth({SmoothFn::constant(1.0)}, SmoothFn::polynomial({0.0, 1.0}));
    v.sweep.eps_grid = dyadic_grid(3, 8);
    const auto r = verify_gamma_limit(v, quick());
    CHECK_FALSE(r.verdict.predicted.has_value());
    CHECK_FALSE(r.verdict.extrapolated.has_value());
    CHECK(r.verdict.pass);
}

TEST_CASE("names round trip")
{
    for (CaseKind k : {CaseKind::DR, CaseKind::VERT, CaseKind::JUMP, CaseKind::BBM, CaseKind::ZERO})
        CHECK(case_kind_from_string(to_string(k)) == k);
    for (const char* s : {"eps2", "eps_1m2s", "lambda", "none"})
        CHECK(Scaling::from_string(s).name() == s);
    CHECK_THROWS_AS(case_kind_from_string("FOO"), Error);
}

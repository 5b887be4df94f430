#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "thinfilm/constants.hpp"
#include "thinfilm/error.hpp"

using namespace thinfilm;

TEST_CASE("C_{s,d} closed form against quadrature")
{
    for (int d : {2, 3})
        for (double s : {0.05, 0.15, 0.25, 0.35, 0.45}) {
            const double exact = c_const_closed_form(s, d);
            CHECK(std::abs(c_const_quadrature(s, d) - exact) / exact < 1e-8);
            CHECK(c_const(s, d).value == exact);
            CHECK(c_const(s, d).method == Method::exact);
        }
}

TEST_CASE("C_{s,2} reference values")
{
    // antiderivative xi / sqrt(1 + xi^2)
    CHECK(c_const(0.5, 2).value == doctest::Approx(2.0).epsilon(1e-12));
    // arctan
    CHECK(c_const(1e-9, 2).value == doctest::Approx(std::numbers::pi).epsilon(1e-7));
    CHECK(c_const(0.25, 2).value == doctest::Approx(2.396280469).epsilon(1e-9));
    // d = 3 in polar coordinates: 2 pi / (2 s + 1)
    CHECK(c_const(0.25, 3).value == doctest::Approx(2.0 * std::numbers::pi / 1.5).epsilon(1e-12));
}

TEST_CASE("C_{s,2} against an independent Simpson integral")
{
    for (double s : {0.1, 0.3}) {
        // xi = tan(theta), theta = pi/2 - w^2: 2 int_0^{sqrt(pi/2)} sin(w^2)^{2s} 2w dw
        const double ref = oracle::simpson(
            [&](double w) { return std::pow(std::sin(w * w), 2.0 * s) * 2.0 * w; }, 0.0, std::sqrt(std::numbers::pi / 2), 20000);
        CHECK(c_const(s, 2).value == doctest::Approx(2.0 * ref).epsilon(1e-6));
    }
}

TEST_CASE("kernel identity by change of variable")
{
    for (int d : {2, 3})
        for (double s : {0.1, 0.25, 0.4})
            for (double a : {0.01, 0.1, 1.0}) {
                const Estimate t = truncated_kernel_integral(a, s, d, 1e4);
                const double expect = c_const(s, d).value * std::pow(a, -(1.0 + 2.0 * s));
                CHECK(std::abs(t.value - expect) / expect < 1e-6);
                CHECK(t.error / expect < 1e-6);
            }
}

TEST_CASE("phi_fn")
{
    CHECK(phi_fn(0.5, 1.0) == doctest::Approx((2.0 - std::pow(2.0, -0.5)) / 2.0).epsilon(1e-15));
    CHECK(phi_fn(0.5, 1.0) == doctest::Approx(0.64645).epsilon(1e-5));
    for (double s : {0.05, 0.3, 0.9})
        CHECK(phi_fn(s, 1.0) == doctest::Approx((2.0 - std::pow(2.0, -s)) / (1.0 + 2.0 * s)).epsilon(1e-15));
    // |phi - 1| <= K s near 0; K calibrated from the s = 0.1 values, checked down the range
    for (double tau : {0.5, 1.0, 2.0}) {
        const double K = 2.0 * std::abs(phi_fn(0.1, tau) - 1.0) / 0.1 + 1.0;
        for (double s = 0.1; s > 1e-6; s /= 3.0)
            CHECK(std::abs(phi_fn(s, tau) - 1.0) <= K * s);
        CHECK(phi_fn(1e-12, tau) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("lambda_scale")
{
    CHECK(lambda_scale(0.25, 0.1, RegimeClass::zero()) == doctest::Approx(0.126491).epsilon(1e-5));
    CHECK(lambda_scale(0.25, 0.1, RegimeClass::mid(std::exp(-1.0))) == doctest::Approx(0.04).epsilon(1e-14));
    CHECK(lambda_scale(0.25, 0.1, RegimeClass::one()) == doctest::Approx(0.023026).epsilon(1e-5));
    for (const RegimeClass& r : {RegimeClass::zero(), RegimeClass::mid(0.5), RegimeClass::one()}) {
        double prev = 0.0;
        for (int k = 3; k <= 12; ++k) {
            const double eps = std::ldexp(1.0, -k);
            const double ratio = lambda_scale(0.25, eps, r) / (eps * eps);
            CHECK(ratio > 1.0);
            if (r.tag != RegimeClass::Tag::rho_mid)
                CHECK(ratio > prev);
            prev = ratio;
        }
    }
}

TEST_CASE("jump_limit_coefficient")
{
    CHECK(jump_limit_coefficient(RegimeClass::zero()) == 1.0);
    CHECK(jump_limit_coefficient(RegimeClass::one()) == 2.0);
    CHECK(jump_limit_coefficient(RegimeClass::mid(std::exp(-1.0))) == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-14));
    CHECK(jump_limit_coefficient(RegimeClass::mid(std::exp(-1.0))) == doctest::Approx(6.3891).epsilon(1e-4));
    CHECK(jump_limit_coefficient(RegimeClass::mid(1.0 / std::sqrt(2.0))) == doctest::Approx(1.0).epsilon(1e-14));
    double prev = INFINITY;
    for (double rho = 0.05; rho < 1.0; rho += 0.05) {
        const double c = jump_limit_coefficient(RegimeClass::mid(rho));
        CHECK(c < prev);
        prev = c;
    }
    CHECK_THROWS_AS(RegimeClass::mid(1.0), Error);
    CHECK_THROWS_AS(RegimeClass::mid(0.0), Error);
}

TEST_CASE("sphere_measure and bbm_coefficient")
{
    CHECK(sphere_measure(0) == 2.0);
    CHECK(sphere_measure(1) == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-15));
    CHECK(sphere_measure(2) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-15));
    CHECK(sphere_measure(3) == doctest::Approx(2.0 * std::numbers::pi * std::numbers::pi).epsilon(1e-14));
    CHECK(bbm_coefficient(1) == 1.0);
    CHECK(bbm_coefficient(2) == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-15));
}

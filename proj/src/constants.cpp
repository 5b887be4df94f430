#include "thinfilm/constants.hpp"

#include <cmath>
#include <numbers>

#include "thinfilm/error.hpp"
#include "thinfilm/integrate.hpp"

namespace thinfilm {

RegimeClass RegimeClass::mid(double rho)
{
    require(rho > 0.0 && rho < 1.0, ErrorKind::invalid_argument, "RhoMid needs rho in (0, 1)");
    return {Tag::rho_mid, rho};
}

std::string RegimeClass::name() const
{
    switch (tag) {
    case Tag::rho_zero: return "rho_zero";
    case Tag::rho_mid: return "rho_mid(" + std::to_string(rho) + ")";
    case Tag::rho_one: return "rho_one";
    }
    return "unknown";
}

namespace {

void check_sd(double s, int d)
{
    require(s > 0.0 && s < 1.0, ErrorKind::invalid_argument, "s must lie in (0, 1)");
    require(d == 2 || d == 3, ErrorKind::invalid_argument, "d must be 2 or 3");
}

} // namespace

double c_const_closed_form(double s, int d)
{
    check_sd(s, d);
    return std::pow(std::numbers::pi, 0.5 * (d - 1)) * std::exp(std::lgamma(s + 0.5) - std::lgamma(0.5 * d + s));
}

double c_const_quadrature(double s, int d)
{
    check_sd(s, d);
    // xi = tan(theta), phi = pi/2 - theta:
    // C = sigma_{d-2} int_0^{pi/2} cos^{d-2}(phi) sin^{2s}(phi) d phi
    const double half_pi = 0.5 * std::numbers::pi;
    auto f = [&](double phi) { return std::pow(std::cos(phi), d - 2) * std::pow(std::sin(phi), 2.0 * s); };
    const int levels = 60;
    const auto br = numerics::graded_breaks(0.0, half_pi, levels);
    double sum = 0.0;
    const auto& rule = numerics::gauss_legendre(20);
    for (std::size_t i = 1; i + 1 < br.size(); ++i)
        sum += numerics::gl_panel(f, br[i], br[i + 1], rule);
    // sin^{2s} phi ~ phi^{2s} on (0, br[1])
    const double r0 = br[1];
    sum += f(r0) * r0 / (2.0 * s + 1.0);
    return sphere_measure(d - 2) * sum;
}

Estimate c_const(double s, int d)
{
    const double closed = c_const_closed_form(s, d);
    const double quad = c_const_quadrature(s, d);
    const double gap = std::abs(closed - quad);
    require(gap <= 1e-7 * closed, ErrorKind::invalid_argument,
        "C_{s,d} closed form and quadrature disagree at s = " + std::to_string(s));
    return Estimate{closed, gap, Method::exact, 0, 0};
}

Estimate truncated_kernel_integral(double a, double s, int d, double radius)
{
    check_sd(s, d);
    require(a > 0.0 && radius > a, ErrorKind::invalid_argument, "need 0 < a < radius");
    const double p = 0.5 * d + s;
    auto f = [&](double rho) { return std::pow(rho, d - 2) * std::pow(a * a + rho * rho, -p); };
    // [0, a], then doubling panels; the poles at +-i a stay a panel-width away
    const auto& rule = numerics::gauss_legendre(20);
    double sum = numerics::gl_panel(f, 0.0, a, rule);
    for (double lo = a; lo < radius; lo *= 2.0)
        sum += numerics::gl_panel(f, lo, std::min(2.0 * lo, radius), rule);
    const double sigma = sphere_measure(d - 2);
    const double tail = sigma * std::pow(radius, -1.0 - 2.0 * s) / (1.0 + 2.0 * s);
    // the exact tail is below the leading term and above it times (1 + a^2/R^2)^{-p}
    const double miss = tail * (1.0 - std::pow(1.0 + (a * a) / (radius * radius), -p));
    return Estimate{sigma * sum + tail, miss, Method::weight, 0, 0};
}

double phi_fn(double s, double tau)
{
    require(s > 0.0 && s < 1.0, ErrorKind::invalid_argument, "s must lie in (0, 1)");
    require(tau > 0.0, ErrorKind::invalid_argument, "tau must be positive");
    return (2.0 - std::exp2(-s)) * std::pow(tau, -2.0 * s) / (1.0 + 2.0 * s);
}

double lambda_scale(double s, double eps, const RegimeClass& regime)
{
    require(s > 0.0 && s < 1.0, ErrorKind::invalid_argument, "s must lie in (0, 1)");
    require(eps > 0.0 && eps < 1.0, ErrorKind::invalid_argument, "eps must lie in (0, 1)");
    switch (regime.tag) {
    case RegimeClass::Tag::rho_zero: return std::pow(eps, 2.0 - 2.0 * s) / s;
    case RegimeClass::Tag::rho_mid: return eps * eps / s;
    case RegimeClass::Tag::rho_one: return eps * eps * std::abs(std::log(eps));
    }
    return 0.0;
}

double jump_limit_coefficient(const RegimeClass& regime)
{
    switch (regime.tag) {
    case RegimeClass::Tag::rho_zero: return 1.0;
    case RegimeClass::Tag::rho_mid: return (1.0 - regime.rho * regime.rho) / (regime.rho * regime.rho);
    case RegimeClass::Tag::rho_one: return 2.0;
    }
    return 0.0;
}

double sphere_measure(int n)
{
    require(n >= 0, ErrorKind::invalid_argument, "sphere dimension must be >= 0");
    switch (n) {
    case 0: return 2.0;
    case 1: return 2.0 * std::numbers::pi;
    case 2: return 4.0 * std::numbers::pi;
    default: return 2.0 * std::pow(std::numbers::pi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
    }
}

double bbm_coefficient(int n)
{
    require(n >= 1, ErrorKind::invalid_argument, "BBM coefficient needs n >= 1");
    return sphere_measure(n - 1) / (2.0 * n);
}

} // namespace thinfilm

#ifndef THINFILM_CONSTANTS_HPP
#define THINFILM_CONSTANTS_HPP

#include <string>

#include "thinfilm/estimate.hpp"

namespace thinfilm {

/// rho = lim eps^{s_eps}: zero, strictly inside (0, 1), or one.
struct RegimeClass {
    enum class Tag { rho_zero, rho_mid, rho_one };

    Tag tag = Tag::rho_zero;
    /// Meaningful for rho_mid only.
    double rho = 0.0;

    static RegimeClass zero() { return {Tag::rho_zero, 0.0}; }
    static RegimeClass one() { return {Tag::rho_one, 1.0}; }
    static RegimeClass mid(double rho);

    std::string name() const;
};

/// C_{s,d} = int_{R^{d-1}} (1 + |xi|^2)^{-(d/2+s)} d xi.
/// Value from pi^{(d-1)/2} Gamma(s+1/2) / Gamma(d/2+s); error is its distance to the quadrature.
Estimate c_const(double s, int d);
/// The same constant by radial reduction and xi = tan(theta), endpoint-graded Gauss-Legendre.
double c_const_quadrature(double s, int d);
double c_const_closed_form(double s, int d);

/// int_{|xi| < radius} (a^2 + |xi|^2)^{-(d/2+s)} d xi over R^{d-1}, plus the leading tail term
/// sigma_{d-2} radius^{-1-2s} / (1+2s); the error field bounds what that term misses.
Estimate truncated_kernel_integral(double a, double s, int d, double radius);

/// phi(s) = (2 - 2^{-s}) tau^{-2s} / (1 + 2s).
double phi_fn(double s, double tau);

/// eps^{2-2s}/s, eps^2/s or eps^2 |log eps| for rho = 0, rho in (0, 1), rho = 1.
double lambda_scale(double s, double eps, const RegimeClass& regime);

/// 1, (1 - rho^2)/rho^2 or 2.
double jump_limit_coefficient(const RegimeClass& regime);

/// H^n of the unit n-sphere.
double sphere_measure(int n);

/// Coefficient K_n in (1 - sigma) [u]^2_sigma(omega) -> K_n int |grad u|^2 for omega in R^n.
double bbm_coefficient(int n);

} // namespace thinfilm

#endif

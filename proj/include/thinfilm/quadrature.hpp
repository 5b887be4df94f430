#ifndef THINFILM_QUADRATURE_HPP
#define THINFILM_QUADRATURE_HPP

#include <cstdint>

#include "thinfilm/domain.hpp"
#include "thinfilm/estimate.hpp"

namespace thinfilm {

/// Squared Gagliardo seminorm int_A int_A |u(x)-u(y)|^2 / |x-y|^{d+2s} dx dy on a box A in R^d.
///
/// `weight` handles d = 2 fields that depend on x_1 only (piecewise-constant or smooth)
/// or on x_2 only, and d = 3 fields that are constant; `grid` and `mc` accept every field.
/// Throws divergent_integral for piecewise-constant fields with s >= 1/2.
Estimate gagliardo_sq(const Field& u, const Box& dom, double s, const QuadConfig& cfg, Method method,
    std::uint64_t seed = 0);
Estimate gagliardo_sq(const Field& u, const ThinFilm& dom, double s, const QuadConfig& cfg, Method method,
    std::uint64_t seed = 0);
Estimate gagliardo_sq(const Field& u, const UnitFilm& dom, double s, const QuadConfig& cfg, Method method,
    std::uint64_t seed = 0);

/// True when `weight` can evaluate u on dom.
bool weight_supports(const Field& u, const Box& dom);

/// Midpoint double sum over n^d cells, identical-cell pairs excluded. The error is the
/// Richardson estimate built from the n/2 sum.
Estimate grid_oracle(const Field& u, const Box& dom, double s, int n, const QuadConfig& cfg);

/// Dyadic-shell stratified Monte Carlo in z = y - x.
Estimate monte_carlo(const Field& u, const Box& dom, double s, const QuadConfig& cfg, std::uint64_t seed);

/// W(r) = int_0^eps int_0^eps (r^2 + (t - tau)^2)^{-(d/2+s)} dt dtau
///      = 2 int_0^eps (eps - h) (r^2 + h^2)^{-(d/2+s)} dh.
double vertical_weight(double r, double eps, double s, int d);

/// Seminorm of u(x_1, x_2) = v(x_1) on (a, b) x (0, eps), d = 2.
Estimate pwc_seminorm_sq(const PiecewiseConstant1D& v, double a, double b, double eps, double s);

/// Pair sums of (lambda_i - lambda_j)^2 |{x in I_i : x + r in I_j}| over ordered interval pairs;
/// g(r) = int (v(x + r) - v(x))^2 dx restricted to the interval (a, b).
double pwc_increment(const PiecewiseConstant1D& v, double a, double b, double r);

} // namespace thinfilm

#endif

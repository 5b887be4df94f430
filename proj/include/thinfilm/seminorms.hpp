#ifndef THINFILM_SEMINORMS_HPP
#define THINFILM_SEMINORMS_HPP

#include "thinfilm/domain.hpp"
#include "thinfilm/estimate.hpp"

namespace thinfilm {

/// Kernel exponent of the H^sigma seminorm on a domain of dimension m: m + 2 sigma.
double reduced_kernel_exponent(int m, double sigma);
/// Kernel exponent of the dimension-reduction limit: d + 2 s0, through the same path
/// as reduced_kernel_exponent(d - 1, s0 + 1/2).
double drconv_kernel_exponent(int d, double s0);

/// int_omega int_0^1 int_0^1 |v(x', t) - v(x', tau)|^2 / |t - tau|^{1+2s}.
Estimate sliced_vertical_seminorm_sq(const Field& v, const UnitFilm& unit, double s, const QuadConfig& cfg);

/// Squared H^sigma(omega) seminorm of a field living on omega (dimension 1 or 2).
/// Piecewise-constant fields with sigma >= 1/2 give Divergent.
Outcome reduced_seminorm_sq(const Field& u, const Box& omega, double sigma, const QuadConfig& cfg);

/// E(v) = C_{s0,d} times the sliced vertical seminorm.
Estimate vertical_limit_energy(const Field& v, const UnitFilm& unit, double s0, const QuadConfig& cfg);
/// Same with a caller-supplied constant in place of C_{s0,d}.
Estimate vertical_limit_energy(const Field& v, const UnitFilm& unit, double s0, double constant,
    const QuadConfig& cfg);

/// int_omega int_0^1 |v(x', t) - mean_t v(x', .)|^2.
Estimate vertical_mean_deviation(const Field& v, const UnitFilm& unit, const QuadConfig& cfg);

/// int_omega |grad u|^2 for a smooth field living on omega.
Estimate dirichlet_energy(const Field& u, const Box& omega, const QuadConfig& cfg);

} // namespace thinfilm

#endif

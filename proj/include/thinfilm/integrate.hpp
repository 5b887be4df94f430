#ifndef THINFILM_INTEGRATE_HPP
#define THINFILM_INTEGRATE_HPP

// One-dimensional quadrature building blocks shared by the seminorm engines.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "thinfilm/error.hpp"

namespace thinfilm::numerics {

/// Gauss-Legendre nodes/weights on [-1, 1].
struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

/// Cached rule with n nodes, 1 <= n <= 128.
const Rule& gauss_legendre(int n);

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

template <class F>
double gl_panel(F&& f, double a, double b, const Rule& rule)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i)
        sum += rule.w[i] * f(c + h * rule.x[i]);
    return h * sum;
}

/// Gauss-Legendre with n nodes on every panel [breaks[i], breaks[i+1]].
template <class F>
double composite_gl(F&& f, std::span<const double> breaks, int n)
{
    const Rule& rule = gauss_legendre(n);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        if (breaks[i + 1] > breaks[i])
            sum += gl_panel(f, breaks[i], breaks[i + 1], rule);
    return sum;
}

/// Sorted, de-duplicated copy of `pts` clipped to [a, b] with both ends included.
std::vector<double> merge_breaks(std::vector<double> pts, double a, double b);

/// Panel ends a, a + (b-a) 2^{-levels}, ..., (b-a)/2, b graded geometrically towards a.
std::vector<double> graded_breaks(double a, double b, int levels);

/// Recursive bisection with a 10/20-point Gauss-Legendre pair as the error indicator.
template <class F>
QuadResult adaptive_gl(F&& f, double a, double b, double rel_tol, double abs_tol = 0.0, int max_depth = 40)
{
    const Rule& lo = gauss_legendre(10);
    const Rule& hi = gauss_legendre(20);
    struct Rec {
        static void run(F& g, double a, double b, double tol, int depth, const Rule& lo, const Rule& hi, QuadResult& acc)
        {
            const double fine = gl_panel(g, a, b, hi);
            const double coarse = gl_panel(g, a, b, lo);
            const double err = std::abs(fine - coarse);
            if (err <= tol || depth == 0) {
                acc.value += fine;
                acc.error += err;
                return;
            }
            const double m = 0.5 * (a + b);
            run(g, a, m, 0.5 * tol, depth - 1, lo, hi, acc);
            run(g, m, b, 0.5 * tol, depth - 1, lo, hi, acc);
        }
    };
    const double guess = std::abs(gl_panel(f, a, b, hi));
    QuadResult acc;
    Rec::run(f, a, b, std::max(abs_tol, rel_tol * guess), max_depth, lo, hi, acc);
    return acc;
}

/// Description of I = int_0^L K(r) g(r) dr where K is singular at r = 0.
struct DifferenceProblem {
    double length = 1.0;
    /// Points in (0, L) where K or g fails to be smooth.
    std::vector<double> breaks;
    /// Scale below which K is a pure power of r.
    double inner_scale = 1.0;
    /// K(r) ~ r^kernel_exponent as r -> 0.
    double kernel_exponent = -1.0;
    /// g(r) ~ r^increment_order as r -> 0.
    double increment_order = 2.0;
    /// Number of dyadic panels below inner_scale.
    int levels = 40;
};

/// Panels graded dyadically towards r = 0, 20- and 12-point Gauss-Legendre on each panel
/// (their difference is the reported error) and the power-law model for (0, r0).
template <class Kernel, class Increment>
QuadResult difference_integral(Kernel&& kernel, Increment&& g, const DifferenceProblem& p)
{
    const double growth = p.kernel_exponent + p.increment_order + 1.0;
    require(growth > 0.0, ErrorKind::divergent_integral,
        "near-diagonal integral diverges (kernel and increment orders are not integrable)");
    const double L = p.length;
    const double scale = std::min(p.inner_scale, L);
    const double r0 = std::ldexp(scale, -p.levels);

    std::vector<double> pts;
    for (double r = r0; r < L; r *= 2.0)
        pts.push_back(r);
    for (double b : p.breaks)
        if (b > r0 && b < L)
            pts.push_back(b);
    const std::vector<double> br = merge_breaks(std::move(pts), r0, L);

    auto integrand = [&](double r) { return kernel(r) * g(r); };
    const Rule& fine = gauss_legendre(20);
    const Rule& coarse = gauss_legendre(12);
    QuadResult out;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        const double a = br[i];
        const double b = br[i + 1];
        if (!(b > a))
            continue;
        const double vf = gl_panel(integrand, a, b, fine);
        const double vc = gl_panel(integrand, a, b, coarse);
        out.value += vf;
        out.error += std::abs(vf - vc);
    }
    // K g ~ C r^{growth - 1} on (0, r0)
    const double tail = integrand(r0) * r0 / growth;
    out.value += tail;
    out.error += std::abs(tail) * 1e-6 + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(out.value);
    return out;
}

} // namespace thinfilm::numerics

#endif

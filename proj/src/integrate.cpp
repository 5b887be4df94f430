#include "thinfilm/integrate.hpp"

#include <array>
#include <memory>
#include <mutex>
#include <numbers>

namespace thinfilm::numerics {

namespace {

Rule build_rule(int n)
{
    Rule r;
    r.x.resize(static_cast<std::size_t>(n));
    r.w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton on P_n starting from the Chebyshev-like guess
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double pn = n == 1 ? x : p1;
            const double pm = n == 1 ? 1.0 : p0;
            dp = n * (x * pn - pm) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double pn = n == 1 ? x : p1;
            const double pm = n == 1 ? 1.0 : p0;
            dp = n * (x * pn - pm) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        r.x[lo] = -x;
        r.x[hi] = x;
        r.w[lo] = w;
        r.w[hi] = w;
    }
    if (n % 2 == 1)
        r.x[static_cast<std::size_t>(n / 2)] = 0.0;
    return r;
}

} // namespace

const Rule& gauss_legendre(int n)
{
    require(n >= 1 && n <= 128, ErrorKind::invalid_argument, "Gauss-Legendre order must be 1..128");
    static std::array<std::unique_ptr<Rule>, 129> cache;
    static std::array<std::once_flag, 129> built;
    const auto i = static_cast<std::size_t>(n);
    std::call_once(built[i], [&] { cache[i] = std::make_unique<Rule>(build_rule(n)); });
    return *cache[i];
}

std::vector<double> merge_breaks(std::vector<double> pts, double a, double b)
{
    std::vector<double> out{a};
    std::sort(pts.begin(), pts.end());
    for (double p : pts) {
        if (!(p > a && p < b))
            continue;
        if (p - out.back() <= 1e-13 * std::abs(p))
            continue;
        out.push_back(p);
    }
    if (b - out.back() <= 1e-13 * std::abs(b) && out.size() > 1)
        out.back() = b;
    else
        out.push_back(b);
    return out;
}

std::vector<double> graded_breaks(double a, double b, int levels)
{
    std::vector<double> br{a};
    for (int k = levels; k >= 1; --k)
        br.push_back(a + std::ldexp(b - a, -k));
    br.push_back(b);
    return br;
}

} // namespace thinfilm::numerics

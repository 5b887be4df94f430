#ifndef THINFILM_TEST_ORACLES_HPP
#define THINFILM_TEST_ORACLES_HPP

// Brute-force references that share no code with the library.

#include <cmath>
#include <functional>

namespace oracle {

/// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n)
{
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Tensor Simpson over [a, b]^2.
inline double simpson2(const std::function<double(double, double)>& f, double a, double b, int n)
{
    return simpson([&](double x) { return simpson([&](double y) { return f(x, y); }, a, b, n); }, a, b, n);
}

/// Midpoint double sum for int_0^1 int_0^1 |f(x)-f(y)|^2 / |x-y|^{1+2s}, diagonal cells skipped,
/// followed by one Richardson step against n/2 with rate h^{2-2s}.
inline double seminorm_1d(const std::function<double(double)>& f, double s, int n)
{
    auto sum = [&](int m) {
        const double h = 1.0 / m;
        double acc = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                if (i == j)
                    continue;
                const double x = (i + 0.5) * h;
                const double y = (j + 0.5) * h;
                const double du = f(x) - f(y);
                acc += du * du / std::pow(std::abs(x - y), 1.0 + 2.0 * s);
            }
        return acc * h * h;
    };
    const double fine = sum(n);
    const double coarse = sum(n / 2);
    const double q = std::pow(2.0, 2.0 - 2.0 * s);
    return (q * fine - coarse) / (q - 1.0);
}

} // namespace oracle

#endif

#include "thinfilm/seminorms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thinfilm/constants.hpp"
#include "thinfilm/integrate.hpp"
#include "thinfilm/parallel.hpp"
#include "thinfilm/quadrature.hpp"

namespace thinfilm {

double reduced_kernel_exponent(int m, double sigma) { return m + 2.0 * sigma; }

double drconv_kernel_exponent(int d, double s0) { return reduced_kernel_exponent(d - 1, s0 + 0.5); }

namespace {

struct Node {
    Point x{};
    double w = 0.0;
};

/// Tensor Gauss-Legendre rule with n nodes per axis of `box`.
std::vector<Node> tensor_nodes(const Box& box, int n)
{
    const auto& rule = numerics::gauss_legendre(n);
    std::vector<Node> out{Node{box.lo, 1.0}};
    for (int a = 0; a < box.dim; ++a) {
        const double c = 0.5 * (box.lo[a] + box.hi[a]);
        const double h = 0.5 * box.extent(a);
        std::vector<Node> next;
        next.reserve(out.size() * rule.x.size());
        for (const auto& p : out) {
            for (std::size_t i = 0; i < rule.x.size(); ++i) {
                Node q = p;
                q.x[a] = c + h * rule.x[i];
                q.w *= h * rule.w[i];
                next.push_back(q);
            }
        }
        out = std::move(next);
    }
    return out;
}

/// Per-axis factors of a separable field seen in R^m (nullptr stands for 1).
std::array<const SmoothFn*, max_dim> axis_factors(const SmoothSeparable& k, int m)
{
    std::array<const SmoothFn*, max_dim> f{};
    const int h = static_cast<int>(k.horizontal.size());
    for (int i = 0; i < std::min(h, m); ++i)
        f[i] = &k.horizontal[i];
    if (k.vertical && m > h)
        f[m - 1] = &k.vertical.value();
    return f;
}

/// Gauss-Legendre panel count for a smooth profile on an interval of length len.
int smooth_panels(const SmoothFn* f, double len)
{
    if (f == nullptr)
        return 1;
    return std::max(1, static_cast<int>(std::ceil(f->max_frequency() * len / std::numbers::pi)) + f->degree() / 16);
}

/// Knot positions of a grid field along `axis` (its kinks).
std::vector<double> grid_knots(const Field& u, int axis)
{
    std::vector<double> k;
    if (const auto* g = std::get_if<GridSample>(&u.kind)) {
        if (axis < g->box.dim) {
            const int n = g->shape[axis];
            for (int i = 0; i < n; ++i)
                k.push_back(g->box.lo[axis] + g->box.extent(axis) * i / (n - 1));
        }
    }
    return k;
}

/// 2 int_0^{b-a} r^{-1-2 sigma} g(r) dr with g(r) = int_a^{b-r} diff(x, r)^2 dx,
/// where diff(x, r) = f(x + r) - f(x) and f is smooth between `knots`.
template <class Diff>
numerics::QuadResult seminorm_1d(Diff&& diff, double a, double b, double sigma, int panels,
    const std::vector<double>& knots)
{
    const double len = b - a;
    const auto& rule = numerics::gauss_legendre(16);
    auto incr = [&](double r) {
        std::vector<double> pts{a, b - r};
        for (double k : knots) {
            pts.push_back(k);
            pts.push_back(k - r);
        }
        const double top = b - r;
        for (int i = 1; i < panels; ++i)
            pts.push_back(a + (top - a) * i / panels);
        const auto br = numerics::merge_breaks(std::move(pts), a, top);
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < br.size(); ++i)
            sum += numerics::gl_panel(
                [&](double x) {
                    const double dv = diff(x, r);
                    return dv * dv;
                },
                br[i], br[i + 1], rule);
        return sum;
    };
    numerics::DifferenceProblem prob;
    prob.length = len;
    // g has kinks where r is a distance between two kinks of f or the ends
    std::vector<double> ends{a, b};
    ends.insert(ends.end(), knots.begin(), knots.end());
    for (std::size_t i = 0; i < ends.size(); ++i)
        for (std::size_t j = i + 1; j < ends.size(); ++j)
            prob.breaks.push_back(std::abs(ends[j] - ends[i]));
    prob.inner_scale = len;
    prob.kernel_exponent = -1.0 - 2.0 * sigma;
    prob.increment_order = 2.0;
    auto kernel = [&](double r) { return std::pow(r, -1.0 - 2.0 * sigma); };
    auto q = numerics::difference_integral(kernel, incr, prob);
    q.value *= 2.0;
    q.error *= 2.0;
    return q;
}

/// One vertical slice at x'.
numerics::QuadResult vertical_slice(const Field& v, int d, const Point& xp, double s)
{
    const int axis = d - 1;
    if (const auto* k = std::get_if<SmoothSeparable>(&v.kind)) {
        const auto f = axis_factors(*k, d);
        double c = 1.0;
        for (int i = 0; i < axis; ++i)
            if (f[i] != nullptr)
                c *= (*f[i])(xp[i]);
        const SmoothFn* g = f[axis];
        if (g == nullptr || c == 0.0)
            return {};
        auto diff = [&](double t, double r) { return c * g->difference(t, t + r); };
        return seminorm_1d(diff, 0.0, 1.0, s, smooth_panels(g, 1.0), {});
    }
    auto diff = [&](double t, double r) {
        Point x = xp;
        Point y = xp;
        x[axis] = t;
        y[axis] = t + r;
        return v.value(y, d) - v.value(x, d);
    };
    return seminorm_1d(diff, 0.0, 1.0, s, 4, grid_knots(v, axis));
}

} // namespace

Estimate sliced_vertical_seminorm_sq(const Field& v, const UnitFilm& unit, double s, const QuadConfig& cfg)
{
    require(s > 0.0 && s < 1.0, ErrorKind::invalid_argument, "s must lie in (0, 1)");
    cfg.validate();
    const int d = unit.d;
    v.validate(d);
    if (!v.depends_on(d - 1, d))
        return Estimate{0.0, 0.0, Method::weight, 0, 0};

    auto integrate = [&](int n) {
        const auto nodes = tensor_nodes(unit.omega, n);
        std::vector<numerics::QuadResult> slices(nodes.size());
        parallel_for(nodes.size(), cfg.workers, [&](std::size_t i) { slices[i] = vertical_slice(v, d, nodes[i].x, s); });
        numerics::QuadResult acc;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            acc.value += nodes[i].w * slices[i].value;
            acc.error += nodes[i].w * slices[i].error;
        }
        return std::make_pair(acc, nodes.size());
    };
    const auto [fine, count] = integrate(cfg.slice_nodes);
    double omega_err = 0.0;
    if (cfg.slice_nodes >= 2)
        omega_err = std::abs(fine.value - integrate(cfg.slice_nodes / 2).first.value);
    return Estimate{std::max(0.0, fine.value), fine.error + omega_err, Method::weight,
        static_cast<std::uint64_t>(count), 0};
}

Outcome reduced_seminorm_sq(const Field& u, const Box& omega, double sigma, const QuadConfig& cfg)
{
    require(sigma > 0.0 && sigma < 1.0, ErrorKind::invalid_argument, "sigma must lie in (0, 1)");
    omega.validate();
    cfg.validate();
    const int m = omega.dim;
    require(m == 1 || m == 2, ErrorKind::invalid_argument, "omega must have dimension 1 or 2");
    if (u.is_pwc() && !jump_set(u).empty() && sigma >= 0.5)
        return Divergent{"a jump has infinite H^sigma seminorm for sigma >= 1/2 (sigma = " + std::to_string(sigma) + ")"};
    if (u.is_constant(m))
        return Estimate{0.0, 0.0, Method::weight, 0, 0};
    const double expo = reduced_kernel_exponent(m, sigma);

    if (m == 1) {
        const double a = omega.lo[0];
        const double b = omega.hi[0];
        if (const auto* pwc = std::get_if<PiecewiseConstant1D>(&u.kind)) {
            for (double x : pwc->breakpoints)
                require(x > a && x < b, ErrorKind::domain_mismatch, "breakpoints must lie inside omega");
            std::vector<double> cuts{a};
            cuts.insert(cuts.end(), pwc->breakpoints.begin(), pwc->breakpoints.end());
            cuts.push_back(b);
            numerics::DifferenceProblem prob;
            prob.length = b - a;
            for (std::size_t i = 0; i < cuts.size(); ++i)
                for (std::size_t j = i + 1; j < cuts.size(); ++j)
                    prob.breaks.push_back(cuts[j] - cuts[i]);
            prob.inner_scale = b - a;
            prob.kernel_exponent = -expo;
            prob.increment_order = 1.0;
            auto kernel = [&](double r) { return std::pow(r, -expo); };
            auto incr = [&](double r) { return pwc_increment(*pwc, a, b, r); };
            const auto q = numerics::difference_integral(kernel, incr, prob);
            return Estimate{2.0 * q.value, 2.0 * q.error, Method::weight, 0, 0};
        }
        if (const auto* k = std::get_if<SmoothSeparable>(&u.kind)) {
            const auto f = axis_factors(*k, 1);
            auto diff = [&](double x, double r) { return f[0]->difference(x, x + r); };
            const auto q = seminorm_1d(diff, a, b, sigma, smooth_panels(f[0], b - a), {});
            return Estimate{q.value, q.error, Method::weight, 0, 0};
        }
        auto diff = [&](double x, double r) { return u.value(Point{x + r}, 1) - u.value(Point{x}, 1); };
        const auto q = seminorm_1d(diff, a, b, sigma, 4, grid_knots(u, 0));
        return Estimate{q.value, q.error, Method::weight, 0, 0};
    }

    // m = 2: polar coordinates in z = y - x, theta in (0, pi) by symmetry
    require(!u.is_pwc(), ErrorKind::unsupported, "piecewise-constant fields live on one-dimensional omega");
    const double lx = omega.extent(0);
    const double ly = omega.extent(1);
    const double tc = std::atan2(ly, lx);
    const double pi = std::numbers::pi;
    const std::vector<double> tbreaks{0.0, tc, 0.5 * pi, pi - tc, pi};
    const auto& trule = numerics::gauss_legendre(16);

    int px = 1;
    int py = 1;
    if (const auto* k = std::get_if<SmoothSeparable>(&u.kind)) {
        const auto f = axis_factors(*k, 2);
        px = smooth_panels(f[0], lx);
        py = smooth_panels(f[1], ly);
    } else {
        px = py = 4;
    }

    std::vector<double> thetas;
    std::vector<double> tweights;
    for (std::size_t p = 0; p + 1 < tbreaks.size(); ++p) {
        const double c = 0.5 * (tbreaks[p] + tbreaks[p + 1]);
        const double h = 0.5 * (tbreaks[p + 1] - tbreaks[p]);
        for (std::size_t i = 0; i < trule.x.size(); ++i) {
            thetas.push_back(c + h * trule.x[i]);
            tweights.push_back(h * trule.w[i]);
        }
    }
    std::vector<numerics::QuadResult> rays(thetas.size());
    parallel_for(thetas.size(), cfg.workers, [&](std::size_t i) {
        const double ct = std::cos(thetas[i]);
        const double st = std::sin(thetas[i]);
        const double reach = std::min(std::abs(ct) > 1e-300 ? lx / std::abs(ct) : 1e300,
            std::abs(st) > 1e-300 ? ly / std::abs(st) : 1e300);
        auto incr = [&](double r) {
            const double zx = r * ct;
            const double zy = r * st;
            Box box;
            box.dim = 2;
            box.lo = {omega.lo[0] + std::max(0.0, -zx), omega.lo[1] + std::max(0.0, -zy), 0.0};
            box.hi = {omega.hi[0] - std::max(0.0, zx), omega.hi[1] - std::max(0.0, zy), 0.0};
            if (!(box.hi[0] > box.lo[0] && box.hi[1] > box.lo[1]))
                return 0.0;
            const auto& rule = numerics::gauss_legendre(16);
            double sum = 0.0;
            const double hx = box.extent(0) / px;
            const double hy = box.extent(1) / py;
            for (int a = 0; a < px; ++a) {
                for (int b = 0; b < py; ++b) {
                    const double x0 = box.lo[0] + a * hx;
                    const double y0 = box.lo[1] + b * hy;
                    for (std::size_t p = 0; p < rule.x.size(); ++p) {
                        const double x = x0 + 0.5 * hx * (1.0 + rule.x[p]);
                        for (std::size_t q = 0; q < rule.x.size(); ++q) {
                            const double y = y0 + 0.5 * hy * (1.0 + rule.x[q]);
                            const double dv = u.value(Point{x + zx, y + zy}, 2) - u.value(Point{x, y}, 2);
                            sum += 0.25 * hx * hy * rule.w[p] * rule.w[q] * dv * dv;
                        }
                    }
                }
            }
            return sum;
        };
        numerics::DifferenceProblem prob;
        prob.length = reach;
        prob.inner_scale = reach;
        prob.kernel_exponent = 1.0 - expo;
        prob.increment_order = 2.0;
        auto kernel = [&](double r) { return std::pow(r, 1.0 - expo); };
        rays[i] = numerics::difference_integral(kernel, incr, prob);
    });
    numerics::QuadResult acc;
    for (std::size_t i = 0; i < rays.size(); ++i) {
        acc.value += tweights[i] * rays[i].value;
        acc.error += tweights[i] * rays[i].error;
    }
    return Estimate{2.0 * acc.value, 2.0 * acc.error, Method::weight, static_cast<std::uint64_t>(rays.size()), 0};
}

Estimate vertical_limit_energy(const Field& v, const UnitFilm& unit, double s0, double constant,
    const QuadConfig& cfg)
{
    require(s0 > 0.0 && s0 < 0.5, ErrorKind::invalid_argument, "s0 must lie in (0, 1/2)");
    const Estimate sl = sliced_vertical_seminorm_sq(v, unit, s0, cfg);
    return Estimate{constant * sl.value, std::abs(constant) * sl.error, sl.method, sl.budget, 0};
}

Estimate vertical_limit_energy(const Field& v, const UnitFilm& unit, double s0, const QuadConfig& cfg)
{
    require(unit.d == 2 || unit.d == 3, ErrorKind::invalid_argument, "d must be 2 or 3");
    const Estimate c = c_const(s0, unit.d);
    Estimate e = vertical_limit_energy(v, unit, s0, c.value, cfg);
    e.error += c.error * (e.value / c.value);
    return e;
}

Estimate vertical_mean_deviation(const Field& v, const UnitFilm& unit, const QuadConfig& cfg)
{
    cfg.validate();
    const int d = unit.d;
    v.validate(d);
    if (!v.depends_on(d - 1, d))
        return Estimate{0.0, 0.0, Method::weight, 0, 0};
    auto integrate = [&](int panels) {
        const auto xs = tensor_nodes(unit.omega, cfg.slice_nodes);
        const auto& rule = numerics::gauss_legendre(16);
        std::vector<double> ts;
        std::vector<double> tw;
        for (int p = 0; p < panels; ++p) {
            const double lo = static_cast<double>(p) / panels;
            const double h = 0.5 / panels;
            for (std::size_t i = 0; i < rule.x.size(); ++i) {
                ts.push_back(lo + h * (1.0 + rule.x[i]));
                tw.push_back(h * rule.w[i]);
            }
        }
        double total = 0.0;
        std::vector<double> vals(ts.size());
        for (const auto& node : xs) {
            Point x = node.x;
            double mean = 0.0;
            for (std::size_t i = 0; i < ts.size(); ++i) {
                x[d - 1] = ts[i];
                vals[i] = v.value(x, d);
                mean += tw[i] * vals[i];
            }
            double dev = 0.0;
            for (std::size_t i = 0; i < ts.size(); ++i)
                dev += tw[i] * (vals[i] - mean) * (vals[i] - mean);
            total += node.w * dev;
        }
        return total;
    };
    int panels = 4;
    if (const auto* k = std::get_if<SmoothSeparable>(&v.kind))
        panels = std::max(2, smooth_panels(axis_factors(*k, d)[d - 1], 1.0));
    else if (const auto* g = std::get_if<GridSample>(&v.kind); g != nullptr && g->box.dim == d)
        panels = std::max(2, g->shape[d - 1] - 1);
    const double fine = integrate(2 * panels);
    const double coarse = integrate(panels);
    return Estimate{fine, std::abs(fine - coarse), Method::weight, 0, 0};
}

Estimate dirichlet_energy(const Field& u, const Box& omega, const QuadConfig& cfg)
{
    cfg.validate();
    omega.validate();
    const auto* k = std::get_if<SmoothSeparable>(&u.kind);
    require(k != nullptr, ErrorKind::unsupported_kind, "the Dirichlet energy needs a smooth separable field");
    const int m = omega.dim;
    const auto f = axis_factors(*k, m);
    const auto& rule = numerics::gauss_legendre(24);
    // int f^2 and int f'^2 along each axis
    std::array<double, max_dim> l2{};
    std::array<double, max_dim> h1{};
    for (int a = 0; a < m; ++a) {
        const double len = omega.extent(a);
        if (f[a] == nullptr) {
            l2[a] = len;
            continue;
        }
        const int panels = 2 * smooth_panels(f[a], len);
        const double h = len / panels;
        for (int p = 0; p < panels; ++p) {
            const double lo = omega.lo[a] + p * h;
            l2[a] += numerics::gl_panel([&](double x) { return (*f[a])(x) * (*f[a])(x); }, lo, lo + h, rule);
            h1[a] += numerics::gl_panel(
                [&](double x) { return f[a]->derivative(x) * f[a]->derivative(x); }, lo, lo + h, rule);
        }
    }
    double total = 0.0;
    for (int a = 0; a < m; ++a) {
        double term = h1[a];
        for (int b = 0; b < m; ++b)
            if (b != a)
                term *= l2[b];
        total += term;
    }
    return Estimate{total, 1e-14 * total, Method::weight, 0, 0};
}

} // namespace thinfilm

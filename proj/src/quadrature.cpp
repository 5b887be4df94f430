#include "thinfilm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "thinfilm/integrate.hpp"
#include "thinfilm/parallel.hpp"
#include "thinfilm/rng.hpp"

namespace thinfilm {

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::mc: return "mc";
    case Method::grid: return "grid";
    case Method::weight: return "weight";
    case Method::exact: return "exact";
    }
    return "unknown";
}

Method method_from_string(std::string_view name)
{
    if (name == "mc")
        return Method::mc;
    if (name == "grid")
        return Method::grid;
    if (name == "weight")
        return Method::weight;
    if (name == "exact")
        return Method::exact;
    throw Error(ErrorKind::invalid_argument, "unknown method '" + std::string(name) + "'");
}

void QuadConfig::validate() const
{
    require(shells >= 1, ErrorKind::invalid_argument, "shells must be >= 1");
    require(nodes_per_axis >= 4, ErrorKind::invalid_argument, "nodes_per_axis must be >= 4");
    require(rel_tol > 0.0 && rel_tol < 1.0, ErrorKind::invalid_argument, "rel_tol must lie in (0, 1)");
    require(batch_size >= 1, ErrorKind::invalid_argument, "batch_size must be >= 1");
    require(slice_nodes >= 1 && slice_nodes <= 128, ErrorKind::invalid_argument, "slice_nodes must be 1..128");
}

namespace {

double unit_ball_volume(int d)
{
    switch (d) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    default: return 4.0 * std::numbers::pi / 3.0;
    }
}

void check_exponent(double s)
{
    require(s > 0.0 && s < 1.0, ErrorKind::invalid_argument, "s must lie in (0, 1)");
}

/// Which coordinate a d = 2 field varies along, or -1 when it varies along both / neither.
int single_axis(const Field& u, int d)
{
    int axis = -1;
    for (int a = 0; a < d; ++a) {
        if (u.depends_on(a, d)) {
            if (axis >= 0)
                return -2;
            axis = a;
        }
    }
    return axis;
}

/// Restriction of a smooth separable field to one coordinate: c * f(t).
struct Profile {
    const SmoothFn* fn = nullptr;
    double factor = 1.0;
};

Profile profile_along(const SmoothSeparable& k, int axis, int d, const Point& at)
{
    Profile p;
    for (std::size_t i = 0; i < k.horizontal.size(); ++i) {
        if (static_cast<int>(i) == axis)
            p.fn = &k.horizontal[i];
        else
            p.factor *= k.horizontal[i](at[i]);
    }
    if (k.vertical) {
        if (axis == d - 1)
            p.fn = &k.vertical.value();
        else
            p.factor *= (*k.vertical)(at[d - 1]);
    }
    return p;
}

/// int_a^{b-r} (c (f(x + r) - f(x)))^2 dx
double smooth_increment(const Profile& p, double a, double b, double r)
{
    const double len = b - r - a;
    if (len <= 0.0)
        return 0.0;
    const double waves = p.fn->max_frequency() * len / std::numbers::pi;
    const int panels = std::max(1, static_cast<int>(std::ceil(waves)) + p.fn->degree() / 16);
    const auto& rule = numerics::gauss_legendre(24);
    const double h = len / panels;
    double sum = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double lo = a + k * h;
        sum += numerics::gl_panel(
            [&](double x) {
                const double dv = p.factor * p.fn->difference(x, x + r);
                return dv * dv;
            },
            lo, lo + h, rule);
    }
    return sum;
}

std::vector<double> pwc_cuts(const PiecewiseConstant1D& v, double a, double b)
{
    std::vector<double> c{a};
    for (double x : v.breakpoints)
        c.push_back(x);
    c.push_back(b);
    return c;
}

std::vector<double> pairwise_differences(const std::vector<double>& c)
{
    std::vector<double> d;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j)
            d.push_back(c[j] - c[i]);
    return d;
}

/// Weight engine for a field of x_1 alone (kernel W, vertical variables integrated out)
/// or x_2 alone (kernel K with the horizontal variables integrated out), d = 2.
Estimate weight_engine(const Field& u, const Box& dom, double s)
{
    const int d = dom.dim;
    const int axis = single_axis(u, d);
    if (axis == -1)
        return Estimate{0.0, 0.0, Method::weight, 0, 0};

    if (const auto* pwc = std::get_if<PiecewiseConstant1D>(&u.kind))
        return pwc_seminorm_sq(*pwc, dom.lo[0], dom.hi[0], dom.extent(1), s);

    const auto& k = std::get<SmoothSeparable>(u.kind);
    const int other = 1 - axis;
    const double a = dom.lo[axis];
    const double b = dom.hi[axis];
    const double len = b - a;
    const double across = dom.extent(other);
    Point at{};
    at[other] = dom.lo[other];
    const Profile prof = profile_along(k, axis, d, at);

    numerics::DifferenceProblem prob;
    prob.length = len;
    prob.inner_scale = std::min(across, len);
    prob.kernel_exponent = -1.0 - 2.0 * s;
    prob.increment_order = 2.0;

    std::uint64_t evals = 0;
    auto kernel = [&](double r) {
        ++evals;
        return vertical_weight(r, across, s, 2);
    };
    auto incr = [&](double r) { return smooth_increment(prof, a, b, r); };
    const auto q = numerics::difference_integral(kernel, incr, prob);
    return Estimate{2.0 * q.value, 2.0 * q.error, Method::weight, evals, 0};
}

} // namespace

// ---------------------------------------------------------------------------

double vertical_weight(double r, double eps, double s, int d)
{
    require(r > 0.0 && eps > 0.0, ErrorKind::invalid_argument, "vertical_weight needs r > 0 and eps > 0");
    check_exponent(s);
    const double a = 0.5 * d + s;
    const double rho = r / eps;
    const auto& rule = numerics::gauss_legendre(20);
    double w = 0.0;
    if (rho >= 1.0) {
        // rho^{-2a} (1 + (eta/rho)^2)^{-a}; the integrand is analytic on [0, 1]
        const double scale = std::pow(rho, -2.0 * a);
        w = scale * numerics::gl_panel(
                        [&](double eta) {
                            const double q = eta / rho;
                            return (1.0 - eta) * std::pow(1.0 + q * q, -a);
                        },
                        0.0, 1.0, rule);
    } else {
        auto f = [&](double eta) { return (1.0 - eta) * std::pow(rho * rho + eta * eta, -a); };
        // [0, rho], [rho, 2 rho], ... keeps every panel a bounded distance from the poles at +-i rho
        double lo = 0.0;
        double hi = rho;
        while (lo < 1.0) {
            hi = std::min(hi, 1.0);
            w += numerics::gl_panel(f, lo, hi, rule);
            lo = hi;
            hi = 2.0 * hi;
        }
    }
    return 2.0 * std::pow(eps, 2.0 - 2.0 * a) * w;
}

double pwc_increment(const PiecewiseConstant1D& v, double a, double b, double r)
{
    const auto c = pwc_cuts(v, a, b);
    const std::size_t n = v.values.size();
    double g = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dv = v.values[i] - v.values[j];
            if (dv == 0.0)
                continue;
            // |{x in I_i : x + r in I_j}|, written so that r << c keeps its digits
            const double len = std::min({c[i + 1] - c[i], c[j + 1] - c[j], r - (c[j] - c[i + 1]), (c[j + 1] - c[i]) - r});
            if (len > 0.0)
                g += dv * dv * len;
        }
    }
    return g;
}

Estimate pwc_seminorm_sq(const PiecewiseConstant1D& v, double a, double b, double eps, double s)
{
    v.validate();
    require(b > a && eps > 0.0, ErrorKind::invalid_argument, "pwc_seminorm_sq needs a < b and eps > 0");
    require(s > 0.0, ErrorKind::invalid_argument, "s must be positive");
    require(s < 0.5, ErrorKind::divergent_integral,
        "the seminorm of a jump diverges for s >= 1/2 (s = " + std::to_string(s) + ")");
    for (double x : v.breakpoints)
        require(x > a && x < b, ErrorKind::domain_mismatch, "breakpoints must lie inside (a, b)");

    bool constant = true;
    for (double x : v.values)
        constant = constant && x == v.values.front();
    if (constant)
        return Estimate{0.0, 0.0, Method::weight, 0, 0};

    numerics::DifferenceProblem prob;
    prob.length = b - a;
    prob.breaks = pairwise_differences(pwc_cuts(v, a, b));
    prob.inner_scale = std::min(eps, b - a);
    prob.kernel_exponent = -1.0 - 2.0 * s;
    prob.increment_order = 1.0;

    std::uint64_t evals = 0;
    auto kernel = [&](double r) {
        ++evals;
        return vertical_weight(r, eps, s, 2);
    };
    auto incr = [&](double r) { return pwc_increment(v, a, b, r); };
    const auto q = numerics::difference_integral(kernel, incr, prob);
    return Estimate{2.0 * q.value, 2.0 * q.error, Method::weight, evals, 0};
}

bool weight_supports(const Field& u, const Box& dom)
{
    const int d = dom.dim;
    const int axis = single_axis(u, d);
    if (axis == -1)
        return true;
    if (d != 2 || axis < 0)
        return false;
    if (u.is_pwc())
        return axis == 0;
    return u.is_smooth();
}

// ---------------------------------------------------------------------------
// Grid oracle

namespace {

double grid_sum(const Field& u, const Box& dom, double s, int n, const QuadConfig& cfg)
{
    const int d = dom.dim;
    std::array<int, max_dim> shape{1, 1, 1};
    std::array<double, max_dim> h{};
    std::size_t cells = 1;
    for (int a = 0; a < d; ++a) {
        shape[a] = n;
        h[a] = dom.extent(a) / n;
        cells *= static_cast<std::size_t>(n);
    }
    std::vector<double> values(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        std::size_t rem = c;
        Point x{};
        for (int a = d - 1; a >= 0; --a) {
            const auto i = static_cast<int>(rem % static_cast<std::size_t>(n));
            rem /= static_cast<std::size_t>(n);
            x[a] = dom.lo[a] + (i + 0.5) * h[a];
        }
        values[c] = u.value(x, d);
    }

    // kernel by index offset, offsets in [0, n) per axis (|offset| suffices)
    const double p = 0.5 * (d + 2.0 * s);
    std::vector<double> kernel(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        std::size_t rem = c;
        double r2 = 0.0;
        for (int a = d - 1; a >= 0; --a) {
            const auto i = static_cast<double>(rem % static_cast<std::size_t>(n));
            rem /= static_cast<std::size_t>(n);
            r2 += (i * h[a]) * (i * h[a]);
        }
        kernel[c] = c == 0 ? 0.0 : std::pow(r2, -p);
    }

    double vol = 1.0;
    for (int a = 0; a < d; ++a)
        vol *= h[a];

    auto decompose = [&](std::size_t c, std::array<int, max_dim>& ijk) {
        std::size_t rem = c;
        for (int a = d - 1; a >= 0; --a) {
            ijk[a] = static_cast<int>(rem % static_cast<std::size_t>(n));
            rem /= static_cast<std::size_t>(n);
        }
    };

    std::vector<double> row(cells, 0.0);
    parallel_for(cells, cfg.workers, [&](std::size_t i) {
        std::array<int, max_dim> ii{};
        std::array<int, max_dim> jj{};
        decompose(i, ii);
        double acc = 0.0;
        for (std::size_t j = i + 1; j < cells; ++j) {
            const double dv = values[i] - values[j];
            if (dv == 0.0)
                continue;
            decompose(j, jj);
            std::size_t off = 0;
            for (int a = 0; a < d; ++a)
                off = off * static_cast<std::size_t>(n) + static_cast<std::size_t>(std::abs(jj[a] - ii[a]));
            acc += dv * dv * kernel[off];
        }
        row[i] = acc;
    });
    double total = 0.0;
    for (double r : row)
        total += r;
    return 2.0 * total * vol * vol;
}

} // namespace

Estimate grid_oracle(const Field& u, const Box& dom, double s, int n, const QuadConfig& cfg)
{
    check_exponent(s);
    require(n >= 4, ErrorKind::invalid_argument, "grid oracle needs n >= 4");
    dom.validate();
    const double cells = std::pow(static_cast<double>(n), dom.dim);
    require(cells * cells <= static_cast<double>(cfg.max_budget), ErrorKind::budget,
        "grid oracle with n = " + std::to_string(n) + " exceeds the pair budget");
    const double fine = grid_sum(u, dom, s, n, cfg);
    const double coarse = grid_sum(u, dom, s, n / 2, cfg);
    // the omitted diagonal and midpoint errors scale like h^q
    const double q = u.increment_order() - 2.0 * s;
    const double amplify = q > 0.0 ? std::max(1.0, 1.0 / (std::exp2(q) - 1.0)) : 1.0;
    return Estimate{fine, std::abs(fine - coarse) * amplify, Method::grid,
        static_cast<std::uint64_t>(cells), 0};
}

// ---------------------------------------------------------------------------
// Monte Carlo

Estimate monte_carlo(const Field& u, const Box& dom, double s, const QuadConfig& cfg, std::uint64_t seed)
{
    check_exponent(s);
    cfg.validate();
    dom.validate();
    const int d = dom.dim;
    const int shells = cfg.shells;
    const double diam = dom.diameter();
    const double vol = dom.volume();

    std::uint64_t total = cfg.samples;
    if (total == 0)
        total = static_cast<std::uint64_t>(shells) * 16384;
    total = std::min(total, cfg.max_budget);
    const std::uint64_t per_shell = std::max<std::uint64_t>(1, total / static_cast<std::uint64_t>(shells));
    const std::uint64_t batches_per_shell = (per_shell + cfg.batch_size - 1) / cfg.batch_size;
    const std::uint64_t nbatches = batches_per_shell * static_cast<std::uint64_t>(shells);

    struct Partial {
        double sum = 0.0;
        double sumsq = 0.0;
    };
    std::vector<Partial> partial(nbatches);
    const double expo = -(d + 2.0 * s);

    parallel_for(nbatches, cfg.workers, [&](std::size_t b) {
        const auto shell = static_cast<int>(b / batches_per_shell);
        const std::uint64_t local = b % batches_per_shell;
        const std::uint64_t first = local * cfg.batch_size;
        const std::uint64_t last = std::min(per_shell, first + cfg.batch_size);
        const double r_out = std::ldexp(diam, -shell);
        const double r_in = 0.5 * r_out;
        const double in_d = std::pow(r_in, d);
        const double out_d = std::pow(r_out, d);
        const std::uint64_t key = stream_key(seed, static_cast<std::uint64_t>(shell), local);
        Partial acc;
        for (std::uint64_t i = first; i < last; ++i) {
            const std::uint64_t ctr = (i - first) * 8;
            Point x{};
            for (int a = 0; a < d; ++a)
                x[a] = dom.lo[a] + counter_uniform(key, ctr + a) * dom.extent(a);
            const double rad = std::pow(in_d + counter_uniform(key, ctr + 3) * (out_d - in_d), 1.0 / d);
            Point dir{};
            if (d == 1) {
                dir[0] = 1.0;
            } else if (d == 2) {
                const double phi = 2.0 * std::numbers::pi * counter_uniform(key, ctr + 4);
                dir[0] = std::cos(phi);
                dir[1] = std::sin(phi);
            } else {
                const double z = 2.0 * counter_uniform(key, ctr + 4) - 1.0;
                const double phi = 2.0 * std::numbers::pi * counter_uniform(key, ctr + 5);
                const double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
                dir[0] = rr * std::cos(phi);
                dir[1] = rr * std::sin(phi);
                dir[2] = z;
            }
            const double ux = u.value(x, d);
            const double kern = std::pow(rad, expo);
            double f = 0.0;
            for (double sign : {1.0, -1.0}) {
                Point y = x;
                for (int a = 0; a < d; ++a)
                    y[a] += sign * rad * dir[a];
                if (dom.contains(y)) {
                    const double dv = ux - u.value(y, d);
                    f += dv * dv * kern;
                }
            }
            f *= 0.5;
            acc.sum += f;
            acc.sumsq += f * f;
        }
        partial[b] = acc;
    });

    const double ball = unit_ball_volume(d);
    // shell k contributes ~ r^{p - 2s}; the ball inside the last shell is the geometric remainder
    const double ratio = std::exp2(-(u.increment_order() - 2.0 * s));
    double value = 0.0;
    double var = 0.0;
    double last_value = 0.0;
    double last_var = 0.0;
    for (int k = 0; k < shells; ++k) {
        double sum = 0.0;
        double sumsq = 0.0;
        for (std::uint64_t j = 0; j < batches_per_shell; ++j) {
            const auto& p = partial[static_cast<std::size_t>(k) * batches_per_shell + j];
            sum += p.sum;
            sumsq += p.sumsq;
        }
        const double n = static_cast<double>(per_shell);
        const double mean = sum / n;
        const double sample_var = n > 1 ? std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0)) : 0.0;
        const double r_out = std::ldexp(diam, -k);
        const double shell_vol = ball * (std::pow(r_out, d) - std::pow(0.5 * r_out, d));
        const double w = vol * shell_vol;
        last_value = w * mean;
        last_var = w * w * sample_var / n;
        value += last_value;
        var += last_var;
    }
    if (ratio < 1.0) {
        const double tail = ratio / (1.0 - ratio);
        value += tail * last_value;
        var += tail * tail * last_var;
    }
    return Estimate{std::max(0.0, value), std::sqrt(var), Method::mc,
        per_shell * static_cast<std::uint64_t>(shells), seed};
}

// ---------------------------------------------------------------------------

Estimate gagliardo_sq(const Field& u, const Box& dom, double s, const QuadConfig& cfg, Method method,
    std::uint64_t seed)
{
    check_exponent(s);
    cfg.validate();
    dom.validate();
    u.validate(dom.dim);
    if (u.is_pwc() && u.depends_on(0, dom.dim))
        require(s < 0.5, ErrorKind::divergent_integral,
            "the seminorm of a piecewise-constant field diverges for s >= 1/2");
    switch (method) {
    case Method::weight:
        require(weight_supports(u, dom), ErrorKind::unsupported,
            "the weight engine needs a d = 2 field of one coordinate (piecewise-constant or smooth)");
        return weight_engine(u, dom, s);
    case Method::grid:
        return grid_oracle(u, dom, s, cfg.nodes_per_axis, cfg);
    case Method::mc:
        return monte_carlo(u, dom, s, cfg, seed);
    case Method::exact:
        break;
    }
    throw Error(ErrorKind::unsupported, "no engine '" + std::string(to_string(method)) + "' for gagliardo_sq");
}

Estimate gagliardo_sq(const Field& u, const ThinFilm& dom, double s, const QuadConfig& cfg, Method method,
    std::uint64_t seed)
{
    return gagliardo_sq(u, dom.box(), s, cfg, method, seed);
}

Estimate gagliardo_sq(const Field& u, const UnitFilm& dom, double s, const QuadConfig& cfg, Method method,
    std::uint64_t seed)
{
    return gagliardo_sq(u, dom.box(), s, cfg, method, seed);
}

} // namespace thinfilm

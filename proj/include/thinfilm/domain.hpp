#ifndef THINFILM_DOMAIN_HPP
#define THINFILM_DOMAIN_HPP

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "thinfilm/error.hpp"

namespace thinfilm {

constexpr int max_dim = 3;

/// Point in R^d, d <= 3. Unused trailing coordinates are ignored.
using Point = std::array<double, max_dim>;

/// Axis-aligned box in R^dim, 1 <= dim <= 3.
struct Box {
    int dim = 0;
    Point lo{};
    Point hi{};

    static Box interval(double a, double b);
    static Box make(std::span<const double> lower, std::span<const double> upper);

    double extent(int axis) const { return hi[axis] - lo[axis]; }
    double volume() const;
    double diameter() const;
    bool contains(const Point& x) const;
    void validate() const;
};

/// Thin film omega x (0, eps) in R^d with omega a box in R^{d-1}.
struct ThinFilm {
    int d = 2;
    Box omega;
    double eps = 1.0;

    ThinFilm(int d, Box omega, double eps);
    Box box() const;
};

/// omega x (0, 1).
struct UnitFilm {
    int d = 2;
    Box omega;

    UnitFilm(int d, Box omega);
    Box box() const;
    ThinFilm film(double eps) const { return ThinFilm(d, omega, eps); }
};

/// f(t) = sum_k poly[k] t^k + sum_j amp_j cos(freq_j t + phase_j).
struct SmoothFn {
    struct Cosine {
        double amp = 0.0;
        double freq = 0.0;
        double phase = 0.0;
    };

    std::vector<double> poly;
    std::vector<Cosine> cosines;

    static SmoothFn constant(double c) { return SmoothFn{{c}, {}}; }
    static SmoothFn polynomial(std::vector<double> coeffs) { return SmoothFn{std::move(coeffs), {}}; }
    static SmoothFn cosine(double amp, double freq, double phase = 0.0)
    {
        return SmoothFn{{}, {Cosine{amp, freq, phase}}};
    }

    double operator()(double t) const;
    /// f(y) - f(x) without cancellation for |y - x| << 1.
    double difference(double x, double y) const;
    double derivative(double t) const;
    bool is_constant() const;
    /// Upper bound on the angular frequency content, 0 for polynomials.
    double max_frequency() const;
    int degree() const;
    /// g(t) = f(c t).
    SmoothFn compose_scale(double c) const;
    /// g(t) = f(t - shift).
    SmoothFn compose_shift(double shift) const;
    SmoothFn scaled_values(double c) const;
};

/// Piecewise-constant profile in x_1, right-continuous at breakpoints:
/// values[j] on [breakpoints[j-1], breakpoints[j]).
struct PiecewiseConstant1D {
    std::vector<double> breakpoints;
    std::vector<double> values;

    double operator()(double x1) const;
    void validate() const;
};

/// u(x', x_d) = prod_i horizontal[i](x'_i) * vertical(x_d); vertical absent means 1.
struct SmoothSeparable {
    std::vector<SmoothFn> horizontal;
    std::optional<SmoothFn> vertical;
};

/// Node values on a uniform grid over `box`, multilinear in between.
/// Row-major with the last axis fastest.
struct GridSample {
    Box box;
    std::array<int, max_dim> shape{};
    std::vector<double> values;

    double operator()(const Point& x) const;
    void validate() const;
    std::size_t index(const std::array<int, max_dim>& ijk) const;
};

struct Field {
    std::variant<PiecewiseConstant1D, SmoothSeparable, GridSample> kind;
    std::optional<double> lipschitz;
    std::optional<double> sup_norm;

    static Field pwc(std::vector<double> breakpoints, std::vector<double> values);
    static Field smooth(std::vector<SmoothFn> horizontal, std::optional<SmoothFn> vertical = std::nullopt);
    static Field grid(Box box, std::array<int, max_dim> shape, std::vector<double> values);

    bool is_pwc() const { return std::holds_alternative<PiecewiseConstant1D>(kind); }
    bool is_smooth() const { return std::holds_alternative<SmoothSeparable>(kind); }
    bool is_grid() const { return std::holds_alternative<GridSample>(kind); }

    /// Value at x in a d-dimensional ambient space (vertical axis = d - 1).
    double value(const Point& x, int d) const;
    /// True when the field may vary along `axis` of R^d.
    bool depends_on(int axis, int d) const;
    /// True when the field is constant everywhere on R^d.
    bool is_constant(int d) const;
    /// Leading power p of the squared increment, |u(x+h)-u(x)|^2 ~ |h|^p near 0 (1 for jumps).
    int increment_order() const { return is_pwc() ? 1 : 2; }

    void validate(int d) const;
};

/// Value of u at `point` in R^d; grid fields reject points outside their box.
double field_eval(const Field& u, std::span<const double> point);
/// Same, also rejecting points outside `dom`.
double field_eval(const Field& u, const Box& dom, std::span<const double> point);

struct Jump {
    double location;
    double height;
};

/// Jumps v(t+) - v(t-) of a piecewise-constant field; zero jumps are dropped.
std::vector<Jump> jump_set(const Field& u);

/// v(x', t) = u(x', eps t) on omega x (0, 1).
Field rescale_to_unit(const Field& u, const ThinFilm& film, double eps);
/// u(x', x_d) = v(x', x_d / eps) on omega x (0, eps); inverse of rescale_to_unit.
Field rescale_from_unit(const Field& v, const UnitFilm& unit, double eps);

/// u(x / lambda) in R^d.
Field dilate(const Field& u, int d, double lambda);
/// u(x - shift) in R^d.
Field translate(const Field& u, int d, const Point& shift);
/// c * u.
Field scale_values(const Field& u, double c);

Box dilate(const Box& b, double lambda);
Box translate(const Box& b, const Point& shift);

/// Exponent schedules s_eps.
struct Schedule {
    struct Constant {
        double s0;
    };
    /// s = c / |log eps|.
    struct LogReciprocal {
        double c;
    };
    /// s = eps^alpha.
    struct Power {
        double alpha;
    };
    struct Table {
        std::vector<std::pair<double, double>> entries; // (eps, s)
    };

    std::variant<Constant, LogReciprocal, Power, Table> rule;

    double exponent(double eps) const;
    void validate() const;
};

} // namespace thinfilm

#endif

#include "thinfilm/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace thinfilm {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::domain_mismatch: return "domain-mismatch";
    case ErrorKind::unsupported_kind: return "unsupported-kind";
    case ErrorKind::out_of_domain: return "out-of-domain";
    case ErrorKind::divergent_integral: return "divergent-integral";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::budget: return "budget";
    case ErrorKind::fit: return "fit";
    case ErrorKind::unclassifiable: return "unclassifiable";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Box / films

Box Box::interval(double a, double b)
{
    Box box;
    box.dim = 1;
    box.lo[0] = a;
    box.hi[0] = b;
    box.validate();
    return box;
}

Box Box::make(std::span<const double> lower, std::span<const double> upper)
{
    require(lower.size() == upper.size() && !lower.empty() && lower.size() <= max_dim,
        ErrorKind::invalid_argument, "box corners must have equal dimension 1..3");
    Box box;
    box.dim = static_cast<int>(lower.size());
    for (int i = 0; i < box.dim; ++i) {
        box.lo[i] = lower[i];
        box.hi[i] = upper[i];
    }
    box.validate();
    return box;
}

double Box::volume() const
{
    double v = 1.0;
    for (int i = 0; i < dim; ++i)
        v *= extent(i);
    return v;
}

double Box::diameter() const
{
    double s = 0.0;
    for (int i = 0; i < dim; ++i)
        s += extent(i) * extent(i);
    return std::sqrt(s);
}

bool Box::contains(const Point& x) const
{
    for (int i = 0; i < dim; ++i)
        if (!(x[i] >= lo[i] && x[i] <= hi[i]))
            return false;
    return true;
}

void Box::validate() const
{
    require(dim >= 1 && dim <= max_dim, ErrorKind::invalid_argument, "box dimension must be 1..3");
    for (int i = 0; i < dim; ++i)
        require(std::isfinite(lo[i]) && std::isfinite(hi[i]) && hi[i] > lo[i],
            ErrorKind::invalid_argument, "box must have positive finite extent on every axis");
}

ThinFilm::ThinFilm(int d_, Box omega_, double eps_)
    : d(d_), omega(omega_), eps(eps_)
{
    require(d == 2 || d == 3, ErrorKind::invalid_argument, "thin films are supported for d = 2, 3");
    omega.validate();
    require(omega.dim == d - 1, ErrorKind::invalid_argument, "omega must be a box in R^{d-1}");
    require(eps > 0.0 && std::isfinite(eps), ErrorKind::invalid_argument, "film thickness must be positive");
}

Box ThinFilm::box() const
{
    Box b = omega;
    b.dim = d;
    b.lo[d - 1] = 0.0;
    b.hi[d - 1] = eps;
    return b;
}

UnitFilm::UnitFilm(int d_, Box omega_)
    : d(d_), omega(omega_)
{
    require(d == 2 || d == 3, ErrorKind::invalid_argument, "unit films are supported for d = 2, 3");
    omega.validate();
    require(omega.dim == d - 1, ErrorKind::invalid_argument, "omega must be a box in R^{d-1}");
}

Box UnitFilm::box() const
{
    return ThinFilm(d, omega, 1.0).box();
}

// ---------------------------------------------------------------------------
// SmoothFn

double SmoothFn::operator()(double t) const
{
    double p = 0.0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it)
        p = p * t + *it;
    for (const auto& c : cosines)
        p += c.amp * std::cos(c.freq * t + c.phase);
    return p;
}

double SmoothFn::difference(double x, double y) const
{
    const double h = y - x;
    // y^k - x^k = y (y^{k-1} - x^{k-1}) + x^{k-1} h
    double result = 0.0;
    double dk = 0.0;
    double xp = 1.0;
    for (std::size_t k = 1; k < poly.size(); ++k) {
        dk = y * dk + xp * h;
        xp *= x;
        result += poly[k] * dk;
    }
    for (const auto& c : cosines)
        result -= 2.0 * c.amp * std::sin(0.5 * c.freq * (x + y) + c.phase) * std::sin(0.5 * c.freq * h);
    return result;
}

double SmoothFn::derivative(double t) const
{
    double p = 0.0;
    for (std::size_t k = poly.size(); k-- > 1;)
        p = p * t + static_cast<double>(k) * poly[k];
    for (const auto& c : cosines)
        p -= c.amp * c.freq * std::sin(c.freq * t + c.phase);
    return p;
}

bool SmoothFn::is_constant() const
{
    for (std::size_t k = 1; k < poly.size(); ++k)
        if (poly[k] != 0.0)
            return false;
    for (const auto& c : cosines)
        if (c.amp != 0.0 && c.freq != 0.0)
            return false;
    return true;
}

double SmoothFn::max_frequency() const
{
    double f = 0.0;
    for (const auto& c : cosines)
        if (c.amp != 0.0)
            f = std::max(f, std::abs(c.freq));
    return f;
}

int SmoothFn::degree() const
{
    for (std::size_t k = poly.size(); k-- > 0;)
        if (poly[k] != 0.0)
            return static_cast<int>(k);
    return 0;
}

SmoothFn SmoothFn::compose_scale(double c) const
{
    SmoothFn g = *this;
    double ck = 1.0;
    for (auto& a : g.poly) {
        a *= ck;
        ck *= c;
    }
    for (auto& cs : g.cosines)
        cs.freq *= c;
    return g;
}

SmoothFn SmoothFn::compose_shift(double shift) const
{
    SmoothFn g;
    g.poly.assign(poly.size(), 0.0);
    // (t - a)^k = sum_j C(k, j) t^j (-a)^{k-j}
    for (std::size_t k = 0; k < poly.size(); ++k) {
        double binom = 1.0;
        for (std::size_t j = 0; j <= k; ++j) {
            if (j > 0)
                binom = binom * static_cast<double>(k - j + 1) / static_cast<double>(j);
            g.poly[j] += poly[k] * binom * std::pow(-shift, static_cast<double>(k - j));
        }
    }
    g.cosines = cosines;
    for (auto& cs : g.cosines)
        cs.phase -= cs.freq * shift;
    return g;
}

SmoothFn SmoothFn::scaled_values(double c) const
{
    SmoothFn g = *this;
    for (auto& a : g.poly)
        a *= c;
    for (auto& cs : g.cosines)
        cs.amp *= c;
    return g;
}

// ---------------------------------------------------------------------------
// Field kinds

double PiecewiseConstant1D::operator()(double x1) const
{
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x1);
    return values[static_cast<std::size_t>(it - breakpoints.begin())];
}

void PiecewiseConstant1D::validate() const
{
    require(values.size() == breakpoints.size() + 1, ErrorKind::invalid_argument,
        "piecewise-constant field needs one more value than breakpoints");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        require(breakpoints[i] > breakpoints[i - 1], ErrorKind::invalid_argument,
            "breakpoints must be strictly increasing");
    for (double b : breakpoints)
        require(std::isfinite(b), ErrorKind::invalid_argument, "breakpoints must be finite");
}

std::size_t GridSample::index(const std::array<int, max_dim>& ijk) const
{
    std::size_t idx = 0;
    for (int a = 0; a < box.dim; ++a)
        idx = idx * static_cast<std::size_t>(shape[a]) + static_cast<std::size_t>(ijk[a]);
    return idx;
}

double GridSample::operator()(const Point& x) const
{
    std::array<int, max_dim> base{};
    std::array<double, max_dim> frac{};
    for (int a = 0; a < box.dim; ++a) {
        const int cells = shape[a] - 1;
        double t = (x[a] - box.lo[a]) / box.extent(a) * cells;
        t = std::clamp(t, 0.0, static_cast<double>(cells));
        int i = std::min(static_cast<int>(t), cells - 1);
        base[a] = i;
        frac[a] = t - i;
    }
    double result = 0.0;
    const int corners = 1 << box.dim;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        std::array<int, max_dim> ijk{};
        for (int a = 0; a < box.dim; ++a) {
            const int bit = (c >> a) & 1;
            ijk[a] = base[a] + bit;
            w *= bit ? frac[a] : 1.0 - frac[a];
        }
        if (w != 0.0)
            result += w * values[index(ijk)];
    }
    return result;
}

void GridSample::validate() const
{
    box.validate();
    std::size_t n = 1;
    for (int a = 0; a < box.dim; ++a) {
        require(shape[a] >= 2, ErrorKind::invalid_argument, "grid fields need at least 2 nodes per axis");
        n *= static_cast<std::size_t>(shape[a]);
    }
    require(values.size() == n, ErrorKind::invalid_argument, "grid node count does not match shape");
}

Field Field::pwc(std::vector<double> breakpoints, std::vector<double> values)
{
    Field f{PiecewiseConstant1D{std::move(breakpoints), std::move(values)}, std::nullopt, std::nullopt};
    std::get<PiecewiseConstant1D>(f.kind).validate();
    const auto& v = std::get<PiecewiseConstant1D>(f.kind).values;
    double sup = 0.0;
    for (double x : v)
        sup = std::max(sup, std::abs(x));
    f.sup_norm = sup;
    return f;
}

Field Field::smooth(std::vector<SmoothFn> horizontal, std::optional<SmoothFn> vertical)
{
    require(!horizontal.empty() && horizontal.size() <= max_dim - 1, ErrorKind::invalid_argument,
        "smooth fields need one horizontal factor per axis of omega");
    return Field{SmoothSeparable{std::move(horizontal), std::move(vertical)}, std::nullopt, std::nullopt};
}

Field Field::grid(Box box, std::array<int, max_dim> shape, std::vector<double> values)
{
    Field f{GridSample{box, shape, std::move(values)}, std::nullopt, std::nullopt};
    std::get<GridSample>(f.kind).validate();
    return f;
}

double Field::value(const Point& x, int d) const
{
    return std::visit(
        [&](const auto& k) -> double {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, PiecewiseConstant1D>) {
                return k(x[0]);
            } else if constexpr (std::is_same_v<K, SmoothSeparable>) {
                double p = 1.0;
                for (std::size_t i = 0; i < k.horizontal.size(); ++i)
                    p *= k.horizontal[i](x[i]);
                // evaluated on omega itself: no vertical factor
                if (k.vertical && d > static_cast<int>(k.horizontal.size()))
                    p *= (*k.vertical)(x[d - 1]);
                return p;
            } else {
                return k(x);
            }
        },
        kind);
}

bool Field::depends_on(int axis, int d) const
{
    if (is_pwc()) {
        if (axis != 0)
            return false;
        return !jump_set(*this).empty();
    }
    if (const auto* s = std::get_if<SmoothSeparable>(&kind)) {
        // A zero factor makes the whole product vanish.
        auto zero = [](const SmoothFn& f) {
            return f.is_constant() && f(0.0) == 0.0;
        };
        for (const auto& h : s->horizontal)
            if (zero(h))
                return false;
        if (s->vertical && zero(*s->vertical))
            return false;
        if (axis == d - 1 && d > static_cast<int>(s->horizontal.size()))
            return s->vertical && !s->vertical->is_constant();
        return axis < static_cast<int>(s->horizontal.size()) && !s->horizontal[axis].is_constant();
    }
    const auto& g = std::get<GridSample>(kind);
    if (axis >= g.box.dim)
        return false;
    std::array<int, max_dim> ijk{};
    const std::size_t n = g.values.size();
    for (std::size_t flat = 0; flat < n; ++flat) {
        std::size_t rem = flat;
        for (int a = g.box.dim - 1; a >= 0; --a) {
            ijk[a] = static_cast<int>(rem % static_cast<std::size_t>(g.shape[a]));
            rem /= static_cast<std::size_t>(g.shape[a]);
        }
        if (ijk[axis] + 1 < g.shape[axis]) {
            auto next = ijk;
            ++next[axis];
            if (g.values[g.index(next)] != g.values[flat])
                return true;
        }
    }
    return false;
}

bool Field::is_constant(int d) const
{
    for (int a = 0; a < d; ++a)
        if (depends_on(a, d))
            return false;
    return true;
}

void Field::validate(int d) const
{
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, PiecewiseConstant1D>) {
                k.validate();
            } else if constexpr (std::is_same_v<K, SmoothSeparable>) {
                const int m = static_cast<int>(k.horizontal.size());
                require(m == d - 1 || m == d, ErrorKind::domain_mismatch,
                    "smooth field has " + std::to_string(m) + " horizontal factors, expected "
                        + std::to_string(d - 1));
            } else {
                k.validate();
                require(k.box.dim == d || k.box.dim == d - 1, ErrorKind::domain_mismatch,
                    "grid field dimension does not match the domain");
            }
        },
        kind);
    if (lipschitz)
        require(*lipschitz >= 0.0, ErrorKind::invalid_argument, "Lipschitz bound must be nonnegative");
    if (sup_norm)
        require(*sup_norm >= 0.0, ErrorKind::invalid_argument, "sup norm must be nonnegative");
}

double field_eval(const Field& u, std::span<const double> point)
{
    require(!point.empty() && point.size() <= max_dim, ErrorKind::invalid_argument,
        "points must have 1..3 coordinates");
    Point x{};
    std::copy(point.begin(), point.end(), x.begin());
    if (const auto* g = std::get_if<GridSample>(&u.kind)) {
        require(g->box.contains(x), ErrorKind::out_of_domain, "point lies outside the grid box");
    }
    return u.value(x, static_cast<int>(point.size()));
}

double field_eval(const Field& u, const Box& dom, std::span<const double> point)
{
    require(static_cast<int>(point.size()) == dom.dim, ErrorKind::domain_mismatch,
        "point dimension does not match the domain");
    Point x{};
    std::copy(point.begin(), point.end(), x.begin());
    require(dom.contains(x), ErrorKind::out_of_domain, "point lies outside the domain");
    return field_eval(u, point);
}

std::vector<Jump> jump_set(const Field& u)
{
    const auto* p = std::get_if<PiecewiseConstant1D>(&u.kind);
    require(p != nullptr, ErrorKind::unsupported_kind, "jump_set requires a piecewise-constant field");
    std::vector<Jump> jumps;
    for (std::size_t j = 0; j < p->breakpoints.size(); ++j) {
        const double h = p->values[j + 1] - p->values[j];
        if (h != 0.0)
            jumps.push_back({p->breakpoints[j], h});
    }
    return jumps;
}

// ---------------------------------------------------------------------------
// Rescaling

namespace {

Field rescale_vertical(const Field& u, int d, double factor)
{
    // returns w(x', t) = u(x', factor * t)
    Field w = u;
    std::visit(
        [&](auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, SmoothSeparable>) {
                if (k.vertical)
                    k.vertical = k.vertical->compose_scale(factor);
            } else if constexpr (std::is_same_v<K, GridSample>) {
                if (k.box.dim == d) {
                    k.box.lo[d - 1] /= factor;
                    k.box.hi[d - 1] /= factor;
                }
            }
        },
        w.kind);
    return w;
}

void check_thickness(double film_eps, double eps)
{
    require(eps > 0.0 && std::abs(eps - film_eps) <= 1e-12 * film_eps, ErrorKind::domain_mismatch,
        "rescaling thickness does not match the film");
}

} // namespace

Field rescale_to_unit(const Field& u, const ThinFilm& film, double eps)
{
    check_thickness(film.eps, eps);
    u.validate(film.d);
    return rescale_vertical(u, film.d, eps);
}

Field rescale_from_unit(const Field& v, const UnitFilm& unit, double eps)
{
    require(eps > 0.0 && std::isfinite(eps), ErrorKind::invalid_argument, "eps must be positive");
    v.validate(unit.d);
    return rescale_vertical(v, unit.d, 1.0 / eps);
}

Field dilate(const Field& u, int d, double lambda)
{
    require(lambda > 0.0, ErrorKind::invalid_argument, "dilation factor must be positive");
    Field w = u;
    std::visit(
        [&](auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, PiecewiseConstant1D>) {
                for (auto& b : k.breakpoints)
                    b *= lambda;
            } else if constexpr (std::is_same_v<K, SmoothSeparable>) {
                for (auto& h : k.horizontal)
                    h = h.compose_scale(1.0 / lambda);
                if (k.vertical)
                    k.vertical = k.vertical->compose_scale(1.0 / lambda);
            } else {
                k.box = dilate(k.box, lambda);
            }
        },
        w.kind);
    if (w.lipschitz)
        *w.lipschitz /= lambda;
    (void)d;
    return w;
}

Field translate(const Field& u, int d, const Point& shift)
{
    Field w = u;
    std::visit(
        [&](auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, PiecewiseConstant1D>) {
                for (auto& b : k.breakpoints)
                    b += shift[0];
            } else if constexpr (std::is_same_v<K, SmoothSeparable>) {
                for (std::size_t i = 0; i < k.horizontal.size(); ++i)
                    k.horizontal[i] = k.horizontal[i].compose_shift(shift[i]);
                if (k.vertical)
                    k.vertical = k.vertical->compose_shift(shift[d - 1]);
            } else {
                k.box = translate(k.box, shift);
            }
        },
        w.kind);
    return w;
}

Field scale_values(const Field& u, double c)
{
    Field w = u;
    std::visit(
        [&](auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, PiecewiseConstant1D>) {
                for (auto& v : k.values)
                    v *= c;
            } else if constexpr (std::is_same_v<K, SmoothSeparable>) {
                k.horizontal[0] = k.horizontal[0].scaled_values(c);
            } else {
                for (auto& v : k.values)
                    v *= c;
            }
        },
        w.kind);
    if (w.lipschitz)
        *w.lipschitz *= std::abs(c);
    if (w.sup_norm)
        *w.sup_norm *= std::abs(c);
    return w;
}

Box dilate(const Box& b, double lambda)
{
    Box r = b;
    for (int i = 0; i < b.dim; ++i) {
        r.lo[i] *= lambda;
        r.hi[i] *= lambda;
    }
    return r;
}

Box translate(const Box& b, const Point& shift)
{
    Box r = b;
    for (int i = 0; i < b.dim; ++i) {
        r.lo[i] += shift[i];
        r.hi[i] += shift[i];
    }
    return r;
}

// ---------------------------------------------------------------------------
// Schedules

double Schedule::exponent(double eps) const
{
    require(eps > 0.0 && eps < 1.0, ErrorKind::invalid_argument, "schedules are evaluated for eps in (0, 1)");
    const double s = std::visit(
        [&](const auto& r) -> double {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, Constant>) {
                return r.s0;
            } else if constexpr (std::is_same_v<R, LogReciprocal>) {
                return r.c / std::abs(std::log(eps));
            } else if constexpr (std::is_same_v<R, Power>) {
                return std::pow(eps, r.alpha);
            } else {
                const auto& e = r.entries;
                for (const auto& [te, ts] : e)
                    if (te == eps)
                        return ts;
                // linear interpolation in log eps; entries sorted by decreasing eps
                const double le = std::log(eps);
                for (std::size_t i = 1; i < e.size(); ++i) {
                    const double a = std::log(e[i - 1].first);
                    const double b = std::log(e[i].first);
                    if ((le - a) * (le - b) <= 0.0) {
                        const double w = (le - a) / (b - a);
                        return e[i - 1].second + w * (e[i].second - e[i - 1].second);
                    }
                }
                throw Error(ErrorKind::out_of_domain, "eps lies outside the schedule table");
            }
        },
        rule);
    require(s > 0.0 && s < 1.0, ErrorKind::invalid_argument,
        "schedule produced an exponent outside (0, 1) at eps = " + std::to_string(eps));
    return s;
}

void Schedule::validate() const
{
    std::visit(
        [&](const auto& r) {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, Constant>) {
                require(r.s0 > 0.0 && r.s0 < 0.5, ErrorKind::invalid_argument, "constant schedules need s0 in (0, 1/2)");
            } else if constexpr (std::is_same_v<R, LogReciprocal>) {
                require(r.c > 0.0, ErrorKind::invalid_argument, "log-reciprocal schedules need c > 0");
            } else if constexpr (std::is_same_v<R, Power>) {
                require(r.alpha > 0.0, ErrorKind::invalid_argument, "power schedules need alpha > 0");
            } else {
                require(r.entries.size() >= 2, ErrorKind::invalid_argument, "schedule tables need at least 2 entries");
                for (std::size_t i = 0; i < r.entries.size(); ++i) {
                    const auto [e, s] = r.entries[i];
                    require(e > 0.0 && e < 1.0 && s > 0.0 && s < 1.0, ErrorKind::invalid_argument,
                        "schedule table entries need eps, s in (0, 1)");
                    if (i > 0)
                        require(e < r.entries[i - 1].first, ErrorKind::invalid_argument,
                            "schedule table eps values must be strictly decreasing");
                }
            }
        },
        rule);
}

} // namespace thinfilm

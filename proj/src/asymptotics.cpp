#include "thinfilm/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "thinfilm/quadrature.hpp"
#include "thinfilm/rng.hpp"
#include "thinfilm/seminorms.hpp"

namespace thinfilm {

Scaling Scaling::from_string(const std::string& text)
{
    std::istringstream in(text);
    std::string head;
    in >> head;
    Scaling sc;
    if (head == "eps2") {
        sc.kind = Kind::eps2;
    } else if (head == "eps_1m2s") {
        sc.kind = Kind::eps_1m2s;
    } else if (head == "lambda") {
        sc.kind = Kind::lambda;
    } else if (head == "none") {
        sc.kind = Kind::none;
    } else if (head == "eps_pow") {
        sc.kind = Kind::eps_pow;
        require(static_cast<bool>(in >> sc.power), ErrorKind::config, "eps_pow needs an exponent");
    } else {
        throw Error(ErrorKind::config, "unknown scaling '" + text + "'");
    }
    std::string rest;
    require(!(in >> rest), ErrorKind::config, "trailing text after scaling '" + text + "'");
    return sc;
}

std::string Scaling::name() const
{
    switch (kind) {
    case Kind::eps2: return "eps2";
    case Kind::eps_1m2s: return "eps_1m2s";
    case Kind::lambda: return "lambda";
    case Kind::none: return "none";
    case Kind::eps_pow: {
        std::ostringstream o;
        o << "eps_pow " << power;
        return o.str();
    }
    }
    return "unknown";
}

double Scaling::divisor(double s, double eps, const RegimeClass& regime) const
{
    switch (kind) {
    case Kind::eps2: return eps * eps;
    case Kind::eps_1m2s: return std::pow(eps, 1.0 - 2.0 * s);
    case Kind::lambda: return lambda_scale(s, eps, regime);
    case Kind::eps_pow: return std::pow(eps, power);
    case Kind::none: return 1.0;
    }
    return 1.0;
}

namespace {

void check_grid(const std::vector<double>& eps)
{
    require(!eps.empty(), ErrorKind::invalid_argument, "empty eps grid");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        require(eps[i] > 0.0 && eps[i] < 1.0, ErrorKind::invalid_argument, "eps values must lie in (0, 1)");
        if (i > 0)
            require(eps[i] < eps[i - 1], ErrorKind::invalid_argument, "eps grid must be strictly decreasing");
    }
}

} // namespace

Classification classify_schedule(const Schedule& sch, const std::vector<double>& eps_grid)
{
    sch.validate();
    check_grid(eps_grid);
    return std::visit(
        [&](const auto& r) -> Classification {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, Schedule::Constant>) {
                return {RegimeClass::zero(), 1};
            } else if constexpr (std::is_same_v<R, Schedule::LogReciprocal>) {
                // eps^{c/|log eps|} = e^{-c} for every eps
                return {RegimeClass::mid(std::exp(-r.c)), 2};
            } else if constexpr (std::is_same_v<R, Schedule::Power>) {
                require(r.alpha < 2.0, ErrorKind::unclassifiable,
                    "s = eps^alpha with alpha >= 2 is not above eps^2/|log eps| in the required sense");
                return {RegimeClass::one(), 3};
            } else {
                std::vector<double> rho;
                for (double e : eps_grid)
                    rho.push_back(std::pow(e, sch.exponent(e)));
                bool up = false;
                bool down = false;
                for (std::size_t i = 1; i < rho.size(); ++i) {
                    const double step = rho[i] - rho[i - 1];
                    up = up || step > 1e-3;
                    down = down || step < -1e-3;
                }
                require(!(up && down), ErrorKind::unclassifiable, "eps^s along the table is not monotone");
                double limit = rho.back();
                if (rho.size() >= 3) {
                    std::vector<std::pair<double, double>> pts;
                    for (std::size_t i = 0; i < rho.size(); ++i)
                        pts.emplace_back(eps_grid[i], rho[i]);
                    limit = std::clamp(extrapolate_limit(pts).limit, 0.0, 1.0);
                }
                const double e = eps_grid.back();
                const double s = sch.exponent(e);
                if (limit <= 0.02)
                    return {RegimeClass::zero(), 1};
                if (limit >= 0.98) {
                    require(s * std::abs(std::log(e)) > e * e, ErrorKind::unclassifiable,
                        "table exponents reach the eps^2/|log eps| threshold");
                    return {RegimeClass::one(), 3};
                }
                return {RegimeClass::mid(limit), 2};
            }
        },
        sch.rule);
}

std::vector<double> dyadic_grid(int k0, int k1)
{
    require(k0 >= 1 && k1 >= k0 && k1 <= 60, ErrorKind::invalid_argument, "dyadic grid needs 1 <= k0 <= k1 <= 60");
    std::vector<double> g;
    for (int k = k0; k <= k1; ++k)
        g.push_back(std::ldexp(1.0, -k));
    return g;
}

std::vector<double> exp2log_grid(int j0, int j1)
{
    // eps >= e^{-512} would underflow; stop at 2^9
    require(j0 >= 0 && j1 >= j0 && j1 <= 9, ErrorKind::invalid_argument, "exp2log grid needs 0 <= j0 <= j1 <= 9");
    std::vector<double> g;
    for (int j = j0; j <= j1; ++j)
        g.push_back(std::exp(-std::ldexp(1.0, j)));
    return g;
}

std::vector<SweepRecord> sweep(const SweepInput& in, const QuadConfig& cfg)
{
    check_grid(in.eps_grid);
    in.schedule.validate();
    const int d = in.unit.d;
    in.field.validate(d);
    RegimeClass regime;
    if (in.scaling.kind == Scaling::Kind::lambda)
        regime = classify_schedule(in.schedule, in.eps_grid).regime;

    std::vector<SweepRecord> out;
    for (std::size_t i = 0; i < in.eps_grid.size(); ++i) {
        const double eps = in.eps_grid[i];
        try {
            const double s = in.schedule.exponent(eps);
            const ThinFilm film = in.unit.film(eps);
            const Field u = rescale_from_unit(in.field, in.unit, eps);
            Method m = in.method.value_or(weight_supports(u, film.box()) ? Method::weight : Method::mc);
            const Estimate e = gagliardo_sq(u, film, s, cfg, m, stream_key(in.seed, i));
            SweepRecord r;
            r.case_id = in.case_id;
            r.d = d;
            r.s = s;
            r.eps = eps;
            r.scaling = in.scaling.divisor(s, eps, regime);
            r.raw = e.value;
            r.scaled = e.value / r.scaling;
            r.error = e.error / r.scaling;
            r.method = e.method;
            out.push_back(r);
        } catch (const Error& err) {
            throw Error(err.kind(), in.case_id + ": " + err.what());
        }
    }
    return out;
}

PowerFit fit_power_law(const std::vector<std::pair<double, double>>& points)
{
    require(points.size() >= 3, ErrorKind::fit, "power-law fit needs at least 3 points");
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& [e, v] : points) {
        require(e > 0.0 && v > 0.0, ErrorKind::fit, "power-law fit needs positive eps and values");
        sx += std::log(e);
        sy += std::log(v);
    }
    const double n = static_cast<double>(points.size());
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& [e, v] : points) {
        const double x = std::log(e) - mx;
        const double y = std::log(v) - my;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    require(sxx > 0.0, ErrorKind::fit, "power-law fit needs distinct eps values");
    PowerFit f;
    f.exponent = sxy / sxx;
    f.prefactor = std::exp(my - f.exponent * mx);
    const double ssres = std::max(0.0, syy - f.exponent * sxy);
    f.r2 = syy > 0.0 ? 1.0 - ssres / syy : 1.0;
    return f;
}

Extrapolation extrapolate_limit(const std::vector<std::pair<double, double>>& points)
{
    require(points.size() >= 3, ErrorKind::fit, "extrapolation needs at least 3 points");
    const std::size_t n = points.size();
    for (std::size_t i = 1; i < n; ++i)
        require(points[i].first < points[i - 1].first, ErrorKind::fit, "extrapolation needs decreasing eps");
    const double x0 = points[n - 3].second;
    const double x1 = points[n - 2].second;
    const double x2 = points[n - 1].second;
    const double d1 = x1 - x0;
    const double d2 = x2 - x1;
    const double den = d2 - d1;
    const double scale = std::max({std::abs(x0), std::abs(x1), std::abs(x2)});
    if (std::abs(den) <= 1e-13 * scale || den == 0.0)
        return {x2, std::abs(d2)};
    const double limit = x2 - d2 * d2 / den;
    return {limit, std::abs(limit - x2)};
}

namespace {

double neville_at_zero(std::vector<std::pair<double, double>> p)
{
    const std::size_t n = p.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = p[i].second;
    for (std::size_t m = 1; m < n; ++m)
        for (std::size_t i = 0; i + m < n; ++i) {
            const double xi = p[i].first;
            const double xj = p[i + m].first;
            require(xi != xj, ErrorKind::fit, "polynomial extrapolation needs distinct abscissae");
            y[i] = (xj * y[i] - xi * y[i + 1]) / (xj - xi);
        }
    return y[0];
}

} // namespace

Extrapolation extrapolate_polynomial(const std::vector<std::pair<double, double>>& points)
{
    require(points.size() >= 2, ErrorKind::fit, "polynomial extrapolation needs at least 2 points");
    auto pts = points;
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return std::abs(a.first) > std::abs(b.first); });
    const double full = neville_at_zero(pts);
    const double lower = neville_at_zero(std::vector(pts.begin() + 1, pts.end()));
    return {full, std::abs(full - lower)};
}

std::string to_string(CaseKind k)
{
    switch (k) {
    case CaseKind::DR: return "DR";
    case CaseKind::VERT: return "VERT";
    case CaseKind::JUMP: return "JUMP";
    case CaseKind::BBM: return "BBM";
    case CaseKind::ZERO: return "ZERO";
    }
    return "unknown";
}

CaseKind case_kind_from_string(const std::string& name)
{
    if (name == "DR")
        return CaseKind::DR;
    if (name == "VERT")
        return CaseKind::VERT;
    if (name == "JUMP")
        return CaseKind::JUMP;
    if (name == "BBM")
        return CaseKind::BBM;
    if (name == "ZERO")
        return CaseKind::ZERO;
    throw Error(ErrorKind::config, "unknown case type '" + name + "'");
}

double default_tolerance(CaseKind k)
{
    switch (k) {
    case CaseKind::DR:
    case CaseKind::VERT:
    case CaseKind::BBM: return 0.05;
    case CaseKind::JUMP: return 0.10;
    case CaseKind::ZERO: return 1e-2;
    }
    return 0.05;
}

namespace {

/// The x'-only field on omega (dimension d - 1) seen by the reduced functionals.
Field omega_field(const Field& v, int d)
{
    Field w = v;
    if (auto* k = std::get_if<SmoothSeparable>(&w.kind)) {
        double c = 1.0;
        if (k->vertical) {
            c = (*k->vertical)(0.0);
            k->vertical.reset();
        }
        if (static_cast<int>(k->horizontal.size()) == d) {
            c *= k->horizontal.back()(0.0);
            k->horizontal.pop_back();
        }
        if (c != 1.0) {
            if (k->horizontal.empty())
                k->horizontal.push_back(SmoothFn::constant(c));
            else
                k->horizontal[0] = k->horizontal[0].scaled_values(c);
        }
    } else if (auto* g = std::get_if<GridSample>(&w.kind); g != nullptr && g->box.dim == d) {
        // bottom layer t = 0
        GridSample r;
        r.box.dim = d - 1;
        for (int a = 0; a < d - 1; ++a) {
            r.box.lo[a] = g->box.lo[a];
            r.box.hi[a] = g->box.hi[a];
            r.shape[a] = g->shape[a];
        }
        std::size_t count = 1;
        for (int a = 0; a < d - 1; ++a)
            count *= static_cast<std::size_t>(g->shape[a]);
        for (std::size_t i = 0; i < count; ++i)
            r.values.push_back(g->values[i * static_cast<std::size_t>(g->shape[d - 1])]);
        w.kind = std::move(r);
    }
    return w;
}

double constant_exponent(const Schedule& sch, const char* what)
{
    const auto* c = std::get_if<Schedule::Constant>(&sch.rule);
    require(c != nullptr, ErrorKind::invalid_argument, std::string(what) + " needs a constant schedule");
    return c->s0;
}

/// Last two increments grow in the same direction: the sequence runs away.
bool runs_away(const std::vector<SweepRecord>& r)
{
    if (r.size() < 3)
        return false;
    const std::size_t n = r.size();
    const double d1 = r[n - 2].scaled - r[n - 3].scaled;
    const double d2 = r[n - 1].scaled - r[n - 2].scaled;
    return d1 != 0.0 && d1 * d2 > 0.0 && std::abs(d2) >= std::abs(d1);
}

std::vector<std::pair<double, double>> scaled_points(const std::vector<SweepRecord>& r)
{
    std::vector<std::pair<double, double>> p;
    for (const auto& x : r)
        p.emplace_back(x.eps, x.scaled);
    return p;
}

void judge(Verdict& v, double reference)
{
    if (!v.predicted || !v.extrapolated) {
        v.pass = !v.predicted && !v.extrapolated;
        if (v.pass)
            v.reason = "predicted and observed divergent";
        else
            v.reason = v.predicted ? "observed divergence, finite prediction" : "finite observation, divergent prediction";
        v.rel_err = v.pass ? 0.0 : INFINITY;
        return;
    }
    const double p = *v.predicted;
    const double x = *v.extrapolated;
    if (p != 0.0)
        v.rel_err = std::abs(x - p) / std::abs(p);
    else
        v.rel_err = reference != 0.0 ? std::abs(x) / std::abs(reference) : std::abs(x);
    v.pass = v.rel_err <= v.tolerance;
    v.reason = v.pass ? "within tolerance" : "outside tolerance";
}

} // namespace

VerifyResult verify_gamma_limit(const VerifyInput& in, const QuadConfig& cfg)
{
    VerifyResult res;
    Verdict& v = res.verdict;
    v.case_id = in.sweep.case_id;
    v.tolerance = in.tolerance;
    const int d = in.sweep.unit.d;
    const Box& omega = in.sweep.unit.omega;

    try {
        if (in.kind == CaseKind::BBM) {
            require(!in.s_values.empty(), ErrorKind::invalid_argument, "BBM needs s_values");
            const Field u = omega_field(in.sweep.field, d);
            std::vector<std::pair<double, double>> pts;
            bool divergent = false;
            for (double s : in.s_values) {
                require(s > 0.0 && s < 0.5, ErrorKind::invalid_argument, "BBM s values must lie in (0, 1/2)");
                const Outcome o = reduced_seminorm_sq(u, omega, s + 0.5, cfg);
                if (is_divergent(o)) {
                    divergent = true;
                    continue;
                }
                const auto& e = std::get<Estimate>(o);
                SweepRecord r;
                r.case_id = v.case_id;
                r.d = d;
                r.s = s + 0.5;
                r.eps = 0.0;
                r.scaling = 1.0 / (0.5 - s);
                r.raw = e.value;
                r.scaled = e.value / r.scaling;
                r.error = e.error / r.scaling;
                r.method = e.method;
                res.records.push_back(r);
                pts.emplace_back(0.5 - s, r.scaled);
            }
            if (u.is_pwc() && !jump_set(u).empty()) {
                v.predicted.reset();
            } else {
                v.predicted = bbm_coefficient(d - 1) * dirichlet_energy(u, omega, cfg).value;
            }
            if (!divergent) {
                const auto x = pts.size() >= 2 ? extrapolate_polynomial(pts) : Extrapolation{pts.back().second, 0.0};
                v.extrapolated = x.limit;
                v.uncertainty = x.uncertainty;
            }
            judge(v, 0.0);
            return res;
        }

        SweepInput sw = in.sweep;
        switch (in.kind) {
        case CaseKind::DR: {
            const double s0 = constant_exponent(sw.schedule, "DR");
            if (in.sweep.field.depends_on(d - 1, d)) {
                v.predicted.reset();
            } else {
                const Outcome o = reduced_seminorm_sq(omega_field(sw.field, d), omega, s0 + 0.5, cfg);
                if (!is_divergent(o))
                    v.predicted = std::get<Estimate>(o).value;
            }
            break;
        }
        case CaseKind::VERT: {
            const double s0 = constant_exponent(sw.schedule, "VERT");
            v.predicted = vertical_limit_energy(sw.field, sw.unit, s0, cfg).value;
            break;
        }
        case CaseKind::JUMP: {
            require(sw.field.is_pwc() && d == 2, ErrorKind::invalid_argument,
                "JUMP needs a piecewise-constant field in d = 2");
            const auto cls = classify_schedule(sw.schedule, sw.eps_grid);
            double h2 = 0.0;
            for (const auto& j : jump_set(sw.field))
                h2 += j.height * j.height;
            v.predicted = jump_limit_coefficient(cls.regime) * h2;
            break;
        }
        case CaseKind::ZERO:
            v.predicted = 0.0;
            break;
        case CaseKind::BBM:
            break;
        }
        res.records = sweep(sw, cfg);
        const auto pts = scaled_points(res.records);
        if (runs_away(res.records)) {
            v.extrapolated.reset();
        } else {
            const auto x = pts.size() >= 3 ? extrapolate_limit(pts) : Extrapolation{pts.back().second, 0.0};
            v.extrapolated = x.limit;
            v.uncertainty = x.uncertainty;
        }
        judge(v, res.records.front().scaled);
    } catch (const Error& err) {
        const std::string msg = err.what();
        if (msg.rfind(v.case_id + ":", 0) == 0)
            throw;
        throw Error(err.kind(), v.case_id + ": " + msg);
    }
    return res;
}

} // namespace thinfilm

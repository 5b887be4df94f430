// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
// Usage: acceptance <path/to/acceptance.cfg>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "thinfilm/asymptotics.hpp"
#include "thinfilm/cli.hpp"
#include "thinfilm/config.hpp"
#include "thinfilm/constants.hpp"
#include "thinfilm/error.hpp"
#include "thinfilm/quadrature.hpp"
#include "thinfilm/seminorms.hpp"

using namespace thinfilm;

namespace {

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail)
{
    failures += pass ? 0 : 1;
    std::printf("criterion %2d %s  %s: %s\n", id, pass ? "PASS" : "FAIL", title.c_str(), detail.c_str());
    std::fflush(stdout);
}

void guarded(int id, const std::string& title, const std::function<void()>& body)
{
    try {
        body();
    } catch (const std::exception& e) {
        report(id, title, false, std::string("exception: ") + e.what());
    }
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// ---- criterion 1

void constants_identity()
{
    double worst_c = 0.0;
    for (int d : {2, 3})
        for (double s : {0.05, 0.15, 0.25, 0.35, 0.45})
            worst_c = std::max(worst_c, rel(c_const_quadrature(s, d), c_const_closed_form(s, d)));
    double worst_k = 0.0;
    for (int d : {2, 3})
        for (double s : {0.05, 0.15, 0.25, 0.35, 0.45})
            for (double a : {0.01, 0.1, 1.0}) {
                const Estimate t = truncated_kernel_integral(a, s, d, 1e4);
                worst_k = std::max(worst_k, rel(t.value, c_const(s, d).value * std::pow(a, -(1.0 + 2.0 * s))));
            }
    report(1, "constant identity", worst_c < 1e-8 && worst_k < 1e-6,
        fmt("max rel err C_{s,d} %.2e (< 1e-8), kernel identity %.2e (< 1e-6)", worst_c, worst_k));
}

// ---- criteria 2-7

void limit_case(int id, const std::string& title, const RunConfig& cfg, const std::string& name, double target)
{
    const CaseSpec* c = cfg.find_case(name);
    require(c != nullptr, ErrorKind::config, "case " + name + " missing from " + cfg.source);
    const auto r = verify_gamma_limit(make_verify_input(cfg, *c), cfg.quad);
    const Verdict& v = r.verdict;
    const bool target_ok = v.predicted && rel(*v.predicted, target) < 1e-6;
    std::string detail = fmt("%s predicted %.6g (expected %.6g), extrapolated ", name.c_str(),
        v.predicted ? *v.predicted : NAN, target);
    detail += v.extrapolated ? fmt("%.6g +- %.2g", *v.extrapolated, v.uncertainty) : std::string("Divergent");
    detail += fmt(", rel err %.4f (tol %.2f)", v.rel_err, v.tolerance);
    report(id, title, v.pass && target_ok, detail);
}

// ---- corpora

const UnitFilm unit2(2, Box::interval(0.0, 1.0));

SmoothFn random_smooth(std::mt19937_64& rng, double max_freq)
{
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> freq(0.5, max_freq);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    SmoothFn f = SmoothFn::polynomial({coef(rng), coef(rng), 0.5 * coef(rng)});
    f.cosines.push_back({coef(rng), freq(rng), phase(rng)});
    return f;
}

// Fields on omega x (0, 1) with genuine dependence on t.
std::vector<Field> slicing_corpus(std::uint64_t seed, int count)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<Field> out;
    for (int i = 0; i < count; ++i) {
        switch (i % 5) {
        case 0:
            out.push_back(Field::smooth({random_smooth(rng, 4.0)}, random_smooth(rng, 6.0)));
            break;
        case 1:
            out.push_back(Field::smooth({SmoothFn::constant(1.0)}, random_smooth(rng, 8.0)));
            break;
        case 2: {
            SmoothFn h = SmoothFn::cosine(1.0, std::numbers::pi * (1 + i % 3));
            h.poly = {1.5};
            out.push_back(Field::smooth({h}, SmoothFn::polynomial({val(rng), val(rng), val(rng)})));
            break;
        }
        case 3: {
            std::vector<double> v(25);
            for (double& x : v)
                x = val(rng);
            out.push_back(Field::grid(unit2.box(), {5, 5, 1}, v));
            break;
        }
        default:
            out.push_back(Field::smooth({random_smooth(rng, 2.0)}, SmoothFn::cosine(1.0, 10.0 + 4.0 * val(rng))));
            break;
        }
    }
    return out;
}

struct SlicingRatios {
    std::vector<double> ratio;
    std::vector<double> poincare[3];
};

const double slice_s[3] = {0.1, 0.25, 0.4};

SlicingRatios slicing_ratios(const std::vector<Field>& corpus, const QuadConfig& cfg, std::uint64_t seed)
{
    SlicingRatios out;
    std::uint64_t n = 0;
    for (const Field& v : corpus) {
        const double dev = vertical_mean_deviation(v, unit2, cfg).value;
        for (int is = 0; is < 3; ++is) {
            const double s = slice_s[is];
            const double lhs = sliced_vertical_seminorm_sq(v, unit2, s, cfg).value;
            out.poincare[is].push_back(dev / lhs);
            for (int k = 3; k <= 6; ++k) {
                const double eps = std::ldexp(1.0, -k);
                const ThinFilm film = unit2.film(eps);
                const Field u = rescale_from_unit(v, unit2, eps);
                const Method m = weight_supports(u, film.box()) ? Method::weight : Method::mc;
                const Estimate g = gagliardo_sq(u, film, s, cfg, m, seed + n++);
                out.ratio.push_back(lhs / (std::pow(eps, 2.0 * s - 1.0) * g.value));
            }
        }
    }
    return out;
}

// ---- criterion 8

void slicing(const QuadConfig& cfg)
{
    const auto calib = slicing_ratios(slicing_corpus(101, 20), cfg, 1000);
    const auto test = slicing_ratios(slicing_corpus(202, 20), cfg, 5000);
    const double C = 10.0 * *std::max_element(calib.ratio.begin(), calib.ratio.end());
    const auto violations = std::count_if(test.ratio.begin(), test.ratio.end(), [&](double r) { return !(r <= C); });
    const double worst = *std::max_element(test.ratio.begin(), test.ratio.end());
    report(8, "slicing inequality", violations == 0,
        fmt("C = %.4g (10x calibration max), test max ratio %.4g, %d/%zu violations", C, worst,
            static_cast<int>(violations), test.ratio.size()));
}

// ---- criterion 9

struct Sample {
    std::string name;
    Field u;
    Box box;
    int d;
};

std::vector<Sample> property_corpus()
{
    const double pi = std::numbers::pi;
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<double> g(16);
    for (double& x : g)
        x = val(rng);
    const Box sq = Box::make(std::vector{0.0, 0.0}, std::vector{1.0, 1.0});

    struct Proto {
        std::string name;
        Field u;
    };
    const std::vector<Proto> protos{
        {"x1", Field::smooth({SmoothFn::polynomial({0.0, 1.0})})},
        {"cos", Field::smooth({SmoothFn::cosine(1.0, pi)})},
        {"jump", Field::pwc({0.5}, {0.0, 1.0})},
        {"steps", Field::pwc({0.3, 0.7}, {0.0, 2.0, 1.0})},
        {"t", Field::smooth({SmoothFn::constant(1.0)}, SmoothFn::polynomial({0.0, 1.0}))},
        {"mixed", Field::smooth({SmoothFn::cosine(1.0, pi)}, SmoothFn::polynomial({1.0, 1.0}))},
        {"grid", Field::grid(sq, {4, 4, 1}, g)},
        {"flat", Field::smooth({SmoothFn::constant(2.0)})},
    };
    std::vector<Sample> out;
    for (double eps : {0.5, 0.25}) {
        for (const auto& p : protos) {
            const Field u = rescale_from_unit(p.u, unit2, eps);
            out.push_back({p.name + fmt("@%g", eps), u, unit2.film(eps).box(), 2});
        }
    }
    const UnitFilm unit3(3, sq);
    const double eps3 = 0.5;
    out.push_back({"x1_d3", rescale_from_unit(Field::smooth({SmoothFn::polynomial({0.0, 1.0}), SmoothFn::constant(1.0)}), unit3, eps3),
        unit3.film(eps3).box(), 3});
    out.push_back({"mixed_d3",
        rescale_from_unit(Field::smooth({SmoothFn::cosine(1.0, pi), SmoothFn::polynomial({0.0, 1.0})}, SmoothFn::polynomial({1.0, 0.5})),
            unit3, eps3),
        unit3.film(eps3).box(), 3});
    return out;
}

void property_suite(const QuadConfig& base)
{
    QuadConfig cfg = base;
    std::vector<std::string> bad;
    int checks = 0;
    auto expect = [&](bool ok, const std::string& what) {
        ++checks;
        if (!ok)
            bad.push_back(what);
    };

    for (const Sample& smp : property_corpus()) {
        const double s = 0.25;
        cfg.nodes_per_axis = smp.d == 2 ? 32 : 12;
        std::vector<Method> methods{Method::mc, Method::grid};
        if (weight_supports(smp.u, smp.box))
            methods.push_back(Method::weight);
        std::vector<Estimate> est;
        for (Method m : methods)
            est.push_back(gagliardo_sq(smp.u, smp.box, s, cfg, m, 77));

        for (std::size_t i = 0; i < est.size(); ++i) {
            const std::string tag = smp.name + "/" + std::string(to_string(methods[i]));
            expect(est[i].value >= 0.0 && est[i].error >= 0.0, "nonnegativity " + tag);
            for (std::size_t j = i + 1; j < est.size(); ++j)
                expect(std::abs(est[i].value - est[j].value) <= 3.0 * (est[i].error + est[j].error),
                    fmt("cross-engine %s vs %s: %.6g vs %.6g", tag.c_str(), std::string(to_string(methods[j])).c_str(),
                        est[i].value, est[j].value));

            const Method m = methods[i];
            const double tol_exact = 1e-12 * std::max(1.0, est[i].value);
            const Estimate scaled = gagliardo_sq(scale_values(smp.u, 3.0), smp.box, s, cfg, m, 77);
            expect(std::abs(scaled.value - 9.0 * est[i].value) <= 9.0 * tol_exact, "homogeneity " + tag);

            const Point shift{0.375, -1.25, 2.5};
            const Estimate moved = gagliardo_sq(translate(smp.u, smp.d, shift), translate(smp.box, shift), s, cfg, m, 77);
            expect(std::abs(moved.value - est[i].value) <= 1e-9 * std::max(1.0, est[i].value), "translation " + tag);

            if (m != Method::mc) {
                const double lam = 2.0;
                const Estimate big = gagliardo_sq(dilate(smp.u, smp.d, lam), dilate(smp.box, lam), s, cfg, m, 77);
                const double want = std::pow(lam, smp.d - 2.0 * s) * est[i].value;
                expect(std::abs(big.value - want) <= cfg.rel_tol * std::max(want, 1e-12), "scaling law " + tag);
            }
        }
    }

    // Divergent for piecewise-constant fields at sigma >= 1/2
    const Box omega = Box::interval(0.0, 1.0);
    for (const Field& j : {Field::pwc({0.5}, {0.0, 1.0}), Field::pwc({0.3, 0.7}, {0.0, 2.0, 1.0})}) {
        for (double sigma : {0.5, 0.6, 0.75, 0.9})
            expect(is_divergent(reduced_seminorm_sq(j, omega, sigma, cfg)), fmt("Divergent at sigma %.2f", sigma));
        expect(!is_divergent(reduced_seminorm_sq(j, omega, 0.4, cfg)), "finite at sigma 0.4");
        for (Method m : {Method::mc, Method::grid, Method::weight}) {
            bool diverged = false;
            try {
                gagliardo_sq(j, unit2.film(0.25), 0.5, cfg, m, 1);
            } catch (const Error& e) {
                diverged = e.kind() == ErrorKind::divergent_integral;
            }
            expect(diverged, "divergent-integral error at s = 1/2");
        }
    }
    expect(!is_divergent(reduced_seminorm_sq(Field::smooth({SmoothFn::cosine(1.0, std::numbers::pi)}), omega, 0.75, cfg)),
        "smooth field finite at sigma 0.75");

    // Poincare-type control, calibrated per s on the slicing calibration corpus
    const auto calib = slicing_corpus(101, 20);
    const auto test = slicing_corpus(202, 20);
    for (double s : slice_s) {
        double cmax = 0.0;
        for (const Field& v : calib)
            cmax = std::max(cmax, vertical_mean_deviation(v, unit2, cfg).value / sliced_vertical_seminorm_sq(v, unit2, s, cfg).value);
        for (const Field& v : test)
            expect(vertical_mean_deviation(v, unit2, cfg).value / sliced_vertical_seminorm_sq(v, unit2, s, cfg).value <= 10.0 * cmax,
                fmt("Poincare control at s = %.2f", s));
    }

    std::string detail = fmt("%d checks, %zu failed", checks, bad.size());
    for (std::size_t i = 0; i < std::min<std::size_t>(bad.size(), 5); ++i)
        detail += "; " + bad[i];
    report(9, "property suite", bad.empty(), detail);
}

// ---- criterion 10

std::string cli_csv(const std::string& config, const std::string& workers)
{
    const char* argv[] = {"thinfilm", "report", "--config", config.c_str(), "--workers", workers.c_str(), "--format", "csv"};
    std::ostringstream out, err;
    run_cli(8, argv, out, err);
    return out.str();
}

void determinism(const std::string& config)
{
    const std::string a = cli_csv(config, "1");
    const std::string b = cli_csv(config, "1");
    const std::string c = cli_csv(config, "4");
    const std::size_t rows = std::count(a.begin(), a.end(), '\n');
    const bool has_mc = a.find(",mc\n") != std::string::npos;
    report(10, "determinism", rows > 1 && has_mc && a == b && a == c,
        fmt("%zu CSV lines (%s mc rows); repeat run %s, workers 1 vs 4 %s", rows, has_mc ? "with" : "without",
            a == b ? "identical" : "DIFFERENT", a == c ? "identical" : "DIFFERENT"));
}

} // namespace

int main(int argc, char** argv)
{
    const std::string config = argc > 1 ? argv[1] : "configs/acceptance.cfg";
    RunConfig cfg;
    try {
        cfg = load_config(config);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "cannot load %s: %s\n", config.c_str(), e.what());
        return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();

    guarded(1, "constant identity", constants_identity);
    guarded(2, "dimension reduction", [&] {
        const Outcome red = reduced_seminorm_sq(Field::smooth({SmoothFn::cosine(1.0, std::numbers::pi)}),
            Box::interval(0.0, 1.0), 0.75, cfg.quad);
        limit_case(2, "dimension reduction", cfg, "DR_cos", std::get<Estimate>(red).value);
    });
    guarded(3, "vertical limit", [&] {
        const double s = 0.25;
        limit_case(3, "vertical limit", cfg, "VERT_t", c_const_closed_form(s, 2) * 2.0 / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s)));
    });
    guarded(4, "jump energy, constant s", [&] { limit_case(4, "jump energy, constant s", cfg, "JUMP_i", 1.0); });
    guarded(5, "jump energy, s = 1/|log eps|", [&] {
        limit_case(5, "jump energy, s = 1/|log eps|", cfg, "JUMP_ii", std::exp(2.0) - 1.0);
    });
    guarded(6, "jump energy, s = eps", [&] { limit_case(6, "jump energy, s = eps", cfg, "JUMP_iii", 2.0); });
    guarded(7, "BBM coefficient", [&] {
        limit_case(7, "BBM coefficient", cfg, "BBM_cos", std::numbers::pi * std::numbers::pi / 2.0);
    });
    guarded(8, "slicing inequality", [&] { slicing(cfg.quad); });
    guarded(9, "property suite", [&] { property_suite(cfg.quad); });
    guarded(10, "determinism", [&] { determinism(config); });

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d of 10 criteria failed (%.1f s)\n", failures, secs);
    return failures == 0 ? 0 : 1;
}

#include "thinfilm/cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "thinfilm/asymptotics.hpp"
#include "thinfilm/config.hpp"
#include "thinfilm/constants.hpp"
#include "thinfilm/quadrature.hpp"
#include "thinfilm/report.hpp"
#include "thinfilm/rng.hpp"

namespace thinfilm {

namespace {

struct Options {
    std::string config;
    std::vector<std::string> cases;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::optional<int> workers;
    std::string out;
    std::string format = "csv";
    std::vector<double> s_list;
    std::vector<int> d_list;
};

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_common(CLI::App* sub, Options& o, bool needs_config)
{
    auto* c = sub->add_option("--config", o.config, "case definitions");
    if (needs_config)
        c->required();
    sub->add_option("--case", o.cases, "case to run (repeatable); default: every case of the subcommand's kind");
    sub->add_option("--seed", o.seed, "master seed, overrides the config");
    sub->add_option("--samples", o.samples, "Monte Carlo samples per estimate");
    sub->add_option("--workers", o.workers, "worker threads (results do not depend on it)");
    sub->add_option("--out", o.out, "output path, '-' for stdout");
    sub->add_option("--format", o.format, "csv, json or dat")->check(CLI::IsMember({"csv", "json", "dat"}));
}

int run_constants(const Options& o, std::ostream& out)
{
    std::vector<double> ss = o.s_list;
    if (ss.empty())
        ss = {0.05, 0.15, 0.25, 0.35, 0.45};
    std::vector<int> ds = o.d_list;
    if (ds.empty())
        ds = {2, 3};
    struct Row {
        std::string name;
        std::string args;
        double value;
    };
    std::vector<Row> rows;
    for (int d : ds) {
        for (double s : ss) {
            const std::string args = "s=" + format_double(s) + ";d=" + std::to_string(d);
            rows.push_back({"c_const", args, c_const(s, d).value});
            rows.push_back({"c_const_quadrature", args, c_const_quadrature(s, d)});
        }
    }
    for (double s : ss)
        rows.push_back({"phi_fn", "s=" + format_double(s) + ";tau=1", phi_fn(s, 1.0)});
    for (int n = 0; n <= 3; ++n)
        rows.push_back({"sphere_measure", "n=" + std::to_string(n), sphere_measure(n)});
    for (int n = 1; n <= 2; ++n)
        rows.push_back({"bbm_coefficient", "n=" + std::to_string(n), bbm_coefficient(n)});
    rows.push_back({"jump_limit_coefficient", "rho_zero", jump_limit_coefficient(RegimeClass::zero())});
    rows.push_back({"jump_limit_coefficient", "rho_mid=exp(-1)", jump_limit_coefficient(RegimeClass::mid(std::exp(-1.0)))});
    rows.push_back({"jump_limit_coefficient", "rho_one", jump_limit_coefficient(RegimeClass::one())});

    std::ostringstream buf;
    if (o.format == "csv") {
        buf << "name,args,value\n";
        for (const auto& r : rows)
            buf << r.name << ',' << r.args << ',' << format_double(r.value) << '\n';
    } else if (o.format == "json") {
        nlohmann::json doc;
        doc["meta"] = {{"seed", o.seed.value_or(0)}, {"version", version}, {"timestamp", utc_timestamp()}};
        doc["results"] = nlohmann::json::array();
        for (const auto& r : rows)
            doc["results"].push_back({{"name", r.name}, {"args", r.args}, {"value", r.value}});
        buf << doc.dump(2) << '\n';
    } else {
        throw Usage("constants supports csv and json only");
    }
    if (o.out.empty() || o.out == "-") {
        out << buf.str();
    } else {
        std::ofstream f(o.out, std::ios::binary);
        require(static_cast<bool>(f), ErrorKind::io, "cannot write '" + o.out + "'");
        f << buf.str();
    }
    return 0;
}

std::vector<SweepRecord> run_seminorm_case(const RunConfig& cfg, const CaseSpec& c)
{
    const Field& field = cfg.fields.at(c.field);
    const UnitFilm unit(c.d, c.omega);
    const std::uint64_t seed = c.seed.value_or(cfg.seed);
    std::vector<SweepRecord> out;
    for (std::size_t i = 0; i < c.eps.size(); ++i) {
        const double eps = c.eps[i];
        const double s = c.s ? *c.s : cfg.schedules.at(c.schedule).exponent(eps);
        const ThinFilm film = unit.film(eps);
        const Field u = rescale_from_unit(field, unit, eps);
        const Method m = c.method.value_or(weight_supports(u, film.box()) ? Method::weight : Method::mc);
        const Estimate e = gagliardo_sq(u, film, s, cfg.quad, m, stream_key(seed, i));
        out.push_back(SweepRecord{c.name, c.d, s, eps, 1.0, e.value, e.value, e.error, e.method});
    }
    return out;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Fractional seminorms on thin films: quadrature, sweeps and limit checks", "thinfilm"};
    app.require_subcommand(1, 1);
    Options o;
    auto* constants = app.add_subcommand("constants", "print kernel constants and scalings");
    add_common(constants, o, false);
    constants->add_option("--s", o.s_list, "exponents for C_{s,d} and phi");
    constants->add_option("--d", o.d_list, "dimensions for C_{s,d}");
    auto* seminorm = app.add_subcommand("seminorm", "evaluate SEMINORM cases");
    auto* sweep_cmd = app.add_subcommand("sweep", "run eps sweeps and emit records");
    auto* verify = app.add_subcommand("verify", "run limit checks and emit verdicts");
    auto* report = app.add_subcommand("report", "run every selected case and write one combined report");
    for (auto* sub : {seminorm, sweep_cmd, verify, report})
        add_common(sub, o, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (constants->parsed())
            return run_constants(o, out);

        RunConfig cfg;
        try {
            cfg = load_config(o.config);
        } catch (const Error& e) {
            err << "config error: " << e.what() << '\n';
            return 2;
        }
        if (o.seed)
            cfg.seed = *o.seed;
        if (o.samples)
            cfg.quad.samples = *o.samples;
        if (o.workers)
            cfg.quad.workers = *o.workers;
        const Format format = format_from_string(o.format);

        auto accepts = [&](const CaseSpec& c) {
            if (seminorm->parsed())
                return c.type == "SEMINORM";
            if (verify->parsed())
                return c.is_verdict();
            if (sweep_cmd->parsed())
                return c.type != "SEMINORM";
            return true;
        };
        std::vector<const CaseSpec*> selected;
        if (o.cases.empty()) {
            for (const auto& c : cfg.cases)
                if (accepts(c))
                    selected.push_back(&c);
        } else {
            for (const auto& name : o.cases) {
                const CaseSpec* c = cfg.find_case(name);
                if (c == nullptr)
                    throw Usage("no case named '" + name + "' in " + o.config);
                if (!accepts(*c))
                    throw Usage("case '" + name + "' has type " + c->type + ", which this subcommand does not run");
                selected.push_back(c);
            }
        }

        std::vector<SweepRecord> records;
        std::vector<Verdict> verdicts;
        const bool want_verdicts = verify->parsed() || report->parsed();
        for (const CaseSpec* c : selected) {
            try {
                if (c->type == "SEMINORM") {
                    const auto r = run_seminorm_case(cfg, *c);
                    records.insert(records.end(), r.begin(), r.end());
                } else if (c->type == "SWEEP") {
                    const auto r = sweep(make_verify_input(cfg, *c).sweep, cfg.quad);
                    records.insert(records.end(), r.begin(), r.end());
                } else {
                    auto res = verify_gamma_limit(make_verify_input(cfg, *c), cfg.quad);
                    records.insert(records.end(), res.records.begin(), res.records.end());
                    if (want_verdicts)
                        verdicts.push_back(std::move(res.verdict));
                }
            } catch (const Error& e) {
                const std::string msg = e.what();
                err << "error in case " << c->name << ": "
                    << (msg.rfind(c->name + ":", 0) == 0 ? msg.substr(c->name.size() + 2) : msg) << '\n';
                return 1;
            }
        }

        bool all_pass = true;
        for (const auto& v : verdicts) {
            all_pass = all_pass && v.pass;
            err << (v.pass ? "PASS " : "FAIL ") << v.case_id
                << " predicted=" << (v.predicted ? format_double(*v.predicted) : "Divergent")
                << " extrapolated=" << (v.extrapolated ? format_double(*v.extrapolated) : "Divergent")
                << " rel_err=" << format_double(v.rel_err) << " tolerance=" << format_double(v.tolerance) << '\n';
        }
        const ReportMeta meta{cfg.seed, version, utc_timestamp()};
        write_report(records, verdicts, format, o.out, meta, out);
        return all_pass ? 0 : 1;
    } catch (const Usage& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::config || e.kind() == ErrorKind::invalid_argument ? 2 : 1;
    }
}

} // namespace thinfilm

#include "thinfilm/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace thinfilm {

bool CaseSpec::is_verdict() const
{
    return type == "DR" || type == "VERT" || type == "JUMP" || type == "BBM" || type == "ZERO";
}

const CaseSpec* RunConfig::find_case(const std::string& name) const
{
    for (const auto& c : cases)
        if (c.name == name)
            return &c;
    return nullptr;
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w)
        out.push_back(w);
    return out;
}

double plain_number(const std::string& t)
{
    if (t == "pi")
        return std::numbers::pi;
    double v = 0.0;
    const char* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw Error(ErrorKind::config, "not a number: '" + t + "'");
    return v;
}

class Parser {
public:
    Parser(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(int line, const std::string& msg) const
    {
        throw Error(ErrorKind::config, source_ + ":" + std::to_string(line) + ": " + msg);
    }

    RunConfig run(std::istream& in)
    {
        cfg_.source = source_;
        std::string raw;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            std::string text = raw;
            for (std::size_t i = 0; i < text.size(); ++i) {
                if ((text[i] == '#' || text[i] == ';') && (i == 0 || std::isspace(static_cast<unsigned char>(text[i - 1])))) {
                    text.resize(i);
                    break;
                }
            }
            text = trim(text);
            if (text.empty())
                continue;
            try {
                if (text.front() == '[') {
                    finish();
                    open(text, line);
                } else {
                    const auto eq = text.find('=');
                    if (eq == std::string::npos)
                        fail(line, "expected 'key = value'");
                    const std::string key = trim(text.substr(0, eq));
                    const std::string value = trim(text.substr(eq + 1));
                    if (key.empty())
                        fail(line, "empty key");
                    if (kind_.empty())
                        fail(line, "key '" + key + "' outside any section");
                    if (!seen_.insert(key).second)
                        fail(line, "duplicate key '" + key + "'");
                    keys_.push_back({key, value, line});
                }
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::config && std::string(e.what()).rfind(source_ + ":", 0) == 0)
                    throw;
                fail(line, e.what());
            }
        }
        finish();
        resolve();
        return std::move(cfg_);
    }

private:
    struct Entry {
        std::string key;
        std::string value;
        int line;
    };

    void open(const std::string& text, int line)
    {
        if (text.back() != ']')
            fail(line, "unterminated section header");
        const auto parts = words(text.substr(1, text.size() - 2));
        if (parts.empty())
            fail(line, "empty section header");
        kind_ = parts[0];
        section_line_ = line;
        if (kind_ == "global") {
            if (parts.size() != 1)
                fail(line, "[global] takes no name");
            if (global_seen_)
                fail(line, "[global] defined twice");
            global_seen_ = true;
            name_.clear();
            return;
        }
        if (kind_ != "field" && kind_ != "schedule" && kind_ != "case")
            fail(line, "unknown section kind '" + kind_ + "'");
        if (parts.size() != 2)
            fail(line, "[" + kind_ + " NAME] needs exactly one name");
        name_ = parts[1];
        if (!names_[kind_].insert(name_).second)
            fail(line, kind_ + " '" + name_ + "' defined twice");
    }

    void finish()
    {
        if (kind_.empty())
            return;
        if (kind_ == "global")
            build_global();
        else if (kind_ == "field")
            build_field();
        else if (kind_ == "schedule")
            build_schedule();
        else
            build_case();
        keys_.clear();
        seen_.clear();
        kind_.clear();
    }

    template <class F>
    void each(F&& f)
    {
        for (const auto& e : keys_) {
            try {
                f(e);
            } catch (const Error& err) {
                if (std::string(err.what()).rfind(source_ + ":", 0) == 0)
                    throw;
                fail(e.line, "'" + e.key + "': " + err.what());
            }
        }
    }

    static std::vector<double> numbers(const std::string& v)
    {
        std::vector<double> out;
        for (const auto& w : words(v))
            out.push_back(parse_number(w));
        return out;
    }

    static double number(const std::string& v)
    {
        const auto n = numbers(v);
        require(n.size() == 1, ErrorKind::config, "expected one number");
        return n[0];
    }

    static std::uint64_t unsigned_int(const std::string& v)
    {
        const std::string t = trim(v);
        std::uint64_t x = 0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
        require(ec == std::errc() && ptr == t.data() + t.size(), ErrorKind::config, "expected a non-negative integer");
        return x;
    }

    static int integer(const std::string& v)
    {
        const auto x = unsigned_int(v);
        require(x <= 1'000'000'000ULL, ErrorKind::config, "integer out of range");
        return static_cast<int>(x);
    }

    static Box box_from(const std::vector<double>& c)
    {
        require(!c.empty() && c.size() % 2 == 0 && c.size() <= 2 * max_dim, ErrorKind::config,
            "a box is given as lo hi pairs, one per axis");
        std::vector<double> lo;
        std::vector<double> hi;
        for (std::size_t i = 0; i < c.size(); i += 2) {
            lo.push_back(c[i]);
            hi.push_back(c[i + 1]);
        }
        Box b = Box::make(lo, hi);
        b.validate();
        return b;
    }

    /// "cos A F [P] + poly c0 c1 + const c"
    static SmoothFn smooth_fn(const std::string& v)
    {
        SmoothFn f;
        std::vector<std::string> terms;
        std::string cur;
        for (const auto& w : words(v)) {
            if (w == "+") {
                terms.push_back(cur);
                cur.clear();
            } else {
                cur += (cur.empty() ? "" : " ") + w;
            }
        }
        terms.push_back(cur);
        for (const auto& t : terms) {
            auto w = words(t);
            require(!w.empty(), ErrorKind::config, "empty term in smooth function");
            const std::string head = w[0];
            std::vector<double> args;
            for (std::size_t i = 1; i < w.size(); ++i)
                args.push_back(parse_number(w[i]));
            if (head == "cos") {
                require(args.size() == 2 || args.size() == 3, ErrorKind::config, "cos takes amp freq [phase]");
                f.cosines.push_back({args[0], args[1], args.size() == 3 ? args[2] : 0.0});
            } else if (head == "poly") {
                require(!args.empty(), ErrorKind::config, "poly needs coefficients");
                if (f.poly.size() < args.size())
                    f.poly.resize(args.size(), 0.0);
                for (std::size_t i = 0; i < args.size(); ++i)
                    f.poly[i] += args[i];
            } else if (head == "const") {
                require(args.size() == 1, ErrorKind::config, "const takes one value");
                if (f.poly.empty())
                    f.poly.push_back(0.0);
                f.poly[0] += args[0];
            } else {
                throw Error(ErrorKind::config, "unknown term '" + head + "' (cos, poly, const)");
            }
        }
        return f;
    }

    void build_global()
    {
        each([&](const Entry& e) {
            if (e.key == "seed")
                cfg_.seed = unsigned_int(e.value);
            else if (e.key == "samples")
                cfg_.quad.samples = unsigned_int(e.value);
            else if (e.key == "shells")
                cfg_.quad.shells = integer(e.value);
            else if (e.key == "nodes")
                cfg_.quad.nodes_per_axis = integer(e.value);
            else if (e.key == "rel_tol")
                cfg_.quad.rel_tol = number(e.value);
            else if (e.key == "max_budget")
                cfg_.quad.max_budget = unsigned_int(e.value);
            else if (e.key == "batch_size")
                cfg_.quad.batch_size = unsigned_int(e.value);
            else if (e.key == "workers")
                cfg_.quad.workers = integer(e.value);
            else if (e.key == "slice_nodes")
                cfg_.quad.slice_nodes = integer(e.value);
            else
                throw Error(ErrorKind::config, "unknown key");
        });
        try {
            cfg_.quad.validate();
        } catch (const Error& err) {
            fail(section_line_, err.what());
        }
    }

    void build_field()
    {
        std::string kind;
        std::vector<double> breakpoints;
        std::vector<double> values;
        std::map<int, SmoothFn> horizontal;
        std::optional<SmoothFn> vertical;
        std::vector<double> box;
        std::vector<double> shape;
        std::optional<double> lipschitz;
        std::optional<double> sup_norm;
        each([&](const Entry& e) {
            if (e.key == "kind") {
                kind = e.value;
            } else if (e.key == "breakpoints") {
                breakpoints = numbers(e.value);
            } else if (e.key == "values") {
                values = numbers(e.value);
            } else if (e.key == "horizontal") {
                require(!horizontal.contains(0), ErrorKind::config, "horizontal factor 0 given twice");
                horizontal[0] = smooth_fn(e.value);
            } else if (e.key.rfind("horizontal.", 0) == 0) {
                const int i = integer(e.key.substr(11));
                require(i < max_dim, ErrorKind::config, "horizontal index out of range");
                require(!horizontal.contains(i), ErrorKind::config, "horizontal factor given twice");
                horizontal[i] = smooth_fn(e.value);
            } else if (e.key == "vertical") {
                vertical = smooth_fn(e.value);
            } else if (e.key == "box") {
                box = numbers(e.value);
            } else if (e.key == "shape") {
                shape = numbers(e.value);
            } else if (e.key == "lipschitz") {
                lipschitz = number(e.value);
            } else if (e.key == "sup_norm") {
                sup_norm = number(e.value);
            } else {
                throw Error(ErrorKind::config, "unknown key");
            }
        });
        try {
            Field f;
            if (kind == "pwc") {
                f = Field::pwc(breakpoints, values);
            } else if (kind == "smooth") {
                std::vector<SmoothFn> h;
                for (const auto& [i, fn] : horizontal) {
                    require(i == static_cast<int>(h.size()), ErrorKind::config, "horizontal factors must be numbered 0, 1, ...");
                    h.push_back(fn);
                }
                f = Field::smooth(h, vertical);
            } else if (kind == "grid") {
                const Box b = box_from(box);
                require(static_cast<int>(shape.size()) == b.dim, ErrorKind::config, "shape needs one count per box axis");
                std::array<int, max_dim> sh{1, 1, 1};
                for (int a = 0; a < b.dim; ++a) {
                    require(shape[a] == std::floor(shape[a]) && shape[a] >= 2, ErrorKind::config, "shape entries must be integers >= 2");
                    sh[a] = static_cast<int>(shape[a]);
                }
                f = Field::grid(b, sh, values);
            } else {
                throw Error(ErrorKind::config, "field kind must be pwc, smooth or grid");
            }
            f.lipschitz = lipschitz;
            f.sup_norm = sup_norm;
            cfg_.fields.emplace(name_, std::move(f));
        } catch (const Error& err) {
            fail(section_line_, "field '" + name_ + "': " + err.what());
        }
    }

    void build_schedule()
    {
        std::optional<Schedule> sch;
        each([&](const Entry& e) {
            if (e.key != "rule")
                throw Error(ErrorKind::config, "unknown key");
            const auto w = words(e.value);
            require(!w.empty(), ErrorKind::config, "empty rule");
            auto one = [&] {
                require(w.size() == 2, ErrorKind::config, w[0] + " takes one parameter");
                return parse_number(w[1]);
            };
            if (w[0] == "constant") {
                sch = Schedule{Schedule::Constant{one()}};
            } else if (w[0] == "log_reciprocal") {
                sch = Schedule{Schedule::LogReciprocal{one()}};
            } else if (w[0] == "power") {
                sch = Schedule{Schedule::Power{one()}};
            } else if (w[0] == "table") {
                Schedule::Table t;
                for (std::size_t i = 1; i < w.size(); ++i) {
                    const auto colon = w[i].find(':');
                    require(colon != std::string::npos, ErrorKind::config, "table entries are eps:s");
                    t.entries.emplace_back(parse_number(w[i].substr(0, colon)), parse_number(w[i].substr(colon + 1)));
                }
                sch = Schedule{t};
            } else {
                throw Error(ErrorKind::config, "rule must be constant, log_reciprocal, power or table");
            }
            sch->validate();
        });
        if (!sch)
            fail(section_line_, "schedule '" + name_ + "' has no rule");
        cfg_.schedules.emplace(name_, *sch);
    }

    void build_case()
    {
        CaseSpec c;
        c.name = name_;
        c.line = section_line_;
        std::optional<std::vector<double>> omega;
        each([&](const Entry& e) {
            if (e.key == "type") {
                c.type = e.value;
                const std::set<std::string> ok{"DR", "VERT", "JUMP", "BBM", "ZERO", "SWEEP", "SEMINORM"};
                require(ok.contains(c.type), ErrorKind::config, "type must be DR, VERT, JUMP, BBM, ZERO, SWEEP or SEMINORM");
            } else if (e.key == "field") {
                c.field = e.value;
            } else if (e.key == "schedule") {
                c.schedule = e.value;
            } else if (e.key == "d") {
                c.d = integer(e.value);
                require(c.d == 2 || c.d == 3, ErrorKind::config, "d must be 2 or 3");
            } else if (e.key == "omega") {
                omega = numbers(e.value);
            } else if (e.key == "eps") {
                const auto w = words(e.value);
                require(!w.empty(), ErrorKind::config, "empty eps grid");
                if (w[0] == "dyadic" || w[0] == "exp2log") {
                    require(w.size() == 3, ErrorKind::config, w[0] + " takes two integers");
                    const int a = integer(w[1]);
                    const int b = integer(w[2]);
                    c.eps = w[0] == "dyadic" ? dyadic_grid(a, b) : exp2log_grid(a, b);
                } else if (w[0] == "list") {
                    for (std::size_t i = 1; i < w.size(); ++i)
                        c.eps.push_back(parse_number(w[i]));
                    require(!c.eps.empty(), ErrorKind::config, "empty eps list");
                } else {
                    throw Error(ErrorKind::config, "eps must be 'dyadic k0 k1', 'exp2log j0 j1' or 'list ...'");
                }
            } else if (e.key == "scaling") {
                c.scaling = Scaling::from_string(e.value);
            } else if (e.key == "tolerance") {
                c.tolerance = number(e.value);
                require(*c.tolerance > 0.0, ErrorKind::config, "tolerance must be positive");
            } else if (e.key == "method") {
                if (e.value != "auto")
                    c.method = method_from_string(e.value);
            } else if (e.key == "s_values") {
                c.s_values = numbers(e.value);
            } else if (e.key == "s") {
                c.s = number(e.value);
            } else if (e.key == "seed") {
                c.seed = unsigned_int(e.value);
            } else {
                throw Error(ErrorKind::config, "unknown key");
            }
        });
        if (c.type.empty())
            fail(c.line, "case '" + c.name + "' has no type");
        if (c.field.empty())
            fail(c.line, "case '" + c.name + "' has no field");
        try {
            c.omega = omega ? box_from(*omega) : Box::make(std::vector<double>(c.d - 1, 0.0), std::vector<double>(c.d - 1, 1.0));
        } catch (const Error& err) {
            fail(c.line, "case '" + c.name + "': " + err.what());
        }
        if (c.omega.dim != c.d - 1)
            fail(c.line, "case '" + c.name + "': omega must have d - 1 axes");
        if (c.type == "BBM") {
            if (c.s_values.empty())
                fail(c.line, "case '" + c.name + "': BBM needs s_values");
        } else if (c.type == "SEMINORM") {
            if (c.eps.empty())
                fail(c.line, "case '" + c.name + "': SEMINORM needs eps");
            if (!c.s && c.schedule.empty())
                fail(c.line, "case '" + c.name + "': SEMINORM needs s or a schedule");
        } else {
            if (c.eps.empty())
                fail(c.line, "case '" + c.name + "': needs an eps grid");
            if (c.schedule.empty())
                fail(c.line, "case '" + c.name + "': needs a schedule");
        }
        cfg_.cases.push_back(std::move(c));
    }

    void resolve()
    {
        for (const auto& c : cfg_.cases) {
            if (!cfg_.fields.contains(c.field))
                fail(c.line, "case '" + c.name + "' refers to undefined field '" + c.field + "'");
            if (!c.schedule.empty() && !cfg_.schedules.contains(c.schedule))
                fail(c.line, "case '" + c.name + "' refers to undefined schedule '" + c.schedule + "'");
            try {
                cfg_.fields.at(c.field).validate(c.d);
            } catch (const Error& err) {
                fail(c.line, "case '" + c.name + "': " + err.what());
            }
        }
    }

    std::string source_;
    RunConfig cfg_;
    std::string kind_;
    std::string name_;
    int section_line_ = 0;
    bool global_seen_ = false;
    std::vector<Entry> keys_;
    std::set<std::string> seen_;
    std::map<std::string, std::set<std::string>> names_;
};

} // namespace

double parse_number(const std::string& token)
{
    std::string t = trim(token);
    require(!t.empty(), ErrorKind::config, "empty number");
    double sign = 1.0;
    if (t.front() == '-' && t.find_first_of("*/", 1) != std::string::npos) {
        sign = -1.0;
        t.erase(0, 1);
    } else if (t.front() == '-' && t.size() > 1 && t.substr(1) == "pi") {
        return -std::numbers::pi;
    }
    // a*b/c...
    double value = 1.0;
    char op = '*';
    std::size_t pos = 0;
    while (pos <= t.size()) {
        const auto next = t.find_first_of("*/", pos);
        const std::string part = t.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        const double x = plain_number(part);
        if (op == '*') {
            value *= x;
        } else {
            require(x != 0.0, ErrorKind::config, "division by zero in '" + token + "'");
            value /= x;
        }
        if (next == std::string::npos)
            break;
        op = t[next];
        pos = next + 1;
    }
    require(std::isfinite(value), ErrorKind::config, "number out of range: '" + token + "'");
    return sign * value;
}

RunConfig parse_config(std::istream& in, const std::string& source)
{
    return Parser(source).run(in);
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::config, "cannot open config '" + path + "'");
    return parse_config(in, path);
}

VerifyInput make_verify_input(const RunConfig& cfg, const CaseSpec& c)
{
    VerifyInput v;
    if (c.is_verdict())
        v.kind = case_kind_from_string(c.type);
    v.sweep.case_id = c.name;
    v.sweep.field = cfg.fields.at(c.field);
    v.sweep.unit = UnitFilm(c.d, c.omega);
    if (!c.schedule.empty())
        v.sweep.schedule = cfg.schedules.at(c.schedule);
    v.sweep.eps_grid = c.eps;
    v.sweep.method = c.method;
    v.sweep.seed = c.seed.value_or(cfg.seed);
    Scaling sc;
    switch (v.kind) {
    case CaseKind::VERT: sc.kind = Scaling::Kind::eps_1m2s; break;
    case CaseKind::JUMP:
    case CaseKind::ZERO: sc.kind = Scaling::Kind::lambda; break;
    default: sc.kind = Scaling::Kind::eps2; break;
    }
    v.sweep.scaling = c.scaling.value_or(sc);
    v.s_values = c.s_values;
    v.tolerance = c.tolerance.value_or(default_tolerance(v.kind));
    return v;
}

} // namespace thinfilm

#include "thinfilm/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>

#include <json.hpp>

namespace thinfilm {

Format format_from_string(const std::string& name)
{
    if (name == "csv")
        return Format::csv;
    if (name == "json")
        return Format::json;
    if (name == "dat")
        return Format::dat;
    throw Error(ErrorKind::invalid_argument, "format must be csv, json or dat");
}

std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<SweepRecord>& records)
{
    out << csv_header << '\n';
    for (const auto& r : records) {
        out << r.case_id << ',' << r.d << ',' << format_double(r.s) << ',' << format_double(r.eps) << ','
            << format_double(r.scaling) << ',' << format_double(r.raw) << ',' << format_double(r.scaled) << ','
            << format_double(r.error) << ',' << to_string(r.method) << '\n';
    }
}

namespace {

nlohmann::json record_json(const SweepRecord& r)
{
    return {{"case_id", r.case_id}, {"d", r.d}, {"s", r.s}, {"eps", r.eps}, {"scaling", r.scaling}, {"raw", r.raw},
        {"scaled", r.scaled}, {"error", r.error}, {"method", std::string(to_string(r.method))}};
}

nlohmann::json maybe(const std::optional<double>& x)
{
    if (!x)
        return "Divergent";
    return *x;
}

nlohmann::json finite_or_null(double x)
{
    if (std::isfinite(x))
        return x;
    return nullptr;
}

} // namespace

void write_json(std::ostream& out, const ReportMeta& meta, const std::vector<SweepRecord>& records,
    const std::vector<Verdict>& verdicts)
{
    nlohmann::json doc;
    doc["meta"] = {{"seed", meta.seed}, {"version", meta.version}, {"timestamp", meta.timestamp}};
    auto recs = nlohmann::json::array();
    for (const auto& r : records)
        recs.push_back(record_json(r));
    if (verdicts.empty()) {
        doc["results"] = recs;
    } else {
        auto res = nlohmann::json::array();
        for (const auto& v : verdicts) {
            res.push_back({{"case_id", v.case_id}, {"predicted", maybe(v.predicted)},
                {"extrapolated", maybe(v.extrapolated)}, {"uncertainty", finite_or_null(v.uncertainty)},
                {"rel_err", finite_or_null(v.rel_err)}, {"pass", v.pass}, {"tolerance", v.tolerance},
                {"reason", v.reason}});
        }
        doc["results"] = res;
        doc["records"] = recs;
    }
    out << doc.dump(2) << '\n';
}

void write_dat(std::ostream& out, const std::vector<SweepRecord>& records)
{
    std::string current;
    bool first = true;
    for (const auto& r : records) {
        if (first || r.case_id != current) {
            if (!first)
                out << '\n';
            out << "# " << r.case_id << " x y yerr\n";
            current = r.case_id;
            first = false;
        }
        // BBM rows carry eps = 0; their abscissa is 1 - sigma = 1/scaling
        const double x = r.eps > 0.0 ? r.eps : 1.0 / r.scaling;
        out << format_double(x) << ' ' << format_double(r.scaled) << ' ' << format_double(r.error) << '\n';
    }
}

void write_report(const std::vector<SweepRecord>& records, const std::vector<Verdict>& verdicts, Format format,
    const std::string& path, const ReportMeta& meta, std::ostream& fallback)
{
    auto emit = [&](std::ostream& o) {
        switch (format) {
        case Format::csv: write_csv(o, records); break;
        case Format::json: write_json(o, meta, records, verdicts); break;
        case Format::dat: write_dat(o, records); break;
        }
    };
    if (path.empty() || path == "-") {
        emit(fallback);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    require(static_cast<bool>(f), ErrorKind::io, "cannot write '" + path + "'");
    emit(f);
    f.flush();
    require(static_cast<bool>(f), ErrorKind::io, "write to '" + path + "' failed");
}

} // namespace thinfilm

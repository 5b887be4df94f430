#ifndef THINFILM_REPORT_HPP
#define THINFILM_REPORT_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "thinfilm/asymptotics.hpp"

namespace thinfilm {

enum class Format { csv, json, dat };

Format format_from_string(const std::string& name);

struct ReportMeta {
    std::uint64_t seed = 0;
    std::string version;
    /// Excluded from determinism checks; only the json meta block carries it.
    std::string timestamp;
};

inline constexpr const char* csv_header = "case_id,d,s,eps,scaling,raw,scaled,error,method";

void write_csv(std::ostream& out, const std::vector<SweepRecord>& records);
/// {"meta": {...}, "results": [...]}; results holds verdicts when there are any, records otherwise.
void write_json(std::ostream& out, const ReportMeta& meta, const std::vector<SweepRecord>& records,
    const std::vector<Verdict>& verdicts);
/// x y yerr per line, one block per case, blocks separated by a blank line.
void write_dat(std::ostream& out, const std::vector<SweepRecord>& records);

/// Writes to `path`, or to `fallback` when path is empty or "-". Throws io on failure.
void write_report(const std::vector<SweepRecord>& records, const std::vector<Verdict>& verdicts, Format format,
    const std::string& path, const ReportMeta& meta, std::ostream& fallback);

/// %.17g
std::string format_double(double x);

std::string utc_timestamp();

} // namespace thinfilm

#endif

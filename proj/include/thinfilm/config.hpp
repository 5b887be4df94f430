#ifndef THINFILM_CONFIG_HPP
#define THINFILM_CONFIG_HPP

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thinfilm/asymptotics.hpp"
#include "thinfilm/domain.hpp"
#include "thinfilm/estimate.hpp"

namespace thinfilm {

/// One [case NAME] section.
struct CaseSpec {
    std::string name;
    int line = 0;
    /// DR, VERT, JUMP, BBM, ZERO, SWEEP or SEMINORM.
    std::string type;
    std::string field;
    std::string schedule;
    int d = 2;
    Box omega = Box::interval(0.0, 1.0);
    std::vector<double> eps;
    std::optional<Scaling> scaling;
    std::optional<double> tolerance;
    std::optional<Method> method;
    std::vector<double> s_values;
    std::optional<double> s;
    std::optional<std::uint64_t> seed;

    bool is_verdict() const;
};

struct RunConfig {
    std::string source;
    std::uint64_t seed = 0;
    QuadConfig quad;
    std::map<std::string, Field> fields;
    std::map<std::string, Schedule> schedules;
    /// In file order.
    std::vector<CaseSpec> cases;

    const CaseSpec* find_case(const std::string& name) const;
};

/// Parses the INI-style grammar documented in configs/README.md.
/// Errors carry ErrorKind::config and a "source:line:" prefix.
RunConfig parse_config(std::istream& in, const std::string& source);
RunConfig load_config(const std::string& path);

/// Numbers may be written with pi, products and quotients: "pi", "-pi/2", "3*pi/4", "0.25".
double parse_number(const std::string& token);

/// Inputs for the asymptotics module built from a case and the config it belongs to.
VerifyInput make_verify_input(const RunConfig& cfg, const CaseSpec& c);

} // namespace thinfilm

#endif

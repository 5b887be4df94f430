#ifndef THINFILM_ASYMPTOTICS_HPP
#define THINFILM_ASYMPTOTICS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thinfilm/constants.hpp"
#include "thinfilm/domain.hpp"
#include "thinfilm/estimate.hpp"

namespace thinfilm {

struct SweepRecord {
    std::string case_id;
    int d = 2;
    double s = 0.0;
    double eps = 0.0;
    double scaling = 1.0;
    double raw = 0.0;
    double scaled = 0.0;
    double error = 0.0;
    Method method = Method::weight;
};

/// Divisor applied to raw seminorms along a sweep.
struct Scaling {
    enum class Kind { eps2, eps_1m2s, lambda, eps_pow, none };

    Kind kind = Kind::eps2;
    /// Exponent for eps_pow.
    double power = 2.0;

    static Scaling from_string(const std::string& text);
    std::string name() const;
    double divisor(double s, double eps, const RegimeClass& regime) const;
};

struct Classification {
    RegimeClass regime;
    /// Case (i), (ii) or (iii) of the jump-energy proposition: 1, 2 or 3.
    int pconv_case = 1;
};

/// Throws unclassifiable for schedules outside the three cases.
Classification classify_schedule(const Schedule& sch, const std::vector<double>& eps_grid);

struct SweepInput {
    std::string case_id;
    /// Field on the unit film; each record uses its rescaling to the film of thickness eps.
    Field field;
    UnitFilm unit{2, Box::interval(0.0, 1.0)};
    Schedule schedule{Schedule::Constant{0.25}};
    std::vector<double> eps_grid;
    Scaling scaling;
    /// nullopt picks weight when it applies and mc otherwise.
    std::optional<Method> method;
    std::uint64_t seed = 0;
};

std::vector<SweepRecord> sweep(const SweepInput& in, const QuadConfig& cfg);

/// eps = 2^{-k}, k = k0..k1.
std::vector<double> dyadic_grid(int k0, int k1);
/// eps = exp(-2^j), j = j0..j1: |log eps| doubles from one point to the next.
std::vector<double> exp2log_grid(int j0, int j1);

struct PowerFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double r2 = 0.0;
};

/// Least squares on (log eps, log value).
PowerFit fit_power_law(const std::vector<std::pair<double, double>>& points);

struct Extrapolation {
    double limit = 0.0;
    double uncertainty = 0.0;
};

/// Aitken delta-squared on the value sequence (eps decreasing).
Extrapolation extrapolate_limit(const std::vector<std::pair<double, double>>& points);
/// Interpolating polynomial through (x, value) evaluated at x = 0; uncertainty compares
/// with the polynomial of one degree lower.
Extrapolation extrapolate_polynomial(const std::vector<std::pair<double, double>>& points);

enum class CaseKind { DR, VERT, JUMP, BBM, ZERO };

std::string to_string(CaseKind k);
CaseKind case_kind_from_string(const std::string& name);

struct Verdict {
    std::string case_id;
    /// nullopt means Divergent.
    std::optional<double> predicted;
    /// nullopt means the sweep was observed to diverge.
    std::optional<double> extrapolated;
    double uncertainty = 0.0;
    double rel_err = 0.0;
    bool pass = false;
    double tolerance = 0.0;
    std::string reason;
};

struct VerifyInput {
    CaseKind kind = CaseKind::DR;
    SweepInput sweep;
    /// BBM: exponents s with sigma = s + 1/2 on omega.
    std::vector<double> s_values;
    double tolerance = 0.05;
};

struct VerifyResult {
    Verdict verdict;
    std::vector<SweepRecord> records;
};

VerifyResult verify_gamma_limit(const VerifyInput& in, const QuadConfig& cfg);

/// Default tolerance per case: DR 5%, VERT 5%, JUMP 10%, BBM 5%, ZERO 1e-2.
double default_tolerance(CaseKind k);

} // namespace thinfilm

#endif

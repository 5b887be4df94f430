#ifndef THINFILM_ESTIMATE_HPP
#define THINFILM_ESTIMATE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace thinfilm {

/// mc: stratified Monte Carlo; grid: midpoint double sum; weight: deterministic
/// difference-variable quadrature; exact: closed form checked against quadrature.
enum class Method { mc, grid, weight, exact };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

/// A numeric value with its error bound and provenance.
struct Estimate {
    double value = 0.0;
    /// Standard error for mc, heuristic bound otherwise.
    double error = 0.0;
    Method method = Method::weight;
    /// Samples (mc), cell count (grid) or integrand evaluations (weight).
    std::uint64_t budget = 0;
    /// mc only.
    std::uint64_t seed = 0;
};

/// The integral is infinite; carries the reason.
struct Divergent {
    std::string reason;
};

/// Outcome of a functional that may legitimately be infinite.
using Outcome = std::variant<Estimate, Divergent>;

inline bool is_divergent(const Outcome& o) { return std::holds_alternative<Divergent>(o); }

struct QuadConfig {
    /// Dyadic strata in |x - y| for the Monte Carlo engine.
    int shells = 24;
    /// Grid oracle resolution.
    int nodes_per_axis = 32;
    double rel_tol = 1e-3;
    /// Hard cap on samples (mc) or cell pairs (grid).
    std::uint64_t max_budget = 400'000'000;
    /// Monte Carlo samples per estimate; 0 picks a default from rel_tol.
    std::uint64_t samples = 0;
    /// Samples per counter-based batch; fixes the reduction order.
    std::uint64_t batch_size = 4096;
    /// Worker threads; 0 means hardware concurrency. Results do not depend on it.
    int workers = 0;
    /// Gauss-Legendre nodes per omega axis for slice quadrature.
    int slice_nodes = 16;

    void validate() const;
};

} // namespace thinfilm

#endif

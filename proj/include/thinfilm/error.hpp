#ifndef THINFILM_ERROR_HPP
#define THINFILM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace thinfilm {

enum class ErrorKind {
    invalid_argument,
    domain_mismatch,
    unsupported_kind,
    out_of_domain,
    divergent_integral,
    unsupported,
    budget,
    fit,
    unclassifiable,
    config,
    io,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` lets callers map failures
/// onto exit codes or verdict reasons without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what)
{
    if (!cond)
        throw Error(kind, what);
}

} // namespace thinfilm

#endif

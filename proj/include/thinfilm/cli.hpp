#ifndef THINFILM_CLI_HPP
#define THINFILM_CLI_HPP

#include <ostream>

namespace thinfilm {

inline constexpr const char* version = "1.0.0";

/// Exit codes: 0 all verdicts pass, 1 failing verdict or engine error, 2 usage or config error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace thinfilm

#endif

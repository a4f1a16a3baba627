#pragma once

#include <iosfwd>

namespace blackwell {

/// Exit codes: 0 success, 1 usage / parse / applicability errors,
/// 2 verification failure.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace blackwell

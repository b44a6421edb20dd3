#pragma once

#include <iosfwd>

namespace qlest::cli {

/// Exit codes of the qlest tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitIdentityFailure = 2;

/// Environment variable overriding the default seed of simulate/evaluate.
inline constexpr const char* kSeedEnv = "QLEST_SEED";

/// Parses argv and runs the requested subcommand, writing normal output to
/// `out` and diagnostics to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qlest::cli

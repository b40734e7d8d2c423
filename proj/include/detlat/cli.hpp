#pragma once

#include <iosfwd>

namespace detlat::cli {

enum ExitCode : int {
  kPassed = 0,
  kVerificationFailed = 1,
  kInputError = 2,
  kInconclusive = 3,
};

/// Entry point of `detlat <command> [flags] [files]`. JSON goes to `out`,
/// diagnostics to `err`; `in` is read when no file (or "-") is given.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace detlat::cli

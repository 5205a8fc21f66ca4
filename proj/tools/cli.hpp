#pragma once

#include <iosfwd>

namespace cpdetect::cli {

/// Runs the cpdetect command line. Returns the process exit status; errors are
/// reported on `err` as a one-line JSON object.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cpdetect::cli

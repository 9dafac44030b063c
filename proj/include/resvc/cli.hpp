#pragma once

#include <iosfwd>

namespace resvc {

// Entry point of the resvc command-line tool. Returns 0 on success, 1 on a
// usage error and 2 when processing fails. Data goes to the declared output
// paths (detect prints frame indices to out); diagnostics go to err.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace resvc

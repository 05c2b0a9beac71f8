#pragma once

#include <ostream>

namespace hoprank {

/// Command-line entry point. Summary key=value line on `out`, progress and
/// diagnostics on `err`. Returns 0 on success, 1 on usage errors and 2 on
/// data errors.
int run(int argc, const char* const argv[], std::ostream& out, std::ostream& err);

}  // namespace hoprank

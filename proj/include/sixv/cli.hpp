#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sixv::cli {

/// Entry point behind the `sixvertex` binary. Returns 0 on success, 1 when a
/// requested check fails, 2 on usage or input errors.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace sixv::cli

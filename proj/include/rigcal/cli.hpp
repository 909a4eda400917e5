#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rigcal {

/// Entry point of the `rigcal` tool. Returns 0 on success, 1 on usage errors
/// and 2 on data errors. Diagnostics go to `err`, printed results to `out`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace rigcal

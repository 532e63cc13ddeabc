#pragma once

#include <string>
#include <vector>

namespace virtperm {

// Command-line driver.  args excludes the program name.  Returns 0 on
// success (experiment passed or output written), 2 when an experiment ran
// but its statistical check failed, and 1 on usage or validation errors.
int run_cli(const std::vector<std::string>& args);

}  // namespace virtperm

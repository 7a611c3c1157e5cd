#ifndef VMM_CLI_HPP
#define VMM_CLI_HPP

#include <string>
#include <vector>

namespace vmm {

/// Entry point behind the vmm binary. Exit codes: 0 success, 1 usage error,
/// 2 numerical failure (singular solve without --expect-singular).
int run_cli(const std::vector<std::string>& args);

}  // namespace vmm

#endif

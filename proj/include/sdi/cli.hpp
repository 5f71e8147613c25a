#ifndef SDI_CLI_HPP_
#define SDI_CLI_HPP_

#include <string>
#include <vector>

namespace sdi::cli {

// Entry point behind the `sdi` binary. Exit codes: 0 ok, 1 usage error,
// 2 data error, 3 numeric error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args); // args without program name

} // namespace sdi::cli

#endif // SDI_CLI_HPP_

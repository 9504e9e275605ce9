#ifndef GDL_TOOLS_CLI_HPP
#define GDL_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace gdl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCompute = 2;

/// Entry point shared by the executable and the tests. args excludes the
/// program name.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gdl::cli

#endif  // GDL_TOOLS_CLI_HPP

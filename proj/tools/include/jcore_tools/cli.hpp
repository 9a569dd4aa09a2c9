// SPDX-License-Identifier: Apache-2.0

#ifndef JCORE_TOOLS_CLI_HPP
#define JCORE_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace jcore::cli {

// Exit codes: 0 clean, 1 diagnostics or distinguished, 2 usage or internal.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);
int dispatch(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace jcore::cli

#endif  // JCORE_TOOLS_CLI_HPP

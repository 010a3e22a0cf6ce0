#ifndef CKLMS_CLI_HPP
#define CKLMS_CLI_HPP

#include <iosfwd>

namespace cklms {

/// Entry point of the `cklms` tool. Subcommands: equalize, verify-wirtinger,
/// verify-kernel. Returns the process exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cklms

#endif // CKLMS_CLI_HPP

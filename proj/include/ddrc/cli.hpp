// Command-line front end.
//
// Exit codes: 0 success, 1 configuration or usage error, 2 solver failure
// (or a failed property check / convergence level).

#ifndef DDRC_CLI_HPP
#define DDRC_CLI_HPP

#include <iosfwd>

namespace ddrc
{

  int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace ddrc

#endif // DDRC_CLI_HPP

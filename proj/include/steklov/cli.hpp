#ifndef STEKLOV_CLI_HPP
#define STEKLOV_CLI_HPP

namespace steklov {

/// Command-line entry point. Subcommands: solve, minimize, maximize, probe,
/// mobius, dirichlet1d, verify. Returns 0 on success, 2 on configuration
/// errors (bad flags, unreadable/invalid config, infeasible constraints) and
/// 3 on numerical failures.
int run_cli(int argc, const char* const* argv);

}  // namespace steklov

#endif

#pragma once

namespace exaul {

// gen-pool | run | audit. Exit codes: 0 success, 1 audit failure, 2 usage
// or I/O error.
int run_cli(int argc, const char* const* argv);

}  // namespace exaul

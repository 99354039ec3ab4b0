#pragma once

#include <iosfwd>

namespace jsr {

// Exit codes: 0 exact/success, 1 bounds-only, 2 input error, 3 numeric failure,
// 4 unsupported case (C).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jsr

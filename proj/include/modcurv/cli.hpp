#pragma once

#include <iosfwd>

namespace modcurv {

// Exit status: 0 ok, 1 verification failure, 2 usage error, 3 pipeline error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace modcurv

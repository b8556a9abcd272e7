#pragma once

#include <ostream>

namespace skelpair {

// Exit codes: 0 ok, 1 vanishing violations found, 2 usage, 3 bad input,
// 4 computation error. Errors go to `err` as one JSON object.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace skelpair

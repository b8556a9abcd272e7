#include "skelpair/parallel.hpp"

#include <cstdlib>
#include <string>

namespace skelpair {

unsigned thread_count() {
  if (const char* env = std::getenv("SKELPAIR_THREADS")) {
    try {
      long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (...) {
      // ignore garbage, fall through to the default
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace skelpair

#include "tsw/parallel.hpp"

#include <cstdlib>
#include <string>

namespace tsw {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TSW_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
      // Ignore malformed values.
    }
  }
  return 1;
}

}  // namespace tsw

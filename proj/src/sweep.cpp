#include "szpiro/sweep.hpp"

#include <cstdlib>
#include <string>

namespace szpiro {

unsigned default_jobs() {
  if (const char* env = std::getenv("SZPIRO_JOBS")) {
    try {
      long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace szpiro

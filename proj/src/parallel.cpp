#include "blockmod/parallel.hpp"

#include <cstdlib>
#include <string>

namespace blockmod {

int default_thread_count() {
  if (const char* env = std::getenv("BLOCKMOD_THREADS"); env && *env) {
    try {
      const int value = std::stoi(env);
      if (value >= 1) return value;
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace blockmod

#include "sparsesm/parallel.hpp"

#include <cstdlib>
#include <string>

namespace sparsesm {

int default_worker_count() {
  if (const char* env = std::getenv("SPARSESM_WORKERS")) {
    try {
      const int value = std::stoi(env);
      if (value > 0) return value;
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace sparsesm

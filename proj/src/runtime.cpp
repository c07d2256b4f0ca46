#include "anisoflow/runtime.hpp"

#include <cstdlib>
#include <thread>

namespace anisoflow {

int thread_cap() {
  int cap = 0;
  if (const char* env = std::getenv("ANISOFLOW_THREADS")) {
    cap = std::atoi(env);
  }
  if (cap <= 0) {
    cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap <= 0) cap = 1;
  }
  return cap;
}

}  // namespace anisoflow

#include "covertq/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include <omp.h>

namespace covertq::parallel {

namespace {

std::atomic<int> g_override{0};

int env_threads() {
  static const int value = [] {
    const int hw = omp_get_max_threads();
    const char* env = std::getenv("COVERTQ_THREADS");
    if (env == nullptr) return hw;
    try {
      const int n = std::stoi(env);
      return n > 0 ? std::min(n, hw) : hw;
    } catch (...) {
      return hw;
    }
  }();
  return value;
}

}  // namespace

int max_threads() {
  const int o = g_override.load();
  return o > 0 ? o : env_threads();
}

void set_max_threads(int n) { g_override.store(n > 0 ? n : 0); }

}  // namespace covertq::parallel

#include "lsar/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace lsar {

namespace {
const int kDefaultThreads = omp_get_max_threads();
}

void set_thread_count(int n) { omp_set_num_threads(n > 0 ? n : kDefaultThreads); }

int thread_count() { return omp_get_max_threads(); }

int apply_thread_env() {
  const char* env = std::getenv("LSAR_THREADS");
  if (!env) return 0;
  try {
    const int n = std::stoi(env);
    if (n > 0) {
      set_thread_count(n);
      return n;
    }
  } catch (const std::exception&) {
  }
  return 0;
}

}  // namespace lsar

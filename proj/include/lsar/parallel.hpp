#ifndef LSAR_PARALLEL_HPP
#define LSAR_PARALLEL_HPP

namespace lsar {

// Caps the worker count used by all parallel loops. n <= 0 restores the default.
void set_thread_count(int n);
int thread_count();

// Applies LSAR_THREADS from the environment if set. Returns the value applied, or 0.
int apply_thread_env();

}  // namespace lsar

#endif  // LSAR_PARALLEL_HPP

#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stokes_spectra {

/// Worker count used by parameter sweeps (>= 1). Defaults to 1.
int default_jobs();
void set_default_jobs(int jobs);

/// Runs f(0..n-1). Each index writes its own output slot, so results do
/// not depend on scheduling. The first exception thrown is rethrown.
template <class F>
void parallel_for(int n, F&& f, int jobs = 0) {
  if (jobs <= 0) jobs = default_jobs();
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> pool;
  const int t = jobs < n ? jobs : n;
  pool.reserve(t);
  for (int i = 0; i < t; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace stokes_spectra

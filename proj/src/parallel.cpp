#include "stokes_spectra/parallel.hpp"

#include "stokes_spectra/error.hpp"

namespace stokes_spectra {

namespace {
std::atomic<int> g_jobs{1};
}

int default_jobs() { return g_jobs.load(); }

void set_default_jobs(int jobs) {
  if (jobs < 1) throw InvalidArgument("jobs must be >= 1");
  g_jobs.store(jobs);
}

}  // namespace stokes_spectra

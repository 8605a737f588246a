#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "spectral.hpp"
#include "stokes_spectra/error.hpp"

namespace stokes_spectra::detail {

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace {

// fftw_plan creation is not thread safe; execution on new arrays is.
std::mutex plan_mutex;

fftw_plan get_plan(int n, int sign) {
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto it = cache.find({n, sign});
  if (it != cache.end()) return it->second;
  auto* in = fftw_alloc_complex(n);
  auto* out = fftw_alloc_complex(n);
  fftw_plan p = fftw_plan_dft_1d(n, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(in);
  fftw_free(out);
  if (!p) throw NumericalFailure("fftw plan creation failed", {{"n", static_cast<double>(n)}});
  cache.emplace(std::make_pair(n, sign), p);
  return p;
}

void run(const cplx* in, cplx* out, int n, int sign) {
  fftw_plan p = get_plan(n, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

void fft_backward(const cplx* in, cplx* out, int n) { run(in, out, n, FFTW_BACKWARD); }
void fft_forward(const cplx* in, cplx* out, int n) { run(in, out, n, FFTW_FORWARD); }

Samples<cplx> to_grid(const Series<cplx>& s, int n) {
  if (n < 2 * s.K + 1) throw InvalidArgument("grid too small for series");
  std::vector<cplx> buf(n, cplx(0.0));
  for (int k = -s.K; k <= s.K; ++k) buf[(k + n) % n] = s.at(k);
  Samples<cplx> out(n, s.mu);
  fft_backward(buf.data(), out.v.data(), n);
  return out;
}

Series<cplx> to_series(const Samples<cplx>& g, int K) {
  const int n = g.n;
  if (n < 2 * K + 1) throw InvalidArgument("grid too small for series");
  std::vector<cplx> buf(n);
  fft_forward(g.v.data(), buf.data(), n);
  Series<cplx> out(K, g.mu);
  const double inv = 1.0 / n;
  for (int k = -K; k <= K; ++k) out.at(k) = buf[(k + n) % n] * inv;
  return out;
}

}  // namespace stokes_spectra::detail

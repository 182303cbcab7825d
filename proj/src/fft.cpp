#include "plab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace plab::fft {
namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

// FFTW plan creation is not thread-safe; execution via fftw_execute_dft is.
// Plans are created with FFTW_UNALIGNED so they can run on arbitrary buffers,
// and FFTW_ESTIMATE so planning is deterministic run to run.
PlanPair& plans_for(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  cvec a(n), b(n);
  PlanPair p;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p.fwd = fftw_plan_dft_1d(static_cast<int>(n),
                           reinterpret_cast<fftw_complex*>(a.data()),
                           reinterpret_cast<fftw_complex*>(b.data()),
                           FFTW_FORWARD, flags);
  p.bwd = fftw_plan_dft_1d(static_cast<int>(n),
                           reinterpret_cast<fftw_complex*>(a.data()),
                           reinterpret_cast<fftw_complex*>(b.data()),
                           FFTW_BACKWARD, flags);
  return cache.emplace(n, p).first->second;
}

void run(std::span<const cplx> in, std::span<cplx> out, bool forward) {
  const std::size_t n = in.size();
  if (n == 0 || out.size() != n) throw Error("fft: size mismatch");

  // Out-of-place plans require distinct buffers.
  cvec tmp;
  const cplx* src = in.data();
  if (src == out.data()) {
    tmp.assign(in.begin(), in.end());
    src = tmp.data();
  }
  PlanPair& p = plans_for(n);
  fftw_execute_dft(forward ? p.fwd : p.bwd,
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(src)),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : out) v *= scale;
}

}  // namespace

void forward_unitary(std::span<const cplx> in, std::span<cplx> out) {
  run(in, out, true);
}

void inverse_unitary(std::span<const cplx> in, std::span<cplx> out) {
  run(in, out, false);
}

cvec forward_unitary(const cvec& in) {
  cvec out(in.size());
  forward_unitary(std::span<const cplx>(in), std::span<cplx>(out));
  return out;
}

cvec inverse_unitary(const cvec& in) {
  cvec out(in.size());
  inverse_unitary(std::span<const cplx>(in), std::span<cplx>(out));
  return out;
}

}  // namespace plab::fft

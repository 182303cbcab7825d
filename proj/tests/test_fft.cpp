#include <doctest.h>

#include "helpers.hpp"
#include "plab/fft.hpp"
#include "plab/rng.hpp"

using namespace plab;

TEST_SUITE("fft") {

TEST_CASE("matches the naive unitary DFT") {
  rng::Stream rng(42);
  for (std::size_t n : {8u, 64u, 1024u}) {
    cvec x(n);
    for (auto& v : x) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const cvec got = fft::forward_unitary(x);
    const cvec want = testhelp::naive_dft(x, true);
    CHECK(testhelp::max_abs_diff(got, want) < 1e-9);
    const cvec back = fft::inverse_unitary(got);
    CHECK(testhelp::max_abs_diff(back, x) < 1e-12);
  }
}

TEST_CASE("parseval") {
  rng::Stream rng(7);
  cvec x(1024);
  for (auto& v : x) v = {rng.gaussian(), rng.gaussian()};
  const cvec y = fft::forward_unitary(x);
  double ex = 0, ey = 0;
  for (auto& v : x) ex += std::norm(v);
  for (auto& v : y) ey += std::norm(v);
  CHECK(std::abs(ex - ey) / ex < 1e-12);
}

TEST_CASE("impulse transforms to a flat spectrum") {
  cvec x(1024, cplx{0.0, 0.0});
  x[0] = 1.0;
  const cvec y = fft::forward_unitary(x);
  for (const auto& v : y) CHECK(std::abs(v - cplx{1.0 / 32.0, 0.0}) < 1e-12);
}

}  // TEST_SUITE

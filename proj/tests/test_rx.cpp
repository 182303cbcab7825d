#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "plab/chan.hpp"
#include "plab/fft.hpp"
#include "plab/rng.hpp"
#include "plab/rx.hpp"
#include "plab/seq.hpp"
#include "plab/txgen.hpp"

using namespace plab;
using namespace plab::rx;

namespace {

const seq::CarrierSet& cs() {
  static const seq::CarrierSet s = seq::default_carrier_set();
  return s;
}

// Preamble embedded at `offset` in a zero-padded stream, then impaired.
SampleStream make_stream(int delta_phi, std::size_t offset, const CfoSpec& cfo,
                         double snr_db = std::numeric_limits<double>::infinity(),
                         std::uint64_t seed = 1, std::size_t tail = 600) {
  const SampleStream tx = txgen::assemble_preamble(txgen::build_spectrum(cs().d_a, cs().d_b, delta_phi));
  SampleStream stream;
  stream.samples.assign(offset + tx.size() + tail, cplx{0.0, 0.0});
  std::copy(tx.samples.begin(), tx.samples.end(), stream.samples.begin() + offset);
  if (cfo.m_int != 0 || cfo.f_frac != 0.0) stream = chan::apply_cfo(stream, cfo);
  if (std::isfinite(snr_db)) {
    rng::Stream rng(seed);
    stream = chan::add_awgn_with_power(stream, 1.0, snr_db, rng);
  }
  return stream;
}

}  // namespace

TEST_SUITE("rx") {

TEST_CASE("circular correlation via transforms matches the brute-force oracle") {
  rng::Stream rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    cvec a(511), b(511);
    for (auto& v : a) v = rng.uniform() < 0.5 ? cplx{1, 0} : cplx{-1, 0};
    for (auto& v : b) v = rng.uniform() < 0.5 ? cplx{1, 0} : cplx{-1, 0};
    const cvec got = circ_corr_transform(a, b);
    const cvec want = testhelp::brute_circ_corr(a, b);
    CHECK(testhelp::max_abs_diff(got, want) < 1e-9);
  }
}

TEST_CASE("circular correlation impulse and shift cases") {
  cvec a(511, cplx{0, 0}), b(511, cplx{0, 0});
  a[0] = b[0] = 1.0;
  const cvec corr = circ_corr_transform(a, b);
  CHECK(std::abs(corr[0] - cplx{1, 0}) < 1e-9);
  for (std::size_t q = 1; q < 511; ++q) CHECK(std::abs(corr[q]) < 1e-9);

  // a = b shifted: a[k] = b[(k+17) mod M] peaks at lag 17
  rng::Stream rng(2);
  cvec base(511);
  for (auto& v : base) v = {rng.gaussian(), rng.gaussian()};
  cvec shifted(511);
  for (std::size_t k = 0; k < 511; ++k) shifted[k] = base[(k + 17) % 511];
  const cvec c2 = circ_corr_transform(shifted, base);
  std::size_t peak = 0;
  for (std::size_t q = 1; q < 511; ++q) {
    if (std::abs(c2[q]) > std::abs(c2[peak])) peak = q;
  }
  // corr[q] = sum conj(base[k]) shifted[(k+q)] = sum conj(base[k]) base[(k+q+17)]
  // peaks where q+17 = 511
  CHECK(peak == 511 - 17);
  CHECK_THROWS_AS(circ_corr_transform(cvec(510), cvec(511)), rx::BadLength);
}

TEST_CASE("coarse detection: clean preamble at offset 100") {
  const SampleStream stream = make_stream(42, 100, {0, 0.0});
  const CoarseSync sync = coarse_detect(stream);
  CHECK(sync.start_index == 100);
  CHECK(std::abs(sync.ffo_hat) < 1e-9);
  CHECK(sync.metric_peak == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("coarse detection: fractional CFO estimate") {
  for (int m : {0, 2, -4}) {
    const SampleStream stream = make_stream(7, 300, {m, 0.3});
    const CoarseSync sync = coarse_detect(stream);
    CHECK(sync.start_index == 300);
    CHECK(sync.ffo_hat == doctest::Approx(0.3).epsilon(1e-6));
  }
  // negative side of the range
  const SampleStream stream = make_stream(7, 300, {0, -0.49});
  CHECK(coarse_detect(stream).ffo_hat == doctest::Approx(-0.49).epsilon(1e-6));
}

TEST_CASE("coarse detection: pure noise raises NoPeak") {
  SampleStream noise;
  noise.samples.assign(4096, cplx{0, 0});
  rng::Stream rng(3);
  noise = chan::add_awgn_with_power(noise, 1.0, 0.0, rng);
  CHECK_THROWS_AS(coarse_detect(noise), NoPeak);
}

TEST_CASE("coarse detection rejects short streams") {
  SampleStream s;
  s.samples.assign(2000, cplx{0, 0});
  CHECK_THROWS_AS(coarse_detect(s), Error);
}

TEST_CASE("extract_and_transform: noiseless loopback is exact") {
  const SpectrumFrame sent = txgen::build_spectrum(cs().d_a, cs().d_b, 7);
  const SampleStream stream = make_stream(7, 200, {0, 0.0});
  CoarseSync sync{200, 0.0, 1.0};
  const SpectrumFrame got = extract_and_transform(stream, sync);
  CHECK(testhelp::max_abs_diff(got.bins, sent.bins) < 1e-9);
}

TEST_CASE("extract_and_transform: integer CFO shows as a circular shift") {
  const SpectrumFrame sent = txgen::build_spectrum(cs().d_a, cs().d_b, 19);
  const SampleStream stream = make_stream(19, 200, {-2, 0.0});
  CoarseSync sync{200, 0.0, 1.0};
  const SpectrumFrame got = extract_and_transform(stream, sync);
  // X_hat[k] = X[(k - m) mod N] with m = -2, up to a constant phase
  double dev = 0.0;
  for (std::size_t k = 0; k < 1024; ++k) {
    dev = std::max(dev, std::abs(std::abs(got.bins[k]) -
                                 std::abs(sent.bins[(k + 2) % 1024])));
  }
  CHECK(dev < 1e-9);
}

TEST_CASE("extract_and_transform: uncorrected half-bin CFO degrades peak bins") {
  const SampleStream stream = make_stream(19, 200, {0, 0.5});
  CoarseSync sync{200, 0.0, 1.0};  // force zero FFO compensation
  const SpectrumFrame got = extract_and_transform(stream, sync);
  double peak = 0.0;
  for (const auto& b : got.bins) peak = std::max(peak, std::abs(b));
  CHECK(peak < 1.0);

  CoarseSync late{stream.size() - 1500, 0.0, 1.0};
  CHECK_THROWS_AS(extract_and_transform(stream, late), OutOfBounds);
}

TEST_CASE("diff_demod basics") {
  SpectrumFrame ones;
  ones.bins.assign(1024, cplx{1, 0});
  const cvec y = diff_demod(ones);
  for (const auto& v : y) CHECK(std::abs(v - cplx{1, 0}) < 1e-15);

  const SpectrumFrame f = txgen::build_spectrum(cs().d_a, cs().d_b, 0);
  const cvec y2 = diff_demod(f);
  for (std::size_t k = 0; k < 510; ++k) {
    CHECK(std::abs(y2[k] - cplx{static_cast<double>(cs().d_c.chips[k]), 0.0}) < 1e-12);
  }
}

TEST_CASE("diff_demod is invariant to a global phase") {
  SpectrumFrame f = txgen::build_spectrum(cs().d_a, cs().d_b, 250);
  const cvec y1 = diff_demod(f);
  for (auto& b : f.bins) b *= std::polar(1.0, 1.9);
  const cvec y2 = diff_demod(f);
  CHECK(testhelp::max_abs_diff(y1, y2) < 1e-12);
}

TEST_CASE("estimate_ifo: noiseless peak and fold boundary") {
  SUBCASE("m = 0") {
    const SpectrumFrame x = txgen::build_spectrum(cs().d_a, cs().d_b, 100);
    auto [m, prof] = estimate_ifo(diff_demod(x), x, cs().d_c);
    CHECK(m == 0);
    CHECK(std::abs(prof.values[prof.peak_index]) == doctest::Approx(1.0).epsilon(0.01));
  }
  SUBCASE("m = -512 lands on the fold boundary") {
    const SampleStream stream = make_stream(100, 200, {-512, 0.0});
    CoarseSync sync{200, 0.0, 1.0};
    const SpectrumFrame x = extract_and_transform(stream, sync);
    auto [m, prof] = estimate_ifo(diff_demod(x), x, cs().d_c);
    CHECK(m == -512);
    CHECK(prof.peak_index == 512);
  }
}

TEST_CASE("estimate_ifo at 3 dB AWGN: dominant peak at m = 5") {
  const SampleStream stream = make_stream(33, 400, {5, 0.0}, 3.0, 77);
  CoarseSync sync{400, 0.0, 1.0};
  const SpectrumFrame x = extract_and_transform(stream, sync);
  auto [m, prof] = estimate_ifo(diff_demod(x), x, cs().d_c);
  CHECK(m == 5);
  CHECK(prof.peak_ratio > 2.0);
  // sidelobes stay near zero
  double side = 0.0;
  for (std::size_t l = 0; l < prof.values.size(); ++l) {
    if (l != prof.peak_index) side = std::max(side, std::abs(prof.values[l]));
  }
  CHECK(side < 0.3);
}

TEST_CASE("decode_signaling: noiseless recovery for every delta_phi") {
  for (int dphi = 0; dphi < 511; ++dphi) {
    const SpectrumFrame x = txgen::build_spectrum(cs().d_a, cs().d_b, dphi);
    auto [got, prof] = decode_signaling(x, cs().d_d);
    REQUIRE(got == dphi);
    CHECK(std::abs(prof.values[prof.peak_index]) == doctest::Approx(1.0).epsilon(0.01));
  }
}

TEST_CASE("decode_signaling at 3 dB AWGN dominates all wrong shifts") {
  const SampleStream stream = make_stream(321, 400, {0, 0.0}, 3.0, 13);
  CoarseSync sync{400, 0.0, 1.0};
  const SpectrumFrame x = extract_and_transform(stream, sync);
  auto [got, prof] = decode_signaling(x, cs().d_d);
  CHECK(got == 321);
  CHECK(prof.peak_ratio > 1.5);
}

TEST_CASE("full chain: noiseless sweep over all signaling values") {
  for (int dphi = 0; dphi < 511; dphi += 1) {
    const SampleStream stream = make_stream(dphi, 600, {3, 0.25});
    const DetectionReport rep = detect(stream, cs());
    REQUIRE(rep.m_int_hat == 3);
    REQUIRE(rep.delta_phi_hat == dphi);
  }
}

TEST_CASE("ambiguity flag trips on a flat profile") {
  SpectrumFrame flat;
  flat.bins.assign(1024, cplx{1, 0});
  auto [m, prof] = estimate_ifo(diff_demod(flat), flat, cs().d_c, 1.1);
  (void)m;
  CHECK(prof.ambiguous);
}

}  // TEST_SUITE

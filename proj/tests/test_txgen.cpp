#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "plab/fft.hpp"
#include "plab/rng.hpp"
#include "plab/seq.hpp"
#include "plab/txgen.hpp"

using namespace plab;
using namespace plab::txgen;

namespace {
const seq::CarrierSet& cs() {
  static const seq::CarrierSet s = seq::default_carrier_set();
  return s;
}
}  // namespace

TEST_SUITE("txgen") {

TEST_CASE("spectrum mapping indices") {
  SUBCASE("delta_phi 0") {
    const SpectrumFrame f = build_spectrum(cs().d_a, cs().d_b, 0);
    CHECK(f.bins[512] == cplx{static_cast<double>(cs().d_b.chips[0]), 0.0});
    CHECK(f.bins[1022] == cplx{static_cast<double>(cs().d_b.chips[510]), 0.0});
  }
  SUBCASE("delta_phi 5") {
    const SpectrumFrame f = build_spectrum(cs().d_a, cs().d_b, 5);
    CHECK(f.bins[512] == cplx{static_cast<double>(cs().d_b.chips[5]), 0.0});
  }
  SUBCASE("reserved bins carry -1") {
    for (int dphi : {0, 5, 510}) {
      const SpectrumFrame f = build_spectrum(cs().d_a, cs().d_b, dphi);
      CHECK(f.bins[511] == cplx{-1.0, 0.0});
      CHECK(f.bins[1023] == cplx{-1.0, 0.0});
      for (const auto& b : f.bins) CHECK(std::abs(std::abs(b) - 1.0) < 1e-15);
    }
  }
}

TEST_CASE("spectrum rejects bad input") {
  CHECK_THROWS_AS(build_spectrum(cs().d_a, cs().d_b, 511), BadSignaling);
  CHECK_THROWS_AS(build_spectrum(cs().d_a, cs().d_b, -1), BadSignaling);
  BipolarSequence shorty;
  shorty.chips.assign(510, 1);
  CHECK_THROWS_AS(build_spectrum(shorty, cs().d_b, 0), BadLength);
}

TEST_CASE("spectrum is injective in delta_phi") {
  const SpectrumFrame a = build_spectrum(cs().d_a, cs().d_b, 17);
  for (int other : {0, 16, 18, 200, 510}) {
    const SpectrumFrame b = build_spectrum(cs().d_a, cs().d_b, other);
    CHECK(testhelp::max_abs_diff(a.bins, b.bins) > 0.5);
  }
}

TEST_CASE("preamble assembly: three-way segment equality, bit exact") {
  const SpectrumFrame f = build_spectrum(cs().d_a, cs().d_b, 123);
  const SampleStream p = assemble_preamble(f);
  REQUIRE(p.size() == 2048);
  for (std::size_t i = 0; i < 512; ++i) {
    CHECK(p.samples[i] == p.samples[i + 1024]);
    CHECK(p.samples[i] == p.samples[i + 1536]);
  }
}

TEST_CASE("impulse spectrum gives a constant 1/32 body") {
  SpectrumFrame f;
  f.bins.assign(1024, cplx{0.0, 0.0});
  f.bins[0] = 1.0;
  const SampleStream p = assemble_preamble(f);
  for (const auto& s : p.samples) CHECK(std::abs(s - cplx{1.0 / 32.0, 0.0}) < 1e-15);
}

TEST_CASE("body power is one per sample and Parseval holds") {
  const SpectrumFrame f = build_spectrum(cs().d_a, cs().d_b, 42);
  const SampleStream p = assemble_preamble(f);
  double body = 0.0;
  for (std::size_t i = 512; i < 1536; ++i) body += std::norm(p.samples[i]);
  CHECK(body / 1024.0 == doctest::Approx(1.0).epsilon(1e-12));
  double spec_e = 0.0;
  for (const auto& b : f.bins) spec_e += std::norm(b);
  CHECK(std::abs(body - spec_e) / spec_e < 1e-12);
}

TEST_CASE("p1 baseline structure") {
  SampleStream body;
  body.samples.assign(1024, cplx{1.0, 0.0});
  const SampleStream p = build_p1_baseline(body);
  REQUIRE(p.size() == 2048);
  CHECK(std::abs(p.samples[0] - cplx{1.0, 0.0}) < 1e-15);  // n = 0 phase factor
  for (std::size_t n = 542; n < 1566; ++n) CHECK(p.samples[n] == cplx{1.0, 0.0});
  const cplx want = std::polar(1.0, 2.0 * std::numbers::pi * 1566.0 / 1024.0);
  CHECK(std::abs(p.samples[1566] - want) < 1e-12);

  SUBCASE("frequency shift preserves magnitudes") {
    rng::Stream rng(3);
    SampleStream b2;
    for (int i = 0; i < 1024; ++i) b2.samples.push_back({rng.gaussian(), rng.gaussian()});
    const SampleStream p2 = build_p1_baseline(b2);
    for (std::size_t n = 0; n < 542; ++n) {
      CHECK(std::abs(p2.samples[n]) == doctest::Approx(std::abs(b2.samples[n])).epsilon(1e-12));
    }
    for (std::size_t n = 1566; n < 2048; ++n) {
      CHECK(std::abs(p2.samples[n]) ==
            doctest::Approx(std::abs(b2.samples[n - 1024])).epsilon(1e-12));
    }
  }

  SampleStream wrong;
  wrong.samples.assign(100, cplx{1.0, 0.0});
  CHECK_THROWS_AS(build_p1_baseline(wrong), BadLength);
}

TEST_CASE("papr basics") {
  SampleStream flat;
  flat.samples.assign(2048, std::polar(0.7, 0.3));
  CHECK(papr_db(flat) == doctest::Approx(0.0).epsilon(1e-12));

  SampleStream spike;
  spike.samples.assign(2048, cplx{0.0, 0.0});
  spike.samples[100] = 1.0;
  CHECK(papr_db(spike) == doctest::Approx(10.0 * std::log10(2048.0)).epsilon(1e-12));

  SampleStream empty;
  CHECK_THROWS_AS(papr_db(empty), EmptySignal);
  SampleStream zeros;
  zeros.samples.assign(16, cplx{0.0, 0.0});
  CHECK_THROWS_AS(papr_db(zeros), ZeroSignal);
}

TEST_CASE("papr is invariant under complex scaling") {
  const SpectrumFrame f = build_spectrum(cs().d_a, cs().d_b, 99);
  SampleStream p = assemble_preamble(f);
  const double base = papr_db(p);
  for (auto& s : p.samples) s *= std::polar(3.7, 1.234);
  CHECK(papr_db(p) == doctest::Approx(base).epsilon(1e-12));
}

}  // TEST_SUITE

#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "plab/seq.hpp"

using namespace plab;
using namespace plab::seq;

TEST_SUITE("seq") {

TEST_CASE("degree-9 m-sequence has maximal period and balance") {
  const BipolarSequence s = gen_mseq(LfsrSpec{});
  REQUIRE(s.length() == 511);
  int minus = 0;
  for (auto c : s.chips) {
    CHECK((c == 1 || c == -1));
    if (c == -1) ++minus;
  }
  CHECK(minus == 256);

  // no proper sub-period
  for (std::size_t p : {7u, 73u, 511u / 7u}) {
    bool repeats = true;
    for (std::size_t k = 0; k + p < 511; ++k) {
      if (s.chips[k] != s.chips[k + p]) {
        repeats = false;
        break;
      }
    }
    CHECK_FALSE(repeats);
  }
}

TEST_CASE("circular autocorrelation is -1 off peak") {
  const BipolarSequence s = gen_mseq(LfsrSpec{});
  const auto corr = testhelp::brute_bipolar_corr(s, s);
  CHECK(corr[0] == 511);
  for (std::size_t l = 1; l < 511; ++l) CHECK(corr[l] == -1);
}

TEST_CASE("zero state raises ZeroState") {
  LfsrSpec spec;
  spec.initial_state = 0;
  CHECK_THROWS_AS(gen_mseq(spec), ZeroState);
}

TEST_CASE("non-primitive polynomial is detected") {
  LfsrSpec spec;
  spec.feedback_taps = {9, 3};  // x^9 + x^3 + 1 is not primitive
  CHECK_THROWS_AS(gen_mseq(spec), NonPrimitivePolynomial);
}

TEST_CASE("decimation by 3 yields the preferred pair") {
  const BipolarSequence c = gen_mseq(LfsrSpec{});
  const BipolarSequence d = decimate(c, 3);
  const auto corr = testhelp::brute_bipolar_corr(c, d);
  std::set<long> values(corr.begin(), corr.end());
  CHECK(values == std::set<long>{-33, -1, 31});
}

TEST_CASE("decimation step 1 is the identity") {
  const BipolarSequence c = gen_mseq(LfsrSpec{});
  const BipolarSequence d = decimate(c, 1);
  CHECK(d.chips == c.chips);
}

TEST_CASE("non-coprime step raises") {
  const BipolarSequence c = gen_mseq(LfsrSpec{});
  CHECK_THROWS_AS(decimate(c, 511), NonCoprimeStep);
  CHECK_THROWS_AS(decimate(c, 7), NonCoprimeStep);  // 511 = 7 * 73
}

TEST_CASE("integration round trip for both init signs") {
  const BipolarSequence d = gen_mseq(LfsrSpec{});
  for (int init : {+1, -1}) {
    const BipolarSequence a = integrate_differential(d, init);
    CHECK(a.chips[0] == init);
    CHECK(differential_of(a).chips == d.chips);
  }
}

TEST_CASE("integration of all-ones is all-ones") {
  BipolarSequence d;
  d.chips.assign(511, 1);
  const BipolarSequence a = integrate_differential(d, +1);
  CHECK(std::all_of(a.chips.begin(), a.chips.end(), [](int c) { return c == 1; }));
}

TEST_CASE("odd chip product is not closable") {
  BipolarSequence d = gen_mseq(LfsrSpec{});
  d.chips[100] = static_cast<std::int8_t>(-d.chips[100]);
  CHECK_THROWS_AS(integrate_differential(d, +1), NotClosable);
}

TEST_CASE("differential of an alternating sequence is all -1") {
  BipolarSequence a;
  for (int i = 0; i < 510; ++i) a.chips.push_back(i % 2 == 0 ? 1 : -1);
  const BipolarSequence d = differential_of(a);
  for (auto c : d.chips) CHECK(c == -1);
}

TEST_CASE("default carrier set is internally consistent") {
  const CarrierSet cs = default_carrier_set();
  CHECK(differential_of(cs.d_a).chips == cs.d_c.chips);
  CHECK(differential_of(cs.d_b).chips == cs.d_d.chips);
  CHECK(cs.d_a.chips[0] == 1);
  CHECK(cs.d_b.chips[0] == 1);
}

}  // TEST_SUITE

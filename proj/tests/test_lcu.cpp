#include <bit>
#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "phi4/errors.hpp"
#include "phi4/lcu.hpp"

using namespace phi4;
using phi4::test::lattice;

namespace {

void check_exact(const LcuDecomposition& d) {
  const auto target = diagonal_target(d.k, d.power);
  const auto got = d.reconstruct_scaled();
  REQUIRE(got.size() == target.size());
  for (std::size_t b = 0; b < got.size(); ++b) CHECK(got[b] == d.denom * target[b]);
  double l1 = 0.0;
  for (std::size_t i = 0; i < d.terms.size(); ++i) l1 += std::abs(d.coeff(i));
  CHECK(l1 == doctest::Approx(d.l1));
  for (const LcuTerm& t : d.terms)
    for (int v : t.unitary.diagonal()) CHECK((v == 1 || v == -1));
}

}  // namespace

TEST_SUITE("lcu") {
  TEST_CASE("diagonal targets") {
    CHECK(diagonal_target(2, 1) == std::vector<std::int64_t>{-1, 0, 1, 2});
    CHECK(diagonal_target(2, 2) == std::vector<std::int64_t>{1, 0, 1, 4});
  }

  TEST_CASE("exact reconstruction for every family") {
    for (int k : {2, 4, 8, 16})
      for (int p : {1, 2, 4}) {
        CAPTURE(k);
        CAPTURE(p);
        check_exact(lcu_equal_weight(k, p));
        check_exact(lcu_z_binary(k, p));
        if (p != 1) check_exact(lcu_signature(k, p));
      }
  }

  TEST_CASE("equal-weight family shape") {
    const LcuDecomposition d = lcu_equal_weight_phi(2);
    CHECK(d.terms.size() == 4);
    for (std::size_t i = 0; i < d.terms.size(); ++i) CHECK(d.coeff(i) == 0.5);
    CHECK(d.l1 == 2.0);
    // threshold 0 is the all-plus unitary
    bool found = false;
    for (const LcuTerm& t : d.terms)
      if (t.unitary.threshold == 0) {
        found = true;
        for (int v : t.unitary.diagonal()) CHECK(v == 1);
      }
    CHECK(found);
    CHECK(lcu_equal_weight_phi2(4).terms.size() == 2 * 16);
    CHECK(lcu_equal_weight_phi4(2).terms.size() == 2 * 16);
    for (int k : {2, 4, 8, 16}) CHECK(lcu_equal_weight_phi(k).l1 == doctest::Approx(k));
  }

  TEST_CASE("z-binary norms and term counts") {
    CHECK(lcu_z_binary(4, 1).l1 == doctest::Approx(4));
    CHECK(lcu_z_binary(4, 2).l1 == doctest::Approx(16));
    CHECK(lcu_z_binary(4, 4).l1 == doctest::Approx(256));
    CHECK(lcu_z_binary(4, 2).terms.size() == 7);
    for (int k : {2, 8, 16}) {
      CHECK(lcu_z_binary(k, 1).l1 == doctest::Approx(k));
      CHECK(lcu_z_binary(k, 2).l1 == doctest::Approx(double(k) * k));
      CHECK(lcu_z_binary(k, 4).l1 == doctest::Approx(std::pow(k, 4)));
    }
    CHECK_THROWS_AS(lcu_z_binary(6, 1), Error);
  }

  TEST_CASE("signature family") {
    const LcuDecomposition d = lcu_signature(2, 2);
    std::set<int> bits;
    for (const LcuTerm& t : d.terms)
      if (t.unitary.kind == UnitaryDescriptor::Kind::signature_bits) bits.insert(t.unitary.bit);
    CHECK(bits == std::set<int>{1, 3});

    for (int k : {4, 8, 16}) {
      const LcuDecomposition s2 = lcu_signature(k, 2);
      const LcuDecomposition s4 = lcu_signature(k, 4);
      const int lk = ilog2(k);
      CHECK(s2.non_identity_count() <= static_cast<std::size_t>(1 + 2 * lk));
      CHECK(s4.non_identity_count() <= static_cast<std::size_t>(1 + 4 * lk));
      for (const LcuTerm& t : s2.terms)
        if (t.unitary.kind == UnitaryDescriptor::Kind::signature_bits && t.unitary.bit == 1) {
          const auto diag = t.unitary.diagonal();
          for (std::size_t b = 1; b < diag.size(); ++b) CHECK(diag[b] == -diag[b - 1]);
        }
      for (const LcuTerm& t : s4.terms)
        if (t.unitary.kind == UnitaryDescriptor::Kind::signature_bits) {
          CHECK(t.unitary.bit != 2);
          CHECK(t.unitary.bit != 3);
          CHECK(t.unitary.bit != 4);
        }
    }
    CHECK_THROWS_AS(lcu_signature(6, 2), Error);
  }

  TEST_CASE("walsh coefficients invert") {
    for (int p : {1, 2, 4}) {
      const auto diag = diagonal_target(4, p);
      const auto w = walsh_coefficients(diag);
      for (std::size_t b = 0; b < diag.size(); ++b) {
        std::int64_t acc = 0;
        for (const auto& [mask, c] : w) acc += (std::popcount(static_cast<std::uint32_t>(b) & mask) % 2 ? -c : c);
        CHECK(acc == static_cast<std::int64_t>(diag.size()) * diag[b]);
      }
    }
  }

  TEST_CASE("bit pattern census rows") {
    CHECK(bit_pattern_census(2, 127, 14).size() == 37);
    CHECK(bit_pattern_census(2, 127, 2).empty());
    CHECK(bit_pattern_census(2, 127, 1).size() == 64);
    CHECK(bit_pattern_census(2, 127, 15).size() == 1);
    CHECK(bit_pattern_census(4, 127, 8).size() == 32);
    CHECK(bit_pattern_census(4, 127, 28).size() == 20);
  }

  TEST_CASE("binary pattern characterization and reflection symmetry") {
    for (std::uint64_t n = 1; n <= 4096; ++n)
      for (int bit = 1; bit <= 24; ++bit) {
        CHECK(bin_intg_holds(n * n, bit));
        CHECK(bin_pattern_iff(2, n, bit));
        CHECK(bin_pattern_iff(4, n, bit));
      }
    for (int bit = 2; bit <= 16; ++bit) CHECK(reflection_symmetric(2, bit));
  }

  TEST_CASE("l1 norm closed forms") {
    LatticeParams p = lattice(1.0, 4, 1.0, 1, true);
    AmplitudeCutoffs c = make_amp_cutoffs(4, std::sqrt(std::numbers::pi / 4));
    CHECK(l1_norm_hamp(p, c, L1Variant::equal_weight) == doctest::Approx(302.8).epsilon(1e-3));

    // quartic piece vanishes at zero coupling
    const LatticeParams p0 = lattice(0.0, 4, 1.0, 1, true);
    const AmplitudeCutoffs c16 = make_amp_cutoffs(16);
    const double base = l1_norm_hamp(p0, c16, L1Variant::z_binary_decomposition);
    const double D2 = c16.delta_phi * c16.delta_phi;
    CHECK(base == doctest::Approx(4 * (256 * (9.0 / 3.0) * D2 - 16 * 3 * D2 + D2 * 3.0 / 6.0)));

    // signature variant at |Omega|=2, k=4, Lambda=0
    const LatticeParams p2 = lattice(0.0, 2, 1.0, 1, true);
    const double want = 2.0 / 4.0 * (16 * (std::numbers::pi / 4) * 4) + 0.75 * 2 * (std::numbers::pi / 4) * 16;
    CHECK(l1_norm_hamp(p2, c, L1Variant::signature_decomposition) == doctest::Approx(want));
  }

  TEST_CASE("json export") {
    const std::string j = lcu_z_binary(2, 1).to_json();
    CHECK(j.find("coeff") != std::string::npos);
    CHECK(j.find("kind") != std::string::npos);
    CHECK(j.find("payload") != std::string::npos);
  }
}

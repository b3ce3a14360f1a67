#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "phi4/amp_model.hpp"
#include "phi4/dynamics.hpp"
#include "phi4/errors.hpp"

using namespace phi4;
using phi4::test::lattice;

namespace {

std::vector<double> eigs(const DenseOperator& H) {
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(H);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

}  // namespace

TEST_SUITE("amp_model") {
  TEST_CASE("harmonic ladder for a free site") {
    const LatticeParams p = lattice(0.0, 1, 1.0, 1, true);
    const AmpHamiltonian h = build_amp_hamiltonian(p, make_amp_cutoffs(8));
    const auto e = eigs(h.dense);
    const double g1 = e[1] - e[0], g2 = e[2] - e[1], g3 = e[3] - e[2];
    CHECK(g2 / g1 == doctest::Approx(1.0).epsilon(0.05));
    CHECK(g3 / g1 == doctest::Approx(1.0).epsilon(0.05));
  }

  TEST_CASE("momentum block is the Fourier conjugate of the field block") {
    for (int k : {2, 4, 8}) {
      const SiteBlocks b = site_blocks(make_amp_cutoffs(k));
      CHECK((b.F.adjoint() * b.F - DenseOperator::Identity(2 * k, 2 * k)).norm() < 1e-12);
      CHECK((b.pi - b.F.adjoint() * b.phi * b.F).norm() < 1e-12);
      CHECK((b.pi2 - b.F.adjoint() * b.phi2 * b.F).norm() < 1e-12);
      CHECK((b.phi2 - b.phi * b.phi).norm() < 1e-12);
    }
  }

  TEST_CASE("dense Hamiltonian equals independent block assembly") {
    const LatticeParams p = lattice(1.0, 2, 1.0, 1, true);
    const AmplitudeCutoffs c = make_amp_cutoffs(2);
    const AmpHamiltonian h = build_amp_hamiltonian(p, c);
    const SiteBlocks b = site_blocks(c);
    const long dl = 2 * c.k;
    // two sites, periodic: each of the 2 edges couples site 0 and site 1
    const DenseOperator I = DenseOperator::Identity(dl, dl);
    auto kron = [](const DenseOperator& A, const DenseOperator& B) {
      DenseOperator K(A.rows() * B.rows(), A.cols() * B.cols());
      for (long i = 0; i < A.rows(); ++i)
        for (long j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
      return K;
    };
    const double c2 = (p.M * p.M + p.d + 1) / 2.0, c4 = p.Lambda / 24.0;
    const DenseOperator site = 0.5 * b.pi2 + c2 * b.phi2 + c4 * b.phi4;
    DenseOperator ref = kron(site, I) + kron(I, site) - 2.0 * kron(b.phi, b.phi);
    CHECK(is_hermitian(h.dense));
    // site ordering convention does not matter for this symmetric pair
    CHECK((h.dense - ref).norm() < 1e-12);
  }

  TEST_CASE("phi_max") {
    LatticeParams p = lattice(0.0, 4, 1.0, 1, true);
    CHECK(phi_max_for_energy(10.0, 0.01, p) == doctest::Approx(std::pow(0.1 / 22.0, 0.25)));
    CHECK(phi_max_for_energy(10.0, 0.01, p) == doctest::Approx(0.2596).epsilon(1e-3));
    CHECK(phi_max_for_energy(22.0, 1.0 - 1e-12, p) == doctest::Approx(1.0));
    CHECK_THROWS_AS(phi_max_for_energy(0.0, 0.01, p), Error);
    double prev = 1e9;
    for (double lam : {0.0, 1.0, 10.0, 100.0, 1e4}) {
      const double v = phi_max_for_energy(10.0, 0.01, lattice(lam, 4, 1.0, 1, true));
      CHECK(v < prev);
      prev = v;
    }
    CHECK(phi_max_for_energy(20.0, 0.01, p) > phi_max_for_energy(10.0, 0.01, p));
    CHECK(phi_max_for_energy(10.0, 0.02, p) > phi_max_for_energy(10.0, 0.01, p));
    CHECK(phi_max_for_energy(10.0, 0.01, lattice(0.0, 8, 1.0, 1, true)) < phi_max_for_energy(10.0, 0.01, p));
  }

  TEST_CASE("sector projector") {
    for (int k : {2, 4}) {
      SectorProjector U{k, 2, +1};
      const DenseOperator u = U.dense();
      CHECK((u * u - DenseOperator::Identity(u.rows(), u.cols())).norm() < 1e-14);
      const DenseOperator Pp = 0.5 * (DenseOperator::Identity(u.rows(), u.cols()) + u);
      const DenseOperator Pm = 0.5 * (DenseOperator::Identity(u.rows(), u.cols()) - u);
      CHECK((Pp * Pp - Pp).norm() < 1e-14);
      CHECK((Pp * Pm).norm() < 1e-14);
    }
  }

  TEST_CASE("free single site: even ground state and odd first excitation") {
    const LatticeParams p = lattice(0.0, 1, 1.0, 1, true);
    const AmpHamiltonian h = build_amp_hamiltonian(p, make_amp_cutoffs(8));
    const SectorSpectra s = sector_split(h);
    REQUIRE(!s.even.empty());
    REQUIRE(!s.odd.empty());
    CHECK(s.even.front() < s.odd.front());
    std::vector<double> both = s.even;
    both.insert(both.end(), s.odd.begin(), s.odd.end());
    std::sort(both.begin(), both.end());
    REQUIRE(both.size() == s.symmetric.size());
    for (std::size_t i = 0; i < both.size(); ++i) CHECK(both[i] == doctest::Approx(s.symmetric[i]).epsilon(1e-9));
  }

  TEST_CASE("symmetric subspace commutes with the field flip") {
    const LatticeParams p = lattice(2.0, 2, 1.0, 1, true);
    const AmpHamiltonian h = build_amp_hamiltonian(p, make_amp_cutoffs(4));
    SectorProjector U{4, 2, +1};
    const auto basis = U.symmetric_basis();
    const long n = static_cast<long>(basis.size());
    DenseOperator Hs(n, n), Us(n, n);
    const DenseOperator u = U.dense();
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) {
        Hs(i, j) = h.dense(basis[i], basis[j]);
        Us(i, j) = u(basis[i], basis[j]);
      }
    CHECK((Hs * Us - Us * Hs).norm() < 1e-10);
  }

  TEST_CASE("double-well point has a near-degenerate sector pair") {
    // M^2 + d + 1 small and a large quartic coupling
    LatticeParams p = lattice(0.0, 1, 1.0, 1, true);
    p.M = std::sqrt(0.0);
    p.m = 0.0;
    FamilyWeights w = FamilyWeights::standard(p);
    w.phi2 = -6.0;
    w.phi4 = 1.0;
    const AmpHamiltonian h = build_amp_hamiltonian(p, make_amp_cutoffs(8), w);
    const SectorSpectra s = sector_split(h);
    const double split = std::abs(s.odd.front() - s.even.front());
    const double next = std::min(s.even[1], s.odd[1]) - std::max(s.even.front(), s.odd.front());
    CHECK(split < 1e-2 * next);
  }

  TEST_CASE("controlled negation cost") {
    CHECK(controlled_negation_cost(make_amp_cutoffs(4), 1).t == 16);
    CHECK(controlled_negation_cost(make_amp_cutoffs(2), 1).t == 4);
    CHECK(controlled_negation_cost(make_amp_cutoffs(4), 10).t == 160);
  }

  TEST_CASE("dense export round trip") {
    const LatticeParams p = lattice(1.0, 1, 1.0, 1, true);
    const AmpHamiltonian h = build_amp_hamiltonian(p, make_amp_cutoffs(4));
    const auto path = std::filesystem::temp_directory_path() / "phi4_dense_roundtrip.bin";
    export_dense(path.string(), h.dense);
    CHECK(std::filesystem::file_size(path) == 16 + 16 * static_cast<std::uintmax_t>(h.dense.size()));
    const DenseOperator back = import_dense(path.string());
    CHECK((back - h.dense).norm() == 0.0);
    std::filesystem::remove(path);
  }

  TEST_CASE("oracle cap") {
    const LatticeParams p = lattice(1.0, 4, 1.0, 1, true);
    CHECK_THROWS_AS(build_amp_hamiltonian(p, make_amp_cutoffs(16)), Error);
  }
}

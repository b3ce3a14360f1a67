#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "phi4/dynamics.hpp"
#include "phi4/errors.hpp"

using namespace phi4;
using phi4::test::lattice;

TEST_SUITE("dynamics") {
  TEST_CASE("commuting fragments are exact") {
    DenseOperator A = DenseOperator::Zero(4, 4), B = DenseOperator::Zero(4, 4);
    A.diagonal() << 1.0, -0.5, 2.0, 0.3;
    B.diagonal() << 0.2, 0.7, -1.0, 0.0;
    CHECK(trotter_error({A, B}, 0.3) < 1e-12);
    const ScalingFit f = trotter_error_scaling({A, B}, {0.01, 0.02, 0.05, 0.1});
    CHECK(f.skipped);
  }

  TEST_CASE("harmonic split has third-order defect") {
    const LatticeParams p = lattice(0.0, 1, 1.0, 1, true);
    const AmpHamiltonian h = build_amp_hamiltonian(p, make_amp_cutoffs(8));
    const auto fr = amplitude_fragments(h);
    const ScalingFit f = trotter_error_scaling(fr, {0.005, 0.01, 0.02, 0.05});
    CHECK(!f.skipped);
    CHECK(f.slope >= 2.8);
    CHECK(f.slope <= 3.2);
    const DenseOperator S = trotter_s2(fr, 0.1);
    CHECK((S.adjoint() * S - DenseOperator::Identity(S.rows(), S.cols())).norm() < 1e-10);
  }

  TEST_CASE("amplitude bound dominance") {
    for (int P : {1, 2}) {
      const LatticeParams p = lattice(1.0, P, 1.0, 1, true);
      const AmplitudeCutoffs c = make_amp_cutoffs(P == 1 ? 4 : 2);
      const AmpHamiltonian h = build_amp_hamiltonian(p, c);
      const double alpha = alpha_comm_amp(p, c);
      for (double tau : {0.02, 0.05, 0.1, 0.2}) CHECK(trotter_error(amplitude_fragments(h), tau) <= alpha * std::pow(tau, 3));
    }
  }

  TEST_CASE("occupation split has third-order defect") {
    const LatticeParams p = lattice(1.0, 2);
    const OccHamiltonian h = build_occ_hamiltonian(p, make_occ_cutoffs(2, p));
    const ScalingFit f = trotter_error_scaling(occupation_fragments(h), {0.005, 0.01, 0.02, 0.05});
    CHECK(f.slope >= 2.8);
    CHECK(f.slope <= 3.2);
  }

  TEST_CASE("exact evolution conserves energy") {
    const LatticeParams p = lattice(1.0, 2, 1.0, 1, true);
    const AmpHamiltonian h = build_amp_hamiltonian(p, make_amp_cutoffs(2));
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(h.dense.rows());
    for (long i = 0; i < psi.size(); ++i) psi(i) = std::complex<double>(std::cos(0.3 * i), std::sin(0.7 * i));
    psi.normalize();
    const double e0 = (psi.adjoint() * h.dense * psi)(0).real();
    for (double t : {0.5, 1.0, 3.0}) {
      const Eigen::VectorXcd phi = expm_hermitian(h.dense, t) * psi;
      CHECK(std::abs((phi.adjoint() * h.dense * phi)(0).real() - e0) < 1e-10);
    }
  }

  TEST_CASE("input validation") {
    DenseOperator A = DenseOperator::Zero(2, 2);
    A(0, 1) = 1.0;
    CHECK_THROWS_AS(trotter_s2({A}, 0.1), Error);
    DenseOperator B = DenseOperator::Identity(2, 2);
    CHECK_THROWS_AS(trotter_error_scaling({B, B}, {0.1, 0.2}), Error);
  }

  TEST_CASE("sector spectrum of a free site") {
    const LatticeParams p = lattice(0.0, 1, 1.0, 1, true);
    const AmpHamiltonian h = build_amp_hamiltonian(p, make_amp_cutoffs(8));
    const SpectrumResult s = sector_spectrum(h);
    const double w = std::sqrt(p.M * p.M + 2.0 * p.d * (1.0 - std::cos(0.0)));
    CHECK(s.odd_gap == doctest::Approx(w).epsilon(0.05));
    CHECK(s.even_gap == doctest::Approx(2 * w).epsilon(0.05));
    CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
    CHECK(s.sectors.size() == s.eigenvalues.size());
    const std::string csv = spectrum_csv(s);
    CHECK(csv.rfind("index,eigenvalue,sector", 0) == 0);
  }

  TEST_CASE("interacting pair gaps move with the coupling") {
    double prev = 0.0;
    for (double lam : {0.0, 1.0, 4.0}) {
      const SpectrumResult s = sector_spectrum(build_amp_hamiltonian(lattice(lam, 2, 1.0, 1, true), make_amp_cutoffs(4)));
      CHECK(s.odd_gap > prev);
      prev = s.odd_gap;
    }
  }
}

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "phi4/dynamics.hpp"
#include "phi4/errors.hpp"
#include "phi4/occ_model.hpp"

using namespace phi4;
using phi4::test::lattice;

namespace {

// Truncated annihilation operator on 0..N.
Eigen::MatrixXd ladder_a(int N) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int n = 1; n <= N; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

DenseOperator on_unary(const PauliSum& s, int N) { return to_dense_subspace(s, UnaryLayout{1, N + 1}.basis()); }

}  // namespace

TEST_SUITE("occ_model") {
  TEST_CASE("ladder mapping small cases") {
    PauliSum want(2);
    want.add(0.5, {{0, Pauli::X}, {1, Pauli::X}});
    want.add(0.5, {{0, Pauli::Y}, {1, Pauli::Y}});
    CHECK((to_dense(map_ladder(0, 1, 0, 1)) - to_dense(want)).norm() < 1e-14);

    PauliSum want2(3);
    want2.add(0.5 * std::sqrt(2.0), {{0, Pauli::X}, {2, Pauli::X}});
    want2.add(0.5 * std::sqrt(2.0), {{0, Pauli::Y}, {2, Pauli::Y}});
    CHECK((to_dense(map_ladder(0, 2, 0, 2)) - to_dense(want2)).norm() < 1e-14);

    PauliSum want3(3);
    want3.add(0.5 * std::sqrt(2.0), {{1, Pauli::X}, {2, Pauli::X}});
    want3.add(0.5 * std::sqrt(2.0), {{1, Pauli::Y}, {2, Pauli::Y}});
    CHECK((to_dense(map_ladder(0, 1, 1, 2)) - to_dense(want3)).norm() < 1e-14);

    CHECK_THROWS_AS(map_ladder(0, 3, 0, 2), Error);
  }

  TEST_CASE("ladder mapping agrees with truncated Fock matrices") {
    for (int N = 1; N <= 4; ++N)
      for (int m = 1; m <= N; ++m)
        for (int r = 0; r <= 2; ++r) {
          const Eigen::MatrixXd a = ladder_a(N);
          Eigen::MatrixXd am = Eigen::MatrixXd::Identity(N + 1, N + 1);
          for (int i = 0; i < m; ++i) am = am * a;
          Eigen::MatrixXd nr = Eigen::MatrixXd::Identity(N + 1, N + 1);
          for (int i = 0; i < r; ++i) nr = nr * (a.transpose() * a);
          const Eigen::MatrixXd ref = am.transpose() * nr + nr * am;
          const DenseOperator got = on_unary(map_ladder(0, m, r, N), N);
          CHECK((got.real() - ref).cwiseAbs().maxCoeff() < 1e-12);
          CHECK(got.imag().cwiseAbs().maxCoeff() < 1e-14);
        }
  }

  TEST_CASE("free theory has only the quadratic part") {
    const LatticeParams p = lattice(0.0, 2);
    const OccupationCutoffs c = make_occ_cutoffs(2, p);
    const OccHamiltonian h = build_occ_hamiltonian(p, c);
    CHECK(h.h1.empty());
    CHECK(h.h2.empty());
    CHECK(h.h3.empty());
    CHECK(h.h4.empty());
    CHECK((to_dense(h.total) - to_dense(h.h0)).norm() < 1e-14);
  }

  TEST_CASE("single-mode quartic group matches the ladder expression") {
    const LatticeParams p = lattice(1.0, 1);
    const OccupationCutoffs c = make_occ_cutoffs(2, p);
    const OccHamiltonian h = build_occ_hamiltonian(p, c);
    const Eigen::MatrixXd a = ladder_a(2);
    const Eigen::MatrixXd ad = a.transpose(), n = ad * a;
    const Eigen::MatrixXd a2 = a * a, a4 = a2 * a2;
    const Eigen::MatrixXd ref =
        (1.0 / 96.0) * ((a4.transpose() + a4) + 4.0 * (a2.transpose() * n + n * a2) + 6.0 * (n * n - n));
    const DenseOperator got = to_dense_subspace(h.h4, h.layout.basis());
    CHECK((got.real() - ref).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("groups match the dense oracle and preserve the one-hot code") {
    for (int N : {1, 2, 3})
      for (int P : {1, 2}) {
        if (N == 3 && P == 2) continue;
        CAPTURE(N);
        CAPTURE(P);
        const LatticeParams p = lattice(1.0, P);
        const OccupationCutoffs c = make_occ_cutoffs(N, p);
        const OccHamiltonian h = build_occ_hamiltonian(p, c);
        const OccDenseGroups g = occ_dense_oracle(p, c);
        const auto basis = h.layout.basis();
        const PauliSum* hs[5] = {&h.h0, &h.h1, &h.h2, &h.h3, &h.h4};
        const DenseOperator* gs[5] = {&g.h0, &g.h1, &g.h2, &g.h3, &g.h4};
        PauliSum sum(h.total.n_qubits());
        for (int i = 0; i < 5; ++i) {
          sum += *hs[i];
          const DenseOperator full = to_dense(*hs[i]);
          CHECK(is_hermitian(full));
          CHECK((to_dense_subspace(*hs[i], basis) - *gs[i]).cwiseAbs().maxCoeff() < 1e-12);
          // leakage out of the code space
          double leak = 0.0;
          std::vector<bool> code(full.rows(), false);
          for (auto b : basis) code[b] = true;
          for (auto b : basis)
            for (long r = 0; r < full.rows(); ++r)
              if (!code[r]) leak = std::max(leak, std::abs(full(r, static_cast<long>(b))));
          CHECK(leak < 1e-14);
        }
        CHECK((to_dense(sum) - to_dense(h.total)).norm() < 1e-12);
      }
  }

  TEST_CASE("free spectrum on the code space") {
    const LatticeParams p = lattice(1.0, 2);
    const OccupationCutoffs c = make_occ_cutoffs(2, p);
    const OccHamiltonian h = build_occ_hamiltonian(p, c);
    const Dispersion d = dispersion_table(p);
    std::vector<double> want;
    for (int n0 = 0; n0 <= 2; ++n0)
      for (int n1 = 0; n1 <= 2; ++n1) want.push_back(n0 * d.omega[0] + n1 * d.omega[1]);
    std::sort(want.begin(), want.end());
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(to_dense_subspace(h.h0, h.layout.basis()));
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(es.eigenvalues()(static_cast<long>(i)) == doctest::Approx(want[i]));
  }

  TEST_CASE("gate counts per group") {
    auto counts = [](int N, int P) {
      const LatticeParams p = lattice(1.0, P);
      return gate_counts_occ(make_occ_cutoffs(N, p), p);
    };
    const OccGateReport a = counts(4, 4);
    CHECK(a.g1.crz == Rational(256));
    CHECK(a.g1.t == Rational(3072));
    CHECK(a.g1.cnot == Rational(8448));
    CHECK(a.g1.h == Rational(512));
    const OccGateReport b = counts(2, 2);
    CHECK(b.g3.crz == Rational(16));
    CHECK(b.g3.t == Rational(64));
    CHECK(b.g3.cnot == Rational(128));
    CHECK(b.g3.h == Rational(24));
    const OccGateReport c = counts(2, 3);
    CHECK(c.g4.rz == Rational(18));
    CHECK(c.g4.cnot == Rational(24));
    CHECK(c.g4.h == Rational(24));
    for (const GateCountOcc* g : {&a.total, &b.total, &c.total}) {
      CHECK(!(g->t < Rational(0)));
      CHECK(!(g->cnot < Rational(0)));
    }
  }

  TEST_CASE("commutator bound") {
    const LatticeParams free = lattice(0.0, 2);
    CHECK(alpha_comm_occ(free, make_occ_cutoffs(4, free)) == 0.0);

    const LatticeParams p0 = lattice(1.0, 2, 0.0);
    CHECK_THROWS_AS(alpha_comm_occ(p0, make_occ_cutoffs(2, p0)), Error);

    // large-N growth per doubling sits between the N^6 and N^7 laws
    const LatticeParams p = lattice(1.0, 2);
    const double r = alpha_comm_occ(p, make_occ_cutoffs(64, p)) / alpha_comm_occ(p, make_occ_cutoffs(32, p));
    CHECK(r > std::pow(2.0, 6) * 0.8);
    CHECK(r < std::pow(2.0, 7) * 1.2);

    // dominance over the measured Trotter defect
    const OccupationCutoffs c = make_occ_cutoffs(2, p);
    const OccHamiltonian h = build_occ_hamiltonian(p, c);
    const double alpha = alpha_comm_occ(p, c);
    CHECK(alpha > 0.0);
    const auto frags = occupation_fragments(h);
    for (double tau : {0.05, 0.1, 0.2}) CHECK(trotter_error(frags, tau) <= alpha * tau * tau * tau);
  }

  TEST_CASE("bound shrinks with beta") {
    const LatticeParams p = lattice(1.0, 2);
    const OccupationCutoffs c = make_occ_cutoffs(4, p);
    CHECK(alpha_comm_occ(p, c, 0.5) <= alpha_comm_occ(p, c, 1.0));
    CHECK_THROWS_AS(alpha_comm_occ(p, c, 1.5), Error);
  }
}

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "phi4/budget.hpp"
#include "phi4/errors.hpp"

using namespace phi4;
using phi4::test::lattice;

namespace {

constexpr double kPi = std::numbers::pi;

// least-squares slope of log total_t against log eps
double eps_slope(CostAlgorithm a, const LatticeParams& p, int cutoff, double lo, double hi) {
  CostOptions o;
  o.conjecture_iiib = true;
  const int n = 9;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double e = lo * std::pow(hi / lo, i / double(n - 1));
    const double x = std::log(e), y = std::log(total_cost(a, p, cutoff, e, o).total_t);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_SUITE("budget") {
  TEST_CASE("rotation synthesis cost") {
    CHECK(rz_synthesis_t(std::ldexp(1.0, -10)) == doctest::Approx(29.410).epsilon(1e-5));
    CHECK(rz_synthesis_t(1e-6) == doctest::Approx(3.067 * std::log2(2e6) - 4.327));
    CHECK(rz_synthesis_t(1e-6) == doctest::Approx(59.85).epsilon(1e-3));
    const RzCost big = rz_synthesis(2.0);
    CHECK(big.invalid_regime);
    CHECK(big.value == 0.0);
    CHECK_THROWS_AS(rz_synthesis(0.0), Error);
  }

  TEST_CASE("approximate QFT cost") {
    CHECK(aqft_t(4, 1e-3) == doctest::Approx(545.0).epsilon(2e-3));
    // l = log2(3e4) = 14.873, 24 l + l log2(l / 1e-4)
    CHECK(aqft_t(3, 1e-4) == doctest::Approx(612.49).epsilon(1e-4));
    // the second term dominates for a single qubit at small error
    const double l = std::log2(1.0 / 1e-12);
    CHECK(aqft_t(1, 1e-12) - 8 * l > 8 * l);
    CHECK_THROWS_AS(aqft_t(0.5, 1e-3), Error);
    CHECK_THROWS_AS(aqft_t(4, 1.5), Error);
  }

  TEST_CASE("qubitization phase-register size") {
    CHECK(budget_qubitization(100, 0.1, 10, 2).m == 12);
    CHECK(budget_qubitization(302.8, 0.01, 10, 2).m == 17);
    CHECK(budget_qubitization(1.0, kPi / std::sqrt(2.0), 1, 1).m == 0);
    const ErrorBudget b = budget_qubitization(50, 0.02, 1000, 8);
    CHECK(std::ldexp(1.0, b.m) >= kPi * 50 / (std::sqrt(2.0) * 0.02));
    CHECK(b.epsilon_r == doctest::Approx(0.02 / (3 * std::sqrt(2.0) * 50 * 1000)));
  }

  TEST_CASE("Trotter budget") {
    const ErrorBudget b = budget_trotter(1.0, 1e-2, 100, 0);
    CHECK(b.m == 13);
    CHECK(std::ldexp(1.0, b.m) <= kPi * kPi * 1e3);
    CHECK(b.tau == doctest::Approx(std::sqrt(1e-2 / std::pow(2.0, 1.5))));
    CHECK(b.epsilon_r == doctest::Approx(std::sqrt(2.0) * 1e-2 * b.tau / (8 * 100)));
    const ErrorBudget q = budget_trotter(1.0, 1e-2 / 4, 100, 0);
    CHECK(q.repetitions_bound / b.repetitions_bound == doctest::Approx(8.0));
    const ErrorBudget big = budget_trotter(1e4, 1e-2, 1e6, 0);
    CHECK(big.epsilon_r == doctest::Approx(std::sqrt(2.0) * 1e-2 * big.tau / (8 * 1e6)));
    CHECK_THROWS_AS(budget_trotter(0.0, 1e-2, 1, 1), Error);
  }

  TEST_CASE("produced budgets meet their phase-error target") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> la(-1, 6), le(-6, -1), ln(0, 6);
    for (int i = 0; i < 50; ++i) {
      const double alpha = std::pow(10, la(rng)), eps = std::pow(10, le(rng));
      const double Nr = std::floor(std::pow(10, ln(rng))), Nf = std::floor(std::pow(10, ln(rng) / 2));
      const ErrorBudget q = budget_qubitization(alpha, eps, Nr, Nf);
      CHECK(achieved_phase_error(q, Nr, Nf) <= q.epsilon_theta);
      for (TrotterVariant v : {TrotterVariant::occupation, TrotterVariant::aqft_aware}) {
        const ErrorBudget t = budget_trotter(alpha, eps, Nr, v == TrotterVariant::occupation ? 0 : Nf, v);
        CHECK(achieved_phase_error(t, Nr, v == TrotterVariant::occupation ? 0 : Nf) <= t.epsilon_theta);
      }
    }
  }

  TEST_CASE("report components add up") {
    CostOptions o;
    o.conjecture_iiib = true;
    const LatticeParams p = lattice(1.0, 8);
    for (CostAlgorithm a : {CostAlgorithm::occ_trotter, CostAlgorithm::amp_trotter, CostAlgorithm::I_equal_weight,
                            CostAlgorithm::IIIa_z_lcu, CostAlgorithm::IIIb_signature}) {
      const CostReport r = total_cost(a, p, a == CostAlgorithm::occ_trotter ? 2 : 8, 1e-2, o);
      CHECK(r.total_t == doctest::Approx(r.rotations + r.aqft + r.other));
      CHECK(r.rotations >= 0);
      CHECK(r.aqft >= 0);
      CHECK(r.other >= 0);
      CHECK(r.logical_qubits >= r.budget.m);
      const auto j = nlohmann::json::parse(r.to_json());
      CHECK(j.at("schema").get<int>() == kCostReportSchema);
      CHECK(parse_cost_algorithm(cost_algorithm_name(a)) == a);
    }
  }

  TEST_CASE("signature costing needs the conjecture flag") {
    try {
      total_cost(CostAlgorithm::IIIb_signature, lattice(1.0, 4), 8, 1e-2);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ConjectureFlagRequired);
    }
  }

  TEST_CASE("occupation cost grows like N^7 per doubling") {
    const LatticeParams p = lattice(1.0, 2);
    CHECK(std::isfinite(total_cost(CostAlgorithm::occ_trotter, p, 2, 0.1).total_t));
    const double r = total_cost(CostAlgorithm::occ_trotter, p, 32, 0.1).total_t /
                     total_cost(CostAlgorithm::occ_trotter, p, 16, 0.1).total_t;
    CHECK(std::log2(r) > 6.5);
    CHECK(std::log2(r) < 7.5);
  }

  TEST_CASE("epsilon slopes in the asymptotic window") {
    const LatticeParams p = lattice(1.0, 100);
    CHECK(eps_slope(CostAlgorithm::occ_trotter, p, 4, 1e-12, 1e-8) == doctest::Approx(-1.5).epsilon(0.05 / 1.5));
    CHECK(eps_slope(CostAlgorithm::amp_trotter, p, 16, 1e-12, 1e-8) == doctest::Approx(-1.5).epsilon(0.05 / 1.5));
    for (CostAlgorithm a : {CostAlgorithm::I_equal_weight, CostAlgorithm::IIIa_z_lcu, CostAlgorithm::IIIb_signature})
      CHECK(eps_slope(a, p, 16, 1e-12, 1e-8) == doctest::Approx(-1.0).epsilon(0.05));
  }

  TEST_CASE("monotone in epsilon, volume and cutoff") {
    CostOptions o;
    o.conjecture_iiib = true;
    for (CostAlgorithm a : {CostAlgorithm::amp_trotter, CostAlgorithm::I_equal_weight, CostAlgorithm::IIIa_z_lcu,
                            CostAlgorithm::IIIb_signature}) {
      double prev = INFINITY;
      for (double e : {1e-4, 1e-3, 1e-2, 1e-1}) {
        const double t = total_cost(a, lattice(1.0, 16), 16, e, o).total_t;
        CHECK(t <= prev);
        prev = t;
      }
      prev = 0;
      for (int P : {2, 4, 8, 16, 32}) {
        const double t = total_cost(a, lattice(1.0, P), 16, 1e-2, o).total_t;
        CHECK(t >= prev);
        prev = t;
      }
      prev = 0;
      for (int k : {4, 8, 16, 32, 64}) {
        const double t = total_cost(a, lattice(1.0, 16), k, 1e-2, o).total_t;
        CHECK(t >= prev);
        prev = t;
      }
    }
  }

  TEST_CASE("free theory scales inversely with epsilon for qubitized algorithms") {
    const LatticeParams p = lattice(0.0, 8);
    const CostReport a = total_cost(CostAlgorithm::I_equal_weight, p, 16, 1e-2);
    const CostReport b = total_cost(CostAlgorithm::I_equal_weight, p, 16, 1e-3);
    CHECK(b.budget.repetitions_bound / a.budget.repetitions_bound == doctest::Approx(10.0));
    CHECK(b.total_t > 10 * a.total_t * 0.99);
  }

  TEST_CASE("surface overlay") {
    SurfaceModel m;
    CostReport zero;
    zero.logical_qubits = 100;
    const CostReport z = surface_overlay(zero, m);
    REQUIRE(z.surface);
    const double d2 = double(z.surface->code_distance) * z.surface->code_distance;
    CHECK(z.surface->physical_qubits == doctest::Approx(100 * m.patch_factor * d2 * (1 + m.routing_overhead)));
    CHECK(z.surface->wallclock_seconds == 0.0);

    CostReport r;
    r.logical_qubits = 500;
    r.total_t = 1e10;
    int prev = 0;
    for (double pp : {1e-4, 2e-4, 4e-4, 8e-4, 1.6e-3, 3.2e-3}) {
      SurfaceModel mm = m;
      mm.p_phys = pp;
      const int d = surface_overlay(r, mm).surface->code_distance;
      CHECK(d >= prev);
      CHECK(d % 2 == 1);
      prev = d;
    }
    SurfaceModel bad = m;
    bad.p_phys = 0.02;
    CHECK_THROWS_AS(surface_overlay(r, bad), Error);
    bad = m;
    bad.d_max = 3;
    CHECK_THROWS_AS(surface_overlay(r, bad), Error);
  }

  TEST_CASE("headline instance is in the expected order of magnitude") {
    CostOptions o;
    o.surface = SurfaceModel{};
    const CostReport r = total_cost(CostAlgorithm::I_equal_weight, lattice(1.0, 100), 16, 1e-2, o);
    CHECK(r.total_t > 1e11);
    CHECK(r.total_t < 1e13);
    REQUIRE(r.surface);
    CHECK(r.surface->physical_qubits > 4e5);
    CHECK(r.surface->physical_qubits < 4e7);
  }

  TEST_CASE("QSVT query mode") {
    CostOptions o;
    o.qsvt = true;
    o.qsvt_time = 10.0;
    const CostReport r = total_cost(CostAlgorithm::IIIa_z_lcu, lattice(1.0, 4), 8, 1e-3, o);
    CHECK(r.qsvt_queries >= r.alpha * o.qsvt_time);
    CHECK_THROWS_AS(total_cost(CostAlgorithm::occ_trotter, lattice(1.0, 2), 2, 1e-3, o), Error);
  }
}

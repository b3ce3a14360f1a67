#pragma once

#include <optional>
#include <string>

#include "phi4/core.hpp"
#include "phi4/encoding.hpp"

namespace phi4 {

enum class CostAlgorithm { occ_trotter, amp_trotter, I_equal_weight, IIIa_z_lcu, IIIb_signature };
const char* cost_algorithm_name(CostAlgorithm a);
CostAlgorithm parse_cost_algorithm(const std::string& s);
bool is_qubitized(CostAlgorithm a);

struct RzCost {
  double value = 0.0;
  bool invalid_regime = false;  // formula went negative and was clamped to 0
};

// T gates per synthesised Rz, 3.067 log2(2/eps) - 4.327.
RzCost rz_synthesis(double eps_r);
double rz_synthesis_t(double eps_r);

// T gates of an n-qubit approximate QFT at error eps.
double aqft_t(double n, double eps_f);

struct ErrorBudget {
  double epsilon_E = 0.0;
  double epsilon_theta = 0.0;
  double epsilon_trotter = 0.0;
  double epsilon_synth = 0.0;
  double epsilon_qft = 0.0;
  double epsilon_aqft = 0.0;
  double epsilon_r = 0.0;  // per rotation
  double epsilon_f = 0.0;  // per AQFT
  int m = 0;
  double repetitions = 1.0;        // 2^m
  double repetitions_bound = 1.0;  // continuous value used for total cost
  double tau = 0.0;                // Trotter step, 0 for qubitization
  double alpha = 0.0;              // alpha or alpha_comm
};

enum class TrotterVariant { occupation, aqft_aware };

ErrorBudget budget_trotter(double alpha_comm, double epsilon_E, double N_r, double N_f,
                           TrotterVariant v = TrotterVariant::occupation);
ErrorBudget budget_qubitization(double alpha, double epsilon_E, double N_r, double N_f);

// Phase error obtained by substituting the budget back into
// sqrt((pi/2^(m+1))^2 + (pi eps_qft + eps_trotter + N_r eps_r + N_f eps_f)^2).
double achieved_phase_error(const ErrorBudget& b, double N_r, double N_f);

// Queries to the walk operator for e^{-iHt} by singular value transformation.
double qsvt_queries(double alpha, double t, double eps);

struct SurfaceModel {
  double cycle_ns = 100.0;
  double p_phys = 1e-3;
  double p_threshold = 1e-2;
  double prefactor = 0.1;          // p_L = prefactor (p/p_th)^((d+1)/2)
  double patch_factor = 2.0;       // physical qubits per logical = patch_factor d^2
  double routing_overhead = 0.5;   // extra fraction of data patches for lattice surgery routing
  double factory_qubits_per_d2 = 12.0;
  int factories = 4;
  double cycles_per_t = 1.0;       // code cycles (in units of d) consumed per T gate
  double failure_budget = 0.01;
  int d_max = 101;
};

struct SurfaceOverlay {
  int code_distance = 0;
  double physical_qubits = 0.0;
  double wallclock_seconds = 0.0;
  double logical_failure = 0.0;
};

struct CostOptions {
  bool conjecture_iiib = false;
  bool phi4_short_form = false;
  double kappa = 4.0;
  bool qsvt = false;  // report QSVT time evolution instead of phase estimation
  double qsvt_time = 1.0;
  std::optional<SurfaceModel> surface;
};

struct CostReport {
  CostAlgorithm algorithm = CostAlgorithm::I_equal_weight;
  int cutoff = 0;  // N for occupation, k for amplitude
  double total_t = 0.0;
  double logical_qubits = 0.0;
  double ancilla_qubits = 0.0;
  double rotations = 0.0;  // T from synthesised rotations
  double aqft = 0.0;       // T from approximate QFTs
  double other = 0.0;      // all remaining T
  double N_r = 0.0, N_f = 0.0, N_plus = 0.0;
  double alpha = 0.0;
  double qsvt_queries = 0.0;
  ErrorBudget budget;
  std::string source;  // which closed forms fed the numbers
  std::optional<SurfaceOverlay> surface;
  std::string to_json() const;
};

inline constexpr int kCostReportSchema = 1;

// `cutoff` is N for occ_trotter and k for amplitude algorithms. Amplitude closed forms accept any k >= 2.
CostReport total_cost(CostAlgorithm alg, const LatticeParams& params, int cutoff, double epsilon_E,
                      const CostOptions& opt = {});

CostReport surface_overlay(const CostReport& report, const SurfaceModel& model);

}  // namespace phi4

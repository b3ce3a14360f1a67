#include "phi4/budget.hpp"

#include <cmath>
#include <numbers>

#include "json.hpp"
#include "phi4/dynamics.hpp"
#include "phi4/errors.hpp"
#include "phi4/occ_model.hpp"

namespace phi4 {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

double binom(double x, int r) {
  double out = 1.0;
  for (int i = 0; i < r; ++i) out *= (x - i) / (i + 1);
  return out;
}

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorCode::OutOfRange, "target error must be positive");
}

// per-item split of a total error over `count` items; with no items the share is unused
double per_item(double total, double count) { return count > 0 ? total / count : total; }

// Amplitude cutoffs for costing, where the closed forms are continuous in log2 k.
AmplitudeCutoffs costing_cutoffs(int k) {
  if (k < 2) throw Error(ErrorCode::InvalidParameter, "k must be >= 2");
  if (is_power_of_two(k)) return make_amp_cutoffs(k);
  AmplitudeCutoffs c;
  c.k = k;
  c.delta_phi = std::sqrt(kPi / k);
  c.phi_max = k * c.delta_phi;
  c.qubits_per_site = static_cast<int>(std::ceil(std::log2(2.0 * k)));
  return c;
}

}  // namespace

const char* cost_algorithm_name(CostAlgorithm a) {
  switch (a) {
    case CostAlgorithm::occ_trotter: return "occ_trotter";
    case CostAlgorithm::amp_trotter: return "II_amp_trotter";
    case CostAlgorithm::I_equal_weight: return "I_equal_weight";
    case CostAlgorithm::IIIa_z_lcu: return "IIIa_z_lcu";
    case CostAlgorithm::IIIb_signature: return "IIIb_signature";
  }
  return "?";
}

CostAlgorithm parse_cost_algorithm(const std::string& s) {
  if (s == "occ" || s == "occ_trotter") return CostAlgorithm::occ_trotter;
  if (s == "II" || s == "amp_trotter" || s == "II_amp_trotter") return CostAlgorithm::amp_trotter;
  if (s == "I" || s == "I_equal_weight") return CostAlgorithm::I_equal_weight;
  if (s == "IIIa" || s == "IIIa_z_lcu") return CostAlgorithm::IIIa_z_lcu;
  if (s == "IIIb" || s == "IIIb_signature") return CostAlgorithm::IIIb_signature;
  throw Error(ErrorCode::ConfigParse, "unknown algorithm '" + s + "'");
}

bool is_qubitized(CostAlgorithm a) {
  return a == CostAlgorithm::I_equal_weight || a == CostAlgorithm::IIIa_z_lcu || a == CostAlgorithm::IIIb_signature;
}

RzCost rz_synthesis(double eps_r) {
  check_eps(eps_r);
  RzCost c;
  c.value = 3.067 * std::log2(2.0 / eps_r) - 4.327;
  if (c.value < 0) {
    c.value = 0.0;
    c.invalid_regime = true;
  }
  return c;
}

double rz_synthesis_t(double eps_r) { return rz_synthesis(eps_r).value; }

double aqft_t(double n, double eps_f) {
  if (!(n >= 1.0)) throw Error(ErrorCode::OutOfRange, "AQFT width must be >= 1");
  if (!(eps_f > 0.0 && eps_f < 1.0)) throw Error(ErrorCode::OutOfRange, "AQFT error must lie in (0,1)");
  const double l = std::log2(n / eps_f);
  return 8.0 * n * l + l * std::log2(l / eps_f);
}

ErrorBudget budget_trotter(double alpha_comm, double eps, double N_r, double N_f, TrotterVariant v) {
  if (!(alpha_comm > 0.0)) throw Error(ErrorCode::ZeroAlphaComm, "commutator bound must be positive");
  check_eps(eps);
  ErrorBudget b;
  b.epsilon_E = eps;
  b.alpha = alpha_comm;
  const double ra = std::sqrt(alpha_comm), e32 = std::pow(eps, 1.5);
  if (v == TrotterVariant::occupation) {
    b.tau = std::sqrt(eps / (std::pow(2.0, 1.5) * alpha_comm));
    b.epsilon_theta = eps * b.tau;
    b.epsilon_trotter = alpha_comm * b.tau * b.tau * b.tau;
    b.epsilon_qft = kSqrt2 * b.epsilon_theta / (8 * kPi);
    b.epsilon_synth = kSqrt2 * b.epsilon_theta / 8;
    b.epsilon_aqft = 0.0;
    // the sufficient count is an upper bound, so round down onto the grid of powers of two
    b.repetitions_bound = kPi * kPi * ra / e32;
    b.m = std::max(0, static_cast<int>(std::floor(std::log2(b.repetitions_bound))));
  } else {
    b.tau = std::sqrt(eps / (std::pow(2.0, 2.5) * alpha_comm));
    b.epsilon_theta = eps * b.tau;
    const double share = b.epsilon_theta / (4 * kSqrt2);
    b.epsilon_trotter = alpha_comm * b.tau * b.tau * b.tau;
    b.epsilon_qft = share / kPi;
    b.epsilon_synth = share;
    b.epsilon_aqft = share;
    b.repetitions_bound = kPi * std::pow(2.0, 0.75) * ra / e32;
    b.m = std::max(0, static_cast<int>(std::ceil(std::log2(b.repetitions_bound) - 1e-12)));
  }
  b.epsilon_r = per_item(b.epsilon_synth, N_r);
  b.epsilon_f = per_item(b.epsilon_aqft, N_f);
  b.repetitions = std::ldexp(1.0, b.m);
  return b;
}

ErrorBudget budget_qubitization(double alpha, double eps, double N_r, double N_f) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidParameter, "alpha must be positive");
  check_eps(eps);
  ErrorBudget b;
  b.epsilon_E = eps;
  b.alpha = alpha;
  b.epsilon_theta = eps / alpha;
  const double share = b.epsilon_theta / (3 * kSqrt2);
  b.epsilon_qft = share / kPi;
  b.epsilon_synth = share;
  b.epsilon_aqft = share;
  b.epsilon_r = per_item(share, N_r);
  b.epsilon_f = per_item(share, N_f);
  b.repetitions_bound = std::max(1.0, kPi * alpha / (kSqrt2 * eps));
  b.m = std::max(0, static_cast<int>(std::ceil(std::log2(b.repetitions_bound) - 1e-12)));
  b.repetitions = std::ldexp(1.0, b.m);
  return b;
}

double achieved_phase_error(const ErrorBudget& b, double N_r, double N_f) {
  const double trot = b.tau > 0 ? b.alpha * b.tau * b.tau * b.tau : 0.0;
  const double sys = kPi * b.epsilon_qft + trot + N_r * b.epsilon_r + N_f * b.epsilon_f;
  const double qpe = kPi / std::ldexp(1.0, b.m + 1);
  return std::sqrt(qpe * qpe + sys * sys);
}

double qsvt_queries(double alpha, double t, double eps) {
  if (!(alpha > 0 && t > 0)) throw Error(ErrorCode::InvalidParameter, "alpha and t must be positive");
  if (!(eps > 0 && eps < 1)) throw Error(ErrorCode::OutOfRange, "eps must lie in (0,1)");
  const double at = alpha * t, l = std::log(1.0 / eps);
  return at + l / std::log(std::numbers::e + l / at);
}

std::string CostReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = kCostReportSchema;
  j["algorithm"] = cost_algorithm_name(algorithm);
  j["cutoff"] = cutoff;
  j["total_t"] = total_t;
  j["logical_qubits"] = logical_qubits;
  j["ancilla_qubits"] = ancilla_qubits;
  j["components"] = {{"rotations", rotations}, {"aqft", aqft}, {"other", other}};
  j["N_r"] = N_r;
  j["N_f"] = N_f;
  j["N_plus"] = N_plus;
  j["alpha"] = alpha;
  j["budget"] = {{"epsilon_E", budget.epsilon_E},     {"epsilon_theta", budget.epsilon_theta},
                 {"epsilon_r", budget.epsilon_r},     {"epsilon_f", budget.epsilon_f},
                 {"m", budget.m},                     {"repetitions", budget.repetitions_bound},
                 {"tau", budget.tau}};
  if (qsvt_queries > 0) j["qsvt_queries"] = qsvt_queries;
  j["source"] = source;
  if (surface)
    j["surface_overlay"] = {{"code_distance", surface->code_distance},
                            {"physical_qubits", surface->physical_qubits},
                            {"wallclock_seconds", surface->wallclock_seconds}};
  return j.dump();
}

CostReport total_cost(CostAlgorithm alg, const LatticeParams& p, int cutoff, double eps, const CostOptions& opt) {
  check_eps(eps);
  CostReport r;
  r.algorithm = alg;
  r.cutoff = cutoff;
  const double V = static_cast<double>(p.Omega), E = static_cast<double>(p.E_D);
  double per_walk = 0.0;
  switch (alg) {
    case CostAlgorithm::occ_trotter: {
      const OccupationCutoffs c = make_occ_cutoffs(cutoff, p);
      const OccGateReport g = gate_counts_occ(c, p);
      r.N_r = g.rotations().value();
      r.N_f = 0.0;
      r.N_plus = g.t_other().value();
      r.alpha = alpha_comm_occ(p, c);
      r.budget = budget_trotter(r.alpha, eps, r.N_r, r.N_f, TrotterVariant::occupation);
      r.rotations = r.N_r * rz_synthesis_t(r.budget.epsilon_r);
      r.other = r.N_plus;
      r.logical_qubits = static_cast<double>(c.register_qubits());
      r.source = "occupation Trotter cost; Trotter phase error split; occupation commutator bound";
      break;
    }
    case CostAlgorithm::amp_trotter: {
      const AmplitudeCutoffs c = costing_cutoffs(cutoff);
      const double lk = std::log2(cutoff), x = lk + 1;
      r.N_r = V * (binom(x, 1) + binom(x, 2) + binom(x, 3) + binom(x, 4)) + E * x * x;
      r.N_f = 2 * V;
      r.N_plus = 0.0;
      r.alpha = alpha_comm_amp(p, c);
      r.budget = budget_trotter(r.alpha, eps, r.N_r, r.N_f, TrotterVariant::aqft_aware);
      r.rotations = r.N_r * rz_synthesis_t(r.budget.epsilon_r);
      r.aqft = r.N_f * aqft_t(std::log2(2.0 * cutoff), r.budget.epsilon_f);
      r.logical_qubits = V * std::log2(2.0 * cutoff);
      r.source = "amplitude Trotter cost; AQFT-aware phase error split; amplitude commutator bound";
      break;
    }
    default: {
      const Algorithm a = alg == CostAlgorithm::I_equal_weight ? Algorithm::I_equal_weight
                          : alg == CostAlgorithm::IIIa_z_lcu   ? Algorithm::IIIa_z_lcu
                                                               : Algorithm::IIIb_signature;
      EncodingOptions eo;
      eo.conjecture_iiib = opt.conjecture_iiib;
      eo.phi4_short_form = opt.phi4_short_form;
      eo.kappa = opt.kappa;
      const BlockEncoding be = build_block_encoding(a, p, costing_cutoffs(cutoff), false, eo);
      r.N_r = be.rz_count;
      r.N_f = be.aqft_count;
      r.N_plus = be.t_count;
      r.alpha = be.alpha;
      r.budget = budget_qubitization(r.alpha, eps, r.N_r, r.N_f);
      r.rotations = r.N_r * rz_synthesis_t(r.budget.epsilon_r);
      r.aqft = r.N_f * aqft_t(std::log2(2.0 * cutoff), r.budget.epsilon_f);
      r.other = r.N_plus;
      r.logical_qubits = be.tally.logical_qubits;
      r.ancilla_qubits = static_cast<double>(be.ancilla_qubits);
      r.source = std::string("qubitized phase estimation cost; qubitization phase error split; ") + algorithm_name(a) +
                 " block-encoding tallies";
      break;
    }
  }
  per_walk = r.rotations + r.aqft + r.other;
  double reps = r.budget.repetitions_bound;
  if (opt.qsvt) {
    if (!is_qubitized(alg)) throw Error(ErrorCode::InvalidParameter, "QSVT mode needs a qubitized algorithm");
    r.qsvt_queries = qsvt_queries(r.alpha, opt.qsvt_time, eps);
    reps = r.qsvt_queries;
    r.source += "; QSVT query count";
  }
  r.rotations *= reps;
  r.aqft *= reps;
  r.other *= reps;
  r.total_t = reps * per_walk;
  r.ancilla_qubits += r.budget.m;
  r.logical_qubits = std::ceil(r.logical_qubits - 1e-9) + r.budget.m;
  if (opt.surface) r = surface_overlay(r, *opt.surface);
  return r;
}

CostReport surface_overlay(const CostReport& report, const SurfaceModel& m) {
  if (!(m.cycle_ns > 0 && m.p_phys > 0 && m.p_threshold > 0 && m.prefactor > 0 && m.patch_factor > 0 &&
        m.cycles_per_t > 0 && m.failure_budget > 0 && m.factories >= 0))
    throw Error(ErrorCode::InvalidParameter, "surface model parameters must be positive");
  if (m.p_phys >= m.p_threshold) throw Error(ErrorCode::InfeasibleDistance, "physical error rate above threshold");
  CostReport r = report;
  const double L = std::ceil(report.logical_qubits);
  for (int d = 3; d <= m.d_max; d += 2) {
    const double pL = m.prefactor * std::pow(m.p_phys / m.p_threshold, (d + 1) / 2.0);
    const double cycles = std::max(1.0, report.total_t * m.cycles_per_t) * d;
    const double fail = pL * L * cycles;
    if (fail < m.failure_budget) {
      SurfaceOverlay o;
      o.code_distance = d;
      o.logical_failure = fail;
      const double d2 = static_cast<double>(d) * d;
      o.physical_qubits = L * m.patch_factor * d2 * (1.0 + m.routing_overhead);
      if (report.total_t > 0) o.physical_qubits += m.factories * m.factory_qubits_per_d2 * d2;
      o.wallclock_seconds = report.total_t * m.cycles_per_t * d * m.cycle_ns * 1e-9;
      r.surface = o;
      return r;
    }
  }
  throw Error(ErrorCode::InfeasibleDistance, "no code distance up to " + std::to_string(m.d_max) + " meets the budget");
}

}  // namespace phi4

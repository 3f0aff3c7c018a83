#pragma once

// Seeded multi-start local optimizers for the maximal output p-norm, the
// minimal output entropy, the minimal average output entropy at a fixed
// average input, and the Holevo capacity of a channel.
//
// Every estimate is one-sided: nu_p and chi* come from feasible points and are
// lower bounds, S_min and S_av are upper bounds. OptResult::bound records which.

#include <cstdint>
#include <optional>
#include <vector>

#include "ebcert/channels.hpp"
#include "ebcert/linalg.hpp"

namespace ebcert {

enum class GradientMode { analytic, finite_difference };

struct OptimizerConfig {
  /// Number of random starts; 0 selects 64, or 256 when the channel input
  /// dimension is at least 4 (product channels).
  std::size_t starts = 0;
  std::size_t max_iters = 500;
  double step_tol = 1e-10;
  double value_tol = 1e-9;
  std::uint64_t seed = 0;
  GradientMode gradient = GradientMode::analytic;
  double fd_step = 1e-6;
};

/// Resolved start count for a channel with the given input dimension.
std::size_t resolved_starts(const OptimizerConfig& cfg, std::size_t dim_in);

enum class BoundKind { exact, lower, upper };
const char* to_string(BoundKind b);

struct Ensemble {
  std::vector<double> probabilities;
  std::vector<DensityMatrix> states;

  ComplexMatrix average() const;
};

struct OptResult {
  double value = 0.0;
  BoundKind bound = BoundKind::exact;
  ComplexVector state;              // maximizing pure state (nu_p, S_min)
  std::optional<Ensemble> ensemble; // optimal ensemble (S_av, chi*)
  std::size_t starts_used = 0;
  std::vector<bool> converged;
  std::size_t best_start_index = 0;
  double constraint_residual = 0.0; // S_av only: |sum p_k rho_k - rho_avg|_F
  std::size_t discarded_starts = 0;
};

/// Lower-bound estimate of nu_p(c) = sup ||c(rho)||_p over pure inputs.
/// For p < 1.0001 returns the forced value 1.
OptResult max_output_pnorm(const Channel& c, double p, const OptimizerConfig& cfg);

/// Upper-bound estimate of S_min(c) over pure inputs.
OptResult min_output_entropy(const Channel& c, const OptimizerConfig& cfg);

/// Upper-bound estimate of S_av(c; rho_avg) over ensembles of dim_in^2 pure
/// states whose average is rho_avg.
OptResult avg_output_entropy(const Channel& c, const DensityMatrix& rho_avg, const OptimizerConfig& cfg);

/// Lower-bound estimate of chi*(c) over ensembles of dim_in^2 pure states.
OptResult holevo_capacity(const Channel& c, const OptimizerConfig& cfg);

/// S(c(sum p_k rho_k)) - sum p_k S(c(rho_k)).
double holevo_quantity(const Channel& c, const Ensemble& e);

/// sum p_k S(c(rho_k)).
double average_output_entropy(const Channel& c, const Ensemble& e);

namespace objectives {

// Objectives on unnormalized complex parameters, with optional gradient G in
// the convention df = Re <G, dX>. Exposed for gradient tests.

/// Tr c(psi psi^dagger)^p for unit psi.
double output_trace_power(const Channel& c, const ComplexVector& psi, double p, ComplexVector* grad);

/// S(c(psi psi^dagger)) for unit psi.
double output_entropy(const Channel& c, const ComplexVector& psi, ComplexVector* grad);

/// Holevo quantity of the ensemble p_k = |v_k|^2, rho_k = v_k v_k^dagger / p_k
/// for V (dim_in x m) with unit Frobenius norm.
double ensemble_holevo(const Channel& c, const ComplexMatrix& v, ComplexMatrix* grad);

/// sum_k p_k S(c(rho_k)) for the same ensemble encoding.
double ensemble_entropy(const Channel& c, const ComplexMatrix& v, ComplexMatrix* grad);

}  // namespace objectives

}  // namespace ebcert

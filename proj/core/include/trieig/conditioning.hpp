#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "trieig/extscalar.hpp"
#include "trieig/matgen.hpp"
#include "trieig/rational.hpp"

namespace trieig {

/// Skeel's condition number || |B^-1| |B| |x| ||_inf / ||x||_inf, evaluated
/// from the closed-form solution and inverse. The rational overload is exact
/// up to the final rounding; the GeneralSystem overload evaluates the exact
/// rational values of its double inputs. Throws std::domain_error for a
/// singular system or a zero solution.
double skeel_exact(const ExactSystem& sys);
double skeel_exact(const ExtSystem& sys);
double skeel_exact(const GeneralSystem& sys);

/// The same quantity from the Skeel-vector formulas, ||skeelZ|| / ||x||.
/// Requires d_j > 0 and c > 0.
double skeel_from_vectors(const ExactSystem& sys);

/// Skeel condition number of the subsystem for eigenvector j (1-based),
/// exact when gamma is exact, ExtScalar otherwise.
double skeel_eigen_subsystem(const MatrixParams& params, std::size_t j);

/// Upper bound 2 (1 + gamma log((gamma + n - 1) / gamma)). Throws
/// std::domain_error for gamma <= 1 or n < 1.
double skeel_bound(double gamma, std::size_t n);

/// Safety constant on observed / predicted perturbation response.
inline constexpr double kPerturbationSafety = 4.0;

enum class PerturbTarget { MatrixAndRhs, MatrixOnly };

struct PerturbStats {
  double epsilon = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  /// max over trials of max_i |x~_i - x_i| / (epsilon ||x||_inf kappa_bound)
  double max_ratio = 0.0;
  double kappa_bound = 0.0;
};

struct CondReport {
  std::size_t j = 0;
  std::size_t n = 0;
  double kappa_exact = 0.0;
  std::optional<double> kappa_bound;  // empty when gamma <= 1
  bool exact = true;
  std::optional<PerturbStats> perturb_stats;
};

/// kappa_exact and the bound for eigenvector j.
CondReport condition_report(const MatrixParams& params, std::size_t j);

/// Multiplies every nonzero of the eigenvector subsystem B (and f unless
/// target == MatrixOnly) by 1 + delta, delta uniform in [-eps, eps], solves
/// in ExtScalar and compares with the exact solution. Each trial draws from
/// its own stream derived from (seed, trial), so the result does not depend
/// on evaluation order. Requires b > 0, c > 0, gamma > 1, 0 < eps <= 1e-4,
/// trials >= 1 and 1 <= j < m.
PerturbStats perturbation_experiment(const MatrixParams& params, std::size_t j, double epsilon,
                                     std::size_t trials, std::uint64_t seed,
                                     PerturbTarget target = PerturbTarget::MatrixAndRhs);

/// max_j |delta lambda_j| / |lambda_j| for lambda_j (1 + eps), evaluated in
/// exact arithmetic. Throws std::domain_error when some lambda_j == 0.
double eigenvalue_sensitivity(const MatrixParams& params, double epsilon);

}  // namespace trieig

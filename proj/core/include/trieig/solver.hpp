#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "trieig/extscalar.hpp"
#include "trieig/matgen.hpp"
#include "trieig/matrix.hpp"

namespace trieig {

/// Output of an overflow-safe solve, LAPACK xLATRS convention: the solver
/// solves G * values = 2^scale_exp * f, so the true solution is
/// values * 2^-scale_exp. scale_exp <= 0 (the right-hand side is only ever
/// scaled down) and every |values_i| stays below the largest finite double.
struct ScaledVector {
  std::vector<double> values;
  std::int64_t scale_exp = 0;

  std::size_t size() const { return values.size(); }
  /// values_i * 2^-scale_exp, exactly.
  ExtScalar component(std::size_t i) const { return ExtScalar(values[i]).ldexp(-scale_exp); }

  bool operator==(const ScaledVector&) const = default;
};

enum class SolveStatus { Ok, OverflowDetected };

struct SolveOutcome {
  SolveStatus status = SolveStatus::Ok;
  ScaledVector result;                        // filled when Ok
  std::optional<std::size_t> overflow_index;  // 1-based, when OverflowDetected
};

/// Plain forward substitution x_k = a_k (1 + sum_{j<k} x_j) in doubles.
/// Reports the first k whose update is non-finite. Throws std::domain_error
/// for a zero diagonal entry.
SolveOutcome naive_solve(const GeneralSystem& sys);

/// One robust update, reported to an optional observer. Values are in the
/// scaled domain current after any rescaling triggered by this step.
struct RobustStep {
  std::size_t k = 0;  // 1-based
  double x = 0.0;
  double running_sum = 0.0;
  double rhs = 0.0;
  std::int64_t scale_exp = 0;
  double partial_max = 0.0;  // max |values_j| over j <= k
};

using RobustObserver = std::function<void(const RobustStep&)>;

/// Overflow-proof forward substitution. Before an update could push the new
/// component or the running sum past tau = Omega / (2n max(1, |c| / min|d|)),
/// the partial solution, the running sum and the right-hand side are scaled
/// by the smallest power of two 2^-sigma restoring headroom.
ScaledVector robust_solve(const GeneralSystem& sys, const RobustObserver& observer = {});

/// Forward substitution in ExtScalar arithmetic.
std::vector<ExtScalar> ext_solve(const GeneralSystem& sys);

/// log2 of the robust threshold tau for a system (finite even when tau
/// would underflow).
double robust_threshold_log2(const GeneralSystem& sys);

enum class Method { Naive, Robust, Extended };

const char* to_string(Method m);

/// One eigenvector of A, in the orientation of the parameters.
struct EigenvectorColumn {
  std::size_t eigen_index = 0;  // 1-based j, lambda_j = a + j b
  double lambda = 0.0;
  SolveStatus status = SolveStatus::Ok;
  /// Row of the full vector (1-based, in the orientation of the parameters)
  /// where the naive solve first overflowed.
  std::optional<std::size_t> overflow_row;
  /// ScaledVector for Naive/Robust, ExtScalar vector for Extended. Empty
  /// ScaledVector on overflow.
  std::variant<ScaledVector, std::vector<ExtScalar>> vector;

  /// log2 of the largest |component|; -inf when not Ok.
  double max_log2() const;
  /// Component i as ExtScalar (true, unscaled value).
  ExtScalar component(std::size_t i) const;
  std::size_t size() const;
};

/// Eigenvectors for j = 1..m: zeros before the pivot, unit pivot, solved
/// tail (reversed for the upper orientation). Columns are independent; with
/// threads > 1 they are computed concurrently, with identical results.
/// Throws std::domain_error for b == 0.
std::vector<EigenvectorColumn> eigenvectors(const MatrixParams& params, Method method,
                                            unsigned threads = 1);

/// Single column j (1-based).
EigenvectorColumn eigenvector(const MatrixParams& params, Method method, std::size_t j);

/// max_i |((A - lambda I) x)_i| / ((||A||_inf + |lambda|) max_i |x_i|).
/// Evaluated in doubles on x rescaled to max in [1,2); falls back to
/// ExtScalar when that is not finite. Throws std::invalid_argument for a zero vector or size
/// mismatch.
ExtScalar residual(const TriMatrix& a, double lambda, const ScaledVector& x);
ExtScalar residual(const TriMatrix& a, double lambda, const std::vector<ExtScalar>& x);

}  // namespace trieig

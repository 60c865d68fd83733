#pragma once

#include <cstddef>
#include <cstdint>

#include "latstab/lattice_cf.hpp"
#include "latstab/pmf_window.hpp"

namespace latstab {

inline constexpr std::size_t kOracleGrid = std::size_t{1} << 14;
inline constexpr std::size_t kQuickGrid = std::size_t{1} << 10;
inline constexpr double kMassTolerance = 1e-12;

/// Masses of cf on k in [-N/2, N/2) by an N-point DFT of cf(2 pi l / N).
/// The result is aliased. Throws DomainError unless N >= 8 is a power of
/// two, InversionError if any imaginary residue exceeds 1e-8.
PMFWindow invert_to_pmf(const LatticeCF& cf, std::size_t grid_size);

struct ValidityReport {
  bool is_valid = false;
  double min_mass = 0.0;
  double normalization_error = 0.0;
  /// max over the grid of |cf(-t) - conj(cf(t))|.
  double hermitian_error = 0.0;
  /// |cf(0) - 1|.
  double origin_error = 0.0;
  double decay_estimate = 0.0;
  double imag_residue = 0.0;
  double tolerance = 0.0;
};

/// CF-validity oracle: inverts cf and checks nonnegativity, normalization,
/// cf(0) = 1 and Hermitian symmetry against tolerance. Never throws for a
/// well-formed grid; an excessive imaginary residue is reported as invalid.
ValidityReport is_valid_cf(const LatticeCF& cf, std::size_t grid_size,
                           double tolerance = kMassTolerance);

enum class Example2Formula {
  /// Direct expansion of g_n, including the a^2, b^2 terms at k = -1, 0, 1.
  corrected,
  /// Without the a^2, b^2 terms at k = -1, 0, 1.
  uncorrected,
};

/// P{nu = k} for the Example 2 normalizer g_n (see NormalizerVariant::example2).
double example2_pmf_closed_form(double lambda1, double lambda2, double lambda, int n,
                                std::int64_t k,
                                Example2Formula formula = Example2Formula::corrected);

/// Smallest lambda making the Example 2 normalizer a CF, from p_0 >= 0:
/// sqrt(lambda1^2 + lambda2^2 + 8 lambda1 lambda2 / pi) / n.
double example2_lambda_boundary(double lambda1, double lambda2, int n);

struct MinLambdaResult {
  double bisection = 0.0;
  double closed_form = 0.0;
  int iterations = 0;
};

/// Bisection on lambda for validity of the Example 2 normalizer via
/// is_valid_cf, bracketed by [max(l1, l2) 1e-3, (l1 + l2) 1e3]. Throws
/// InversionError if the predicate does not change sign over the bracket
/// or the result disagrees with the closed-form boundary by more than
/// 10 * tolerance.
MinLambdaResult min_valid_lambda(double lambda1, double lambda2, int n,
                                 double tolerance = 1e-6,
                                 std::size_t grid_size = kOracleGrid);

/// Total variation distance. The windows are aligned on the union of their
/// supports with zero padding. Out-of-window mass is treated as disjoint,
/// so when either tail_mass is nonzero the result is an upper bound.
double tv_distance(const PMFWindow& p, const PMFWindow& q);

/// max over t = 2 pi l / N of |f(t) - g(t)|.
double sup_cf_distance(const LatticeCF& f, const LatticeCF& g, std::size_t grid_size);

/// True for powers of two >= 8.
bool is_valid_grid(std::size_t grid_size) noexcept;

}  // namespace latstab

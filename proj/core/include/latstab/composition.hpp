#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "latstab/families.hpp"
#include "latstab/inversion.hpp"
#include "latstab/lattice_cf.hpp"

namespace latstab {

/// A lattice law split at the origin into its negative-support part
/// (p_{-1}, p_{-2}, ...) and its nonnegative part (p_0, p_1, ...). The atom
/// at 0 belongs to the nonnegative part. The nonnegative part is either a
/// truncated coefficient series or a closed-form PGF.
class SplitLatticePGF {
 public:
  static SplitLatticePGF closed_form(ClosedFormPgf pgf);
  /// negative[m - 1] = p_{-m}, nonnegative[k] = p_k. Throws DomainError on a
  /// negative coefficient or a total mass (tails included) off by > 1e-10.
  static SplitLatticePGF from_coefficients(std::vector<double> negative,
                                           std::vector<double> nonnegative,
                                           double negative_tail = 0.0,
                                           double nonnegative_tail = 0.0,
                                           std::string label = "series");
  /// Exact split of a (non-aliased) PMF window; its tail_mass is carried
  /// into the nonnegative tail.
  static SplitLatticePGF from_pmf(const PMFWindow& pmf, std::string label = "pmf");
  /// Truncated series with |k| < terms, read off an inversion of cf on a
  /// 4 * terms grid. The tail estimate is the absolute mass left in the
  /// outer half of that grid. terms must be a power of two.
  static SplitLatticePGF series_from_cf(const LatticeCF& cf, std::size_t terms);
  /// Doubles the window until the tail estimate is <= tail_target or the
  /// window reaches max_terms.
  static SplitLatticePGF adaptive_series_from_cf(const LatticeCF& cf,
                                                 double tail_target = 1e-12,
                                                 std::size_t max_terms = std::size_t{1} << 16);

  /// g_1 composed at w: sum over m >= 1 of p_{-m} w^m.
  [[nodiscard]] cplx negative_part(cplx w) const;
  /// g_2 composed at w: the closed-form PGF, or sum over k >= 0 of p_k w^k.
  [[nodiscard]] cplx nonnegative_part(cplx w, cplx one_minus_w) const;

  [[nodiscard]] bool has_closed_form() const noexcept { return pgf_.has_value(); }
  [[nodiscard]] const std::optional<ClosedFormPgf>& pgf() const noexcept { return pgf_; }
  [[nodiscard]] bool one_sided() const noexcept { return negative_.empty(); }
  [[nodiscard]] const std::vector<double>& negative() const noexcept { return negative_; }
  [[nodiscard]] const std::vector<double>& nonnegative() const noexcept { return nonnegative_; }
  [[nodiscard]] double tail_bound() const noexcept { return negative_tail_ + nonnegative_tail_; }
  [[nodiscard]] double total_mass() const noexcept;
  [[nodiscard]] const std::string& label() const noexcept { return label_; }

 private:
  SplitLatticePGF() = default;

  std::vector<double> negative_;
  std::vector<double> nonnegative_;
  double negative_tail_ = 0.0;
  double nonnegative_tail_ = 0.0;
  std::optional<ClosedFormPgf> pgf_;
  std::string label_;
};

inline constexpr double kDefaultTailTolerance = 1e-10;

/// g_1(i log g_n(-t)) + g_2(-i log g_n(t)), evaluated as power series in
/// g_n(-t) and g_n(t); no logarithm is formed. Throws CompositionError when
/// the base tail exceeds tail_tolerance or |g_n(t)| > 1 + 1e-12.
cplx casual_inner(const SplitLatticePGF& base, const LatticeCF& g_n, double t,
                  double tail_tolerance = kDefaultTailTolerance);

/// casual_inner(...)^n by integer exponentiation.
cplx casual_compose_pow(const SplitLatticePGF& base, const LatticeCF& g_n, int n, double t,
                        double tail_tolerance = kDefaultTailTolerance);

/// One instance of f(t) = (g_1(i log g_n(-t)) + g_2(-i log g_n(t)))^n over
/// a range of n.
struct CasualRepresentation {
  std::string label;
  LatticeCF target;
  SplitLatticePGF base;
  std::function<LatticeCF(int)> normalizer;
  int n_min = 1;
  int n_max = 1;
};

struct VerificationRow {
  int n = 0;
  double sup_error = 0.0;
  ValidityReport normalizer_validity;
};

struct VerificationReport {
  std::string label;
  std::size_t grid_size = 0;
  double tolerance = 0.0;
  double base_tail = 0.0;
  std::vector<VerificationRow> rows;
  double max_error = 0.0;
  /// max_error <= tolerance.
  bool verdict = false;
  /// Every g_n passed the CF-validity oracle.
  bool normalizers_valid = false;
  /// Non-empty when composition threw; the verdict is then false.
  std::string error;

  [[nodiscard]] bool passed() const noexcept { return verdict && normalizers_valid; }
};

VerificationReport verify_representation(const CasualRepresentation& rep,
                                         std::size_t grid_size, double tolerance,
                                         double validity_tolerance = kMassTolerance);

// Representations of the worked examples. Each validates its parameters.

/// exp{-lambda (1 - cos t)^gamma} from base exp{-lambda (1 - e^{it})^gamma}.
CasualRepresentation example1_representation(double lambda, double gamma, int n_max);
/// Two-sided alpha = 1/2 law from base exp{-lambda (1 - e^{it})^{1/2}}.
CasualRepresentation example2_representation(double lambda1, double lambda2, double lambda,
                                             int n_max);
/// Hermite(a1, a2) from base Poisson(a).
CasualRepresentation example3_representation(double a1, double a2, double a, int n_max);
/// exp{a (h(t) - 1)} from base Poisson(A).
CasualRepresentation example4_representation(double a, double A, const LatticeCF& h,
                                             int n_max);
/// Positive discrete stable law as its own base.
CasualRepresentation nonunique_first_representation(double lambda, double gamma, int n_max);
/// Positive discrete stable law from base exp{-lambda (1 - e^{it})^{2 gamma}}.
CasualRepresentation nonunique_second_representation(double lambda, double gamma, int n_max);

struct NonuniquenessResult {
  VerificationReport first;
  VerificationReport second;
  /// TV between the DFT windows of the two base laws. The mod-N map
  /// contracts TV, so this is a lower bound on the true distance.
  double base_tv = 0.0;
};

/// Requires gamma in (0, 1/2).
NonuniquenessResult nonuniqueness_demo(double lambda, double gamma, int n_min, int n_max,
                                       std::size_t grid_size, double tolerance);

}  // namespace latstab

namespace latstab {

/// P^n(g_n(t)) with g_n = (1 - lambda/n) + (lambda/n) h(t): the CF of one
/// row sum of the limit-theorem triangular array.
LatticeCF theorem1_row_cf(const ClosedFormPgf& count_pgf, const LatticeCF& h, double lambda,
                          int n);
/// exp{lambda P'(1) (h(t) - 1)}. Throws DomainError if P'(1) is not finite.
LatticeCF theorem1_limit_cf(const ClosedFormPgf& count_pgf, const LatticeCF& h, double lambda);

}  // namespace latstab

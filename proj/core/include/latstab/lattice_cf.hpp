#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "latstab/complex_math.hpp"
#include "latstab/pmf_window.hpp"

namespace latstab {

enum class CFKind {
  positive_discrete_stable,
  symmetric_discrete_stable,
  two_sided_discrete_stable,
  hermite,
  compound_poisson,
  normalizer_variant,
  pmf_backed,
  generic_callable,
};

std::string_view to_string(CFKind kind) noexcept;

/// Scalar parameters of every family. Which fields are meaningful depends on
/// the family; the rest keep their defaults.
struct FamilyParams {
  double lambda = 0.0;
  double gamma = 0.0;
  double alpha = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double a = 0.0;
  double A = 0.0;
  /// Rate of the 1 + Poisson(mu) count law.
  double mu = 0.0;
  /// Success probability of the shifted geometric count law.
  double p = 0.0;
  int n = 1;
};

/// Characteristic function of an integer-valued random variable.
///
/// Immutable after construction; copies share the underlying evaluators.
/// value(t) is the CF itself, complement(t) is 1 - value(t). Families that
/// can form the complement without cancellation provide it directly, which
/// keeps compositions g(1 - (1 - g_n)) exact to rounding for tiny 1 - g_n.
class LatticeCF {
 public:
  using Evaluator = std::function<cplx(double)>;

  LatticeCF(CFKind kind, std::string label, FamilyParams params,
            Evaluator value, Evaluator complement = {});

  /// CF of the law stored in pmf. The window must not be aliased in a way
  /// that matters to the caller; masses are used as given.
  static LatticeCF from_pmf(PMFWindow pmf, std::string label = "pmf");
  static LatticeCF from_callable(std::string label, Evaluator value,
                                 Evaluator complement = {});

  cplx operator()(double t) const { return value_(t); }
  [[nodiscard]] cplx value(double t) const { return value_(t); }
  [[nodiscard]] cplx complement(double t) const;

  [[nodiscard]] CFKind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::string& label() const noexcept { return label_; }
  [[nodiscard]] const FamilyParams& params() const noexcept { return params_; }
  /// Backing PMF for pmf-backed CFs, nullptr otherwise.
  [[nodiscard]] const PMFWindow* backing_pmf() const noexcept { return pmf_.get(); }

 private:
  CFKind kind_;
  std::string label_;
  FamilyParams params_;
  Evaluator value_;
  Evaluator complement_;
  std::shared_ptr<const PMFWindow> pmf_;
};

}  // namespace latstab

#pragma once

#include <cstdint>
#include <string_view>

#include "latstab/lattice_cf.hpp"

namespace latstab {

// Pointwise evaluators. Each validates its parameters and throws DomainError
// on violation; none clamps.

/// exp{-lambda (1 - e^{it})^gamma}, lambda > 0, gamma in (0, 1].
cplx eval_positive_discrete_stable(double lambda, double gamma, double t);
/// exp{-lambda (1 - cos t)^gamma}, lambda > 0, gamma in (0, 1].
cplx eval_symmetric_discrete_stable(double lambda, double gamma, double t);
/// exp{-lambda1 (1 - e^{it})^alpha - lambda2 (1 - e^{-it})^alpha}.
cplx eval_two_sided_discrete_stable(double lambda1, double lambda2, double alpha, double t);
/// exp{a1 (e^{it} - 1) + a2 (e^{2it} - 1)}, a1, a2 >= 0, a1 + a2 > 0.
cplx eval_hermite(double a1, double a2, double t);
/// exp{a (h(t) - 1)}, a > 0.
cplx eval_compound_poisson(double a, const LatticeCF& h, double t);
cplx eval_poisson(double lambda, double t);

LatticeCF positive_discrete_stable(double lambda, double gamma);
LatticeCF symmetric_discrete_stable(double lambda, double gamma);
LatticeCF two_sided_discrete_stable(double lambda1, double lambda2, double alpha);
LatticeCF hermite(double a1, double a2);
LatticeCF compound_poisson(double a, LatticeCF h);
LatticeCF poisson(double lambda);
/// e^{ikt}.
LatticeCF point_mass(std::int64_t k);
/// (a1 e^{it} + a2 e^{2it}) / (a1 + a2): the jump law that turns a compound
/// Poisson with rate a1 + a2 into the Hermite law.
LatticeCF hermite_jump_law(double a1, double a2);

// Normalizer sequences g_n.

enum class NormalizerVariant {
  /// (1 - c) + c cos t, c = n^{-1/gamma}.
  example1,
  /// 1 - n^{-2} (a sqrt(1 - e^{it}) + b sqrt(1 - e^{-it}))^2, a = lambda1/lambda,
  /// b = lambda2/lambda. A CF only for lambda large enough.
  example2,
  /// 1 + (a1 (e^{it} - 1) + a2 (e^{2it} - 1)) / (a n), a >= a1 + a2.
  example3,
  /// (1 - a/(nA)) + a/(nA) h(t), A >= a > 0.
  example4,
  /// 1 - c + c e^{it}, c = n^{-1/gamma}.
  nonunique_first,
  /// 1 - c (1 - e^{it})^{1/2}, c = n^{-1/(2 gamma)}.
  nonunique_second,
  /// (1 - lambda/n) + (lambda/n) h(t), lambda in (0, 1).
  theorem1,
};

std::string_view to_string(NormalizerVariant variant) noexcept;
NormalizerVariant normalizer_variant_from_string(std::string_view name);
/// True when the variant needs a jump CF h.
bool needs_jump(NormalizerVariant variant) noexcept;

/// Validate params for the variant; throws DomainError. example2 is not
/// checked for CF validity here (that is the inversion module's job).
void validate_normalizer(NormalizerVariant variant, const FamilyParams& params, int n,
                         const LatticeCF* jump = nullptr);

LatticeCF make_normalizer(NormalizerVariant variant, const FamilyParams& params, int n,
                          const LatticeCF* jump = nullptr);
cplx normalizer(NormalizerVariant variant, const FamilyParams& params, int n, double t,
                const LatticeCF* jump = nullptr);

// Closed-form probability generating functions of nonnegative-integer laws.

enum class PgfFamily {
  positive_discrete_stable,  // exp{-lambda (1 - z)^gamma}
  poisson,                   // exp{A (z - 1)}
  hermite,                   // exp{a1 (z - 1) + a2 (z^2 - 1)}
  unit,                      // z
  shifted_poisson,           // z exp{mu (z - 1)}
  shifted_geometric,         // p z / (1 - (1 - p) z)
};

std::string_view to_string(PgfFamily family) noexcept;

class ClosedFormPgf {
 public:
  ClosedFormPgf(PgfFamily family, const FamilyParams& params);

  static ClosedFormPgf positive_discrete_stable(double lambda, double gamma);
  static ClosedFormPgf poisson(double rate);
  static ClosedFormPgf hermite(double a1, double a2);
  static ClosedFormPgf unit();
  static ClosedFormPgf shifted_poisson(double mu);
  static ClosedFormPgf shifted_geometric(double p);

  /// P(z) for |z| <= 1 + 1e-12; DomainError beyond.
  cplx operator()(cplx z) const { return (*this)(z, 1.0 - z); }
  /// P(z) with 1 - z supplied by the caller, which may know it more
  /// accurately than 1 - z computed in floating point.
  cplx operator()(cplx z, cplx one_minus_z) const;

  /// P'(1); +infinity for the positive discrete stable law with gamma < 1.
  [[nodiscard]] double mean() const noexcept;
  [[nodiscard]] PgfFamily family() const noexcept { return family_; }
  [[nodiscard]] const FamilyParams& params() const noexcept { return params_; }
  /// The CF t -> P(e^{it}).
  [[nodiscard]] LatticeCF cf() const;

 private:
  PgfFamily family_;
  FamilyParams params_;
};

cplx pgf_closed_form(PgfFamily family, const FamilyParams& params, cplx z);

}  // namespace latstab

#include "latstab/families.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "latstab/error.hpp"

namespace latstab {
namespace {

void require(bool ok, std::string_view what) {
  if (!ok) throw DomainError(std::string(what));
}

bool positive(double x) { return x > 0.0 && std::isfinite(x); }
bool nonnegative(double x) { return x >= 0.0 && std::isfinite(x); }
bool in_unit_exponent(double x) { return x > 0.0 && x <= 1.0; }

void check_stable(double lambda, double gamma) {
  require(positive(lambda), "lambda must be > 0");
  require(in_unit_exponent(gamma), "gamma must lie in (0, 1]");
}

void check_hermite(double a1, double a2) {
  require(nonnegative(a1) && nonnegative(a2), "a1 and a2 must be >= 0");
  require(a1 + a2 > 0.0, "a1 + a2 must be > 0");
}

// (1 - e^{it})^gamma; gamma == 1 skips the polar round trip.
cplx stable_term(double t, double gamma) {
  const cplx w = one_minus_expi(t);
  return gamma == 1.0 ? w : principal_power(w, gamma);
}

double symmetric_exponent(double lambda, double gamma, double t) {
  const double s = std::sin(0.5 * t);
  return -lambda * std::pow(2.0 * s * s, gamma);
}

cplx hermite_exponent(double a1, double a2, double t) {
  return -a1 * one_minus_expi(t) - a2 * one_minus_expi(2.0 * t);
}

cplx two_sided_exponent(double lambda1, double lambda2, double alpha, double t) {
  return -lambda1 * stable_term(t, alpha) - lambda2 * stable_term(-t, alpha);
}

}  // namespace

cplx eval_positive_discrete_stable(double lambda, double gamma, double t) {
  check_stable(lambda, gamma);
  return std::exp(-lambda * stable_term(t, gamma));
}

cplx eval_symmetric_discrete_stable(double lambda, double gamma, double t) {
  check_stable(lambda, gamma);
  return {std::exp(symmetric_exponent(lambda, gamma, t)), 0.0};
}

cplx eval_two_sided_discrete_stable(double lambda1, double lambda2, double alpha, double t) {
  require(positive(lambda1) && positive(lambda2), "lambda1 and lambda2 must be > 0");
  require(in_unit_exponent(alpha), "alpha must lie in (0, 1]");
  return std::exp(two_sided_exponent(lambda1, lambda2, alpha, t));
}

cplx eval_hermite(double a1, double a2, double t) {
  check_hermite(a1, a2);
  return std::exp(hermite_exponent(a1, a2, t));
}

cplx eval_compound_poisson(double a, const LatticeCF& h, double t) {
  require(positive(a), "compound Poisson rate a must be > 0");
  return std::exp(-a * h.complement(t));
}

cplx eval_poisson(double lambda, double t) {
  require(positive(lambda), "Poisson rate must be > 0");
  return std::exp(-lambda * one_minus_expi(t));
}

LatticeCF positive_discrete_stable(double lambda, double gamma) {
  check_stable(lambda, gamma);
  FamilyParams p;
  p.lambda = lambda;
  p.gamma = gamma;
  return LatticeCF(
      CFKind::positive_discrete_stable,
      fmt::format("positive-discrete-stable(lambda={}, gamma={})", lambda, gamma), p,
      [=](double t) { return std::exp(-lambda * stable_term(t, gamma)); },
      [=](double t) { return -expm1(-lambda * stable_term(t, gamma)); });
}

LatticeCF symmetric_discrete_stable(double lambda, double gamma) {
  check_stable(lambda, gamma);
  FamilyParams p;
  p.lambda = lambda;
  p.gamma = gamma;
  return LatticeCF(
      CFKind::symmetric_discrete_stable,
      fmt::format("symmetric-discrete-stable(lambda={}, gamma={})", lambda, gamma), p,
      [=](double t) { return cplx{std::exp(symmetric_exponent(lambda, gamma, t)), 0.0}; },
      [=](double t) { return cplx{-std::expm1(symmetric_exponent(lambda, gamma, t)), 0.0}; });
}

LatticeCF two_sided_discrete_stable(double lambda1, double lambda2, double alpha) {
  require(positive(lambda1) && positive(lambda2), "lambda1 and lambda2 must be > 0");
  require(in_unit_exponent(alpha), "alpha must lie in (0, 1]");
  FamilyParams p;
  p.lambda1 = lambda1;
  p.lambda2 = lambda2;
  p.alpha = alpha;
  return LatticeCF(
      CFKind::two_sided_discrete_stable,
      fmt::format("two-sided-discrete-stable(lambda1={}, lambda2={}, alpha={})", lambda1,
                  lambda2, alpha),
      p, [=](double t) { return std::exp(two_sided_exponent(lambda1, lambda2, alpha, t)); },
      [=](double t) { return -expm1(two_sided_exponent(lambda1, lambda2, alpha, t)); });
}

LatticeCF hermite(double a1, double a2) {
  check_hermite(a1, a2);
  FamilyParams p;
  p.a1 = a1;
  p.a2 = a2;
  return LatticeCF(
      CFKind::hermite, fmt::format("hermite(a1={}, a2={})", a1, a2), p,
      [=](double t) { return std::exp(hermite_exponent(a1, a2, t)); },
      [=](double t) { return -expm1(hermite_exponent(a1, a2, t)); });
}

LatticeCF compound_poisson(double a, LatticeCF h) {
  require(positive(a), "compound Poisson rate a must be > 0");
  FamilyParams p;
  p.a = a;
  const std::string label = fmt::format("compound-poisson(a={}, h={})", a, h.label());
  return LatticeCF(
      CFKind::compound_poisson, label, p,
      [a, h](double t) { return std::exp(-a * h.complement(t)); },
      [a, h](double t) { return -expm1(-a * h.complement(t)); });
}

LatticeCF poisson(double lambda) { return positive_discrete_stable(lambda, 1.0); }

LatticeCF point_mass(std::int64_t k) {
  PMFWindow w;
  w.k_min = k;
  w.masses = {1.0};
  return LatticeCF::from_pmf(std::move(w), fmt::format("point-mass({})", k));
}

LatticeCF hermite_jump_law(double a1, double a2) {
  check_hermite(a1, a2);
  PMFWindow w;
  w.k_min = 1;
  w.masses = {a1 / (a1 + a2), a2 / (a1 + a2)};
  return LatticeCF::from_pmf(std::move(w), fmt::format("hermite-jump(a1={}, a2={})", a1, a2));
}

// ---------------------------------------------------------------------------
// Normalizers

std::string_view to_string(NormalizerVariant variant) noexcept {
  switch (variant) {
    case NormalizerVariant::example1: return "example1";
    case NormalizerVariant::example2: return "example2";
    case NormalizerVariant::example3: return "example3";
    case NormalizerVariant::example4: return "example4";
    case NormalizerVariant::nonunique_first: return "nonunique-first";
    case NormalizerVariant::nonunique_second: return "nonunique-second";
    case NormalizerVariant::theorem1: return "theorem1";
  }
  return "unknown";
}

NormalizerVariant normalizer_variant_from_string(std::string_view name) {
  for (auto v : {NormalizerVariant::example1, NormalizerVariant::example2,
                 NormalizerVariant::example3, NormalizerVariant::example4,
                 NormalizerVariant::nonunique_first, NormalizerVariant::nonunique_second,
                 NormalizerVariant::theorem1}) {
    if (to_string(v) == name) return v;
  }
  throw DomainError(fmt::format("unknown normalizer variant '{}'", name));
}

bool needs_jump(NormalizerVariant variant) noexcept {
  return variant == NormalizerVariant::example4 || variant == NormalizerVariant::theorem1;
}

void validate_normalizer(NormalizerVariant variant, const FamilyParams& p, int n,
                         const LatticeCF* jump) {
  require(n >= 1, "normalizer index n must be >= 1");
  if (needs_jump(variant)) require(jump != nullptr, "normalizer needs a jump CF h");
  switch (variant) {
    case NormalizerVariant::example1:
    case NormalizerVariant::nonunique_first:
      require(in_unit_exponent(p.gamma), "gamma must lie in (0, 1]");
      break;
    case NormalizerVariant::nonunique_second:
      require(p.gamma > 0.0 && p.gamma < 0.5, "gamma must lie in (0, 1/2)");
      break;
    case NormalizerVariant::example2:
      require(positive(p.lambda1) && positive(p.lambda2), "lambda1 and lambda2 must be > 0");
      require(positive(p.lambda), "lambda must be > 0");
      break;
    case NormalizerVariant::example3:
      check_hermite(p.a1, p.a2);
      require(positive(p.a), "a must be > 0");
      require(p.a >= p.a1 + p.a2, "a must satisfy a >= a1 + a2");
      break;
    case NormalizerVariant::example4:
      require(positive(p.a), "a must be > 0");
      require(std::isfinite(p.A) && p.A >= p.a, "A must satisfy A >= a");
      break;
    case NormalizerVariant::theorem1:
      require(p.lambda > 0.0 && p.lambda < 1.0, "lambda must lie in (0, 1)");
      break;
  }
}

LatticeCF make_normalizer(NormalizerVariant variant, const FamilyParams& p, int n,
                          const LatticeCF* jump) {
  validate_normalizer(variant, p, n, jump);
  FamilyParams params = p;
  params.n = n;
  const double nd = static_cast<double>(n);
  const std::string label = fmt::format("g_n[{}](n={})", to_string(variant), n);
  auto make = [&](auto value, auto complement) {
    return LatticeCF(CFKind::normalizer_variant, label, params, value, complement);
  };

  switch (variant) {
    case NormalizerVariant::example1: {
      const double c = std::pow(nd, -1.0 / p.gamma);
      auto comp = [c](double t) {
        const double s = std::sin(0.5 * t);
        return cplx{2.0 * c * s * s, 0.0};
      };
      return make([=](double t) { return 1.0 - comp(t); }, comp);
    }
    case NormalizerVariant::nonunique_first: {
      const double c = std::pow(nd, -1.0 / p.gamma);
      auto comp = [c](double t) { return c * one_minus_expi(t); };
      return make([=](double t) { return 1.0 - comp(t); }, comp);
    }
    case NormalizerVariant::nonunique_second: {
      const double c = std::pow(nd, -1.0 / (2.0 * p.gamma));
      auto comp = [c](double t) { return c * principal_power(one_minus_expi(t), 0.5); };
      return make([=](double t) { return 1.0 - comp(t); }, comp);
    }
    case NormalizerVariant::example2: {
      const double a = p.lambda1 / p.lambda;
      const double b = p.lambda2 / p.lambda;
      const double scale = 1.0 / (nd * nd);
      auto comp = [=](double t) {
        const cplx u = a * principal_power(one_minus_expi(t), 0.5) +
                       b * principal_power(one_minus_expi(-t), 0.5);
        return scale * u * u;
      };
      return make([=](double t) { return 1.0 - comp(t); }, comp);
    }
    case NormalizerVariant::example3: {
      const double scale = 1.0 / (p.a * nd);
      const double a1 = p.a1;
      const double a2 = p.a2;
      auto comp = [=](double t) {
        return scale * (a1 * one_minus_expi(t) + a2 * one_minus_expi(2.0 * t));
      };
      return make([=](double t) { return 1.0 - comp(t); }, comp);
    }
    case NormalizerVariant::example4: {
      const double w = p.a / (nd * p.A);
      const LatticeCF h = *jump;
      auto comp = [w, h](double t) { return w * h.complement(t); };
      return make([=](double t) { return 1.0 - comp(t); }, comp);
    }
    case NormalizerVariant::theorem1: {
      const double w = p.lambda / nd;
      const LatticeCF h = *jump;
      auto comp = [w, h](double t) { return w * h.complement(t); };
      return make([=](double t) { return 1.0 - comp(t); }, comp);
    }
  }
  throw DomainError("unknown normalizer variant");
}

cplx normalizer(NormalizerVariant variant, const FamilyParams& params, int n, double t,
                const LatticeCF* jump) {
  return make_normalizer(variant, params, n, jump)(t);
}

// ---------------------------------------------------------------------------
// PGFs

std::string_view to_string(PgfFamily family) noexcept {
  switch (family) {
    case PgfFamily::positive_discrete_stable: return "positive-discrete-stable";
    case PgfFamily::poisson: return "poisson";
    case PgfFamily::hermite: return "hermite";
    case PgfFamily::unit: return "unit";
    case PgfFamily::shifted_poisson: return "shifted-poisson";
    case PgfFamily::shifted_geometric: return "shifted-geometric";
  }
  return "unknown";
}

ClosedFormPgf::ClosedFormPgf(PgfFamily family, const FamilyParams& params)
    : family_(family), params_(params) {
  switch (family) {
    case PgfFamily::positive_discrete_stable: check_stable(params.lambda, params.gamma); break;
    case PgfFamily::poisson: require(positive(params.A), "Poisson rate A must be > 0"); break;
    case PgfFamily::hermite: check_hermite(params.a1, params.a2); break;
    case PgfFamily::unit: break;
    case PgfFamily::shifted_poisson: require(nonnegative(params.mu), "mu must be >= 0"); break;
    case PgfFamily::shifted_geometric:
      require(params.p > 0.0 && params.p <= 1.0, "p must lie in (0, 1]");
      break;
  }
}

ClosedFormPgf ClosedFormPgf::positive_discrete_stable(double lambda, double gamma) {
  FamilyParams p;
  p.lambda = lambda;
  p.gamma = gamma;
  return {PgfFamily::positive_discrete_stable, p};
}

ClosedFormPgf ClosedFormPgf::poisson(double rate) {
  FamilyParams p;
  p.A = rate;
  return {PgfFamily::poisson, p};
}

ClosedFormPgf ClosedFormPgf::hermite(double a1, double a2) {
  FamilyParams p;
  p.a1 = a1;
  p.a2 = a2;
  return {PgfFamily::hermite, p};
}

ClosedFormPgf ClosedFormPgf::unit() { return {PgfFamily::unit, FamilyParams{}}; }

ClosedFormPgf ClosedFormPgf::shifted_poisson(double mu) {
  FamilyParams p;
  p.mu = mu;
  return {PgfFamily::shifted_poisson, p};
}

ClosedFormPgf ClosedFormPgf::shifted_geometric(double prob) {
  FamilyParams p;
  p.p = prob;
  return {PgfFamily::shifted_geometric, p};
}

cplx ClosedFormPgf::operator()(cplx z, cplx omz) const {
  if (!(std::abs(z) <= 1.0 + 1e-12)) {
    throw DomainError(fmt::format("PGF argument |z| = {} lies outside the closed unit disk",
                                  std::abs(z)));
  }
  const FamilyParams& p = params_;
  switch (family_) {
    case PgfFamily::positive_discrete_stable:
      return std::exp(-p.lambda * (p.gamma == 1.0 ? omz : principal_power(omz, p.gamma)));
    case PgfFamily::poisson: return std::exp(-p.A * omz);
    case PgfFamily::hermite: return std::exp(-p.a1 * omz - p.a2 * omz * (1.0 + z));
    case PgfFamily::unit: return z;
    case PgfFamily::shifted_poisson: return z * std::exp(-p.mu * omz);
    case PgfFamily::shifted_geometric: return p.p * z / (p.p + (1.0 - p.p) * omz);
  }
  return {0.0, 0.0};
}

double ClosedFormPgf::mean() const noexcept {
  const FamilyParams& p = params_;
  switch (family_) {
    case PgfFamily::positive_discrete_stable:
      return p.gamma == 1.0 ? p.lambda : std::numeric_limits<double>::infinity();
    case PgfFamily::poisson: return p.A;
    case PgfFamily::hermite: return p.a1 + 2.0 * p.a2;
    case PgfFamily::unit: return 1.0;
    case PgfFamily::shifted_poisson: return 1.0 + p.mu;
    case PgfFamily::shifted_geometric: return 1.0 / p.p;
  }
  return 0.0;
}

LatticeCF ClosedFormPgf::cf() const {
  switch (family_) {
    case PgfFamily::positive_discrete_stable:
      return latstab::positive_discrete_stable(params_.lambda, params_.gamma);
    case PgfFamily::poisson: return latstab::poisson(params_.A);
    case PgfFamily::hermite: return latstab::hermite(params_.a1, params_.a2);
    default: break;
  }
  const ClosedFormPgf self = *this;
  return LatticeCF::from_callable(
      fmt::format("pgf-cf({})", to_string(family_)),
      [self](double t) { return self(cplx{std::cos(t), std::sin(t)}, one_minus_expi(t)); });
}

cplx pgf_closed_form(PgfFamily family, const FamilyParams& params, cplx z) {
  return ClosedFormPgf(family, params)(z);
}

}  // namespace latstab

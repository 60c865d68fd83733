#include "latstab/composition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include <fmt/format.h>

#include "latstab/error.hpp"

namespace latstab {
namespace {

// sum_k coeffs[k] w^{k + offset} by Horner; offset is 0 or 1.
cplx horner(const std::vector<double>& coeffs, cplx w, int offset) {
  cplx acc{0.0, 0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * w + *it;
  return offset == 1 ? acc * w : acc;
}

// Clears DFT noise below the validity floor; anything more negative means
// the base is not a probability law.
void clean_coefficients(std::vector<double>& coeffs, const std::string& label) {
  for (double& c : coeffs) {
    if (c < -kMassTolerance) {
      throw DomainError(fmt::format("base {} has a negative coefficient {:.3e}", label, c));
    }
    if (c < 0.0) c = 0.0;
  }
}

}  // namespace

SplitLatticePGF SplitLatticePGF::closed_form(ClosedFormPgf pgf) {
  SplitLatticePGF s;
  s.label_ = fmt::format("closed-form {}", to_string(pgf.family()));
  s.pgf_ = std::move(pgf);
  return s;
}

SplitLatticePGF SplitLatticePGF::from_coefficients(std::vector<double> negative,
                                                   std::vector<double> nonnegative,
                                                   double negative_tail,
                                                   double nonnegative_tail,
                                                   std::string label) {
  SplitLatticePGF s;
  s.label_ = std::move(label);
  auto bad = [](double c) { return !(c >= 0.0) || !std::isfinite(c); };
  if (std::any_of(negative.begin(), negative.end(), bad) ||
      std::any_of(nonnegative.begin(), nonnegative.end(), bad) || bad(negative_tail) ||
      bad(nonnegative_tail)) {
    throw DomainError("split PGF coefficients and tails must be >= 0");
  }
  s.negative_ = std::move(negative);
  s.nonnegative_ = std::move(nonnegative);
  s.negative_tail_ = negative_tail;
  s.nonnegative_tail_ = nonnegative_tail;
  if (std::abs(s.total_mass() - 1.0) > 1e-10) {
    throw DomainError(fmt::format("split PGF total mass {} differs from 1", s.total_mass()));
  }
  return s;
}

SplitLatticePGF SplitLatticePGF::from_pmf(const PMFWindow& pmf, std::string label) {
  std::vector<double> neg;
  std::vector<double> nonneg;
  for (std::int64_t k = pmf.k_min; k <= pmf.k_max(); ++k) {
    const double p = pmf.mass(k);
    if (k < 0) {
      const auto m = static_cast<std::size_t>(-k);
      if (neg.size() < m) neg.resize(m, 0.0);
      neg[m - 1] = p;
    } else {
      const auto j = static_cast<std::size_t>(k);
      if (nonneg.size() <= j) nonneg.resize(j + 1, 0.0);
      nonneg[j] = p;
    }
  }
  clean_coefficients(neg, label);
  clean_coefficients(nonneg, label);
  while (!neg.empty() && neg.back() == 0.0) neg.pop_back();
  return from_coefficients(std::move(neg), std::move(nonneg), 0.0, pmf.tail_mass,
                           std::move(label));
}

SplitLatticePGF SplitLatticePGF::series_from_cf(const LatticeCF& cf, std::size_t terms) {
  if (terms < 2 || !std::has_single_bit(terms)) {
    throw DomainError("series terms must be a power of two >= 2");
  }
  const std::size_t grid = 4 * terms;
  const PMFWindow w = invert_to_pmf(cf, grid);
  const auto limit = static_cast<std::int64_t>(terms);
  std::vector<double> neg(terms - 1, 0.0);
  std::vector<double> nonneg(terms, 0.0);
  double outer = 0.0;
  for (std::int64_t k = w.k_min; k <= w.k_max(); ++k) {
    const double p = w.mass(k);
    if (k <= -limit || k >= limit) {
      outer += std::abs(p);
    } else if (k < 0) {
      neg[static_cast<std::size_t>(-k) - 1] = p;
    } else {
      nonneg[static_cast<std::size_t>(k)] = p;
    }
  }
  clean_coefficients(neg, cf.label());
  clean_coefficients(nonneg, cf.label());
  while (!neg.empty() && neg.back() == 0.0) neg.pop_back();
  // an all-zero negative side means the base is one-sided up to noise
  const double neg_mass = std::accumulate(neg.begin(), neg.end(), 0.0);
  if (neg_mass <= kMassTolerance * static_cast<double>(terms)) {
    outer += neg_mass;
    neg.clear();
  }

  SplitLatticePGF s;
  s.label_ = fmt::format("series({} terms) of {}", terms, cf.label());
  s.negative_ = std::move(neg);
  s.nonnegative_ = std::move(nonneg);
  s.nonnegative_tail_ = outer;
  return s;
}

SplitLatticePGF SplitLatticePGF::adaptive_series_from_cf(const LatticeCF& cf,
                                                         double tail_target,
                                                         std::size_t max_terms) {
  std::size_t terms = 16;
  SplitLatticePGF s = series_from_cf(cf, terms);
  while (s.tail_bound() > tail_target && terms < max_terms) {
    terms *= 2;
    s = series_from_cf(cf, terms);
  }
  return s;
}

double SplitLatticePGF::total_mass() const noexcept {
  if (pgf_) return 1.0;
  return std::accumulate(negative_.begin(), negative_.end(), 0.0) +
         std::accumulate(nonnegative_.begin(), nonnegative_.end(), 0.0) + negative_tail_ +
         nonnegative_tail_;
}

cplx SplitLatticePGF::negative_part(cplx w) const {
  if (negative_.empty()) return {0.0, 0.0};
  return horner(negative_, w, 1);
}

cplx SplitLatticePGF::nonnegative_part(cplx w, cplx one_minus_w) const {
  if (pgf_) return (*pgf_)(w, one_minus_w);
  return horner(nonnegative_, w, 0);
}

cplx casual_inner(const SplitLatticePGF& base, const LatticeCF& g_n, double t,
                  double tail_tolerance) {
  if (base.tail_bound() > tail_tolerance) {
    throw CompositionError(fmt::format("base {} truncation tail {:.3e} exceeds {:.3e}",
                                       base.label(), base.tail_bound(), tail_tolerance));
  }
  const cplx w = g_n(t);
  if (!(std::abs(w) <= 1.0 + 1e-12)) {
    throw CompositionError(
        fmt::format("|g_n({})| = {} exceeds 1 beyond rounding", t, std::abs(w)));
  }
  cplx value = base.nonnegative_part(w, g_n.complement(t));
  if (!base.one_sided()) {
    const cplx w_neg = g_n(-t);
    if (!(std::abs(w_neg) <= 1.0 + 1e-12)) {
      throw CompositionError(
          fmt::format("|g_n({})| = {} exceeds 1 beyond rounding", -t, std::abs(w_neg)));
    }
    value += base.negative_part(w_neg);
  }
  return value;
}

cplx casual_compose_pow(const SplitLatticePGF& base, const LatticeCF& g_n, int n, double t,
                        double tail_tolerance) {
  if (n < 1) throw DomainError("n must be >= 1");
  return ipow(casual_inner(base, g_n, t, tail_tolerance), static_cast<std::uint64_t>(n));
}

VerificationReport verify_representation(const CasualRepresentation& rep,
                                         std::size_t grid_size, double tolerance,
                                         double validity_tolerance) {
  if (!is_valid_grid(grid_size)) {
    throw DomainError(fmt::format("grid size {} must be a power of two >= 8", grid_size));
  }
  if (rep.n_min < 1 || rep.n_max < rep.n_min) throw DomainError("empty or invalid n-range");

  VerificationReport report;
  report.label = rep.label;
  report.grid_size = grid_size;
  report.tolerance = tolerance;
  report.base_tail = rep.base.tail_bound();
  report.normalizers_valid = true;

  std::vector<double> ts(grid_size);
  std::vector<cplx> target(grid_size);
  for (std::size_t l = 0; l < grid_size; ++l) {
    ts[l] = kTwoPi * static_cast<double>(l) / static_cast<double>(grid_size);
    target[l] = rep.target(ts[l]);
  }

  for (int n = rep.n_min; n <= rep.n_max; ++n) {
    VerificationRow row;
    row.n = n;
    try {
      const LatticeCF g = rep.normalizer(n);
      row.normalizer_validity = is_valid_cf(g, grid_size, validity_tolerance);
      double worst = 0.0;
      for (std::size_t l = 0; l < grid_size; ++l) {
        worst = std::max(worst, std::abs(target[l] - casual_compose_pow(rep.base, g, n, ts[l])));
      }
      row.sup_error = worst;
    } catch (const std::exception& e) {
      row.sup_error = std::numeric_limits<double>::infinity();
      if (report.error.empty()) report.error = fmt::format("n={}: {}", n, e.what());
    }
    report.normalizers_valid = report.normalizers_valid && row.normalizer_validity.is_valid;
    report.max_error = std::max(report.max_error, row.sup_error);
    report.rows.push_back(row);
  }
  report.verdict = report.max_error <= tolerance;
  return report;
}

// ---------------------------------------------------------------------------

CasualRepresentation example1_representation(double lambda, double gamma, int n_max) {
  FamilyParams p;
  p.lambda = lambda;
  p.gamma = gamma;
  return {fmt::format("example1(lambda={}, gamma={})", lambda, gamma),
          symmetric_discrete_stable(lambda, gamma),
          SplitLatticePGF::closed_form(ClosedFormPgf::positive_discrete_stable(lambda, gamma)),
          [p](int n) { return make_normalizer(NormalizerVariant::example1, p, n); }, 1, n_max};
}

CasualRepresentation example2_representation(double lambda1, double lambda2, double lambda,
                                             int n_max) {
  FamilyParams p;
  p.lambda1 = lambda1;
  p.lambda2 = lambda2;
  p.lambda = lambda;
  validate_normalizer(NormalizerVariant::example2, p, 1);
  return {fmt::format("example2(lambda1={}, lambda2={}, lambda={})", lambda1, lambda2, lambda),
          two_sided_discrete_stable(lambda1, lambda2, 0.5),
          SplitLatticePGF::closed_form(ClosedFormPgf::positive_discrete_stable(lambda, 0.5)),
          [p](int n) { return make_normalizer(NormalizerVariant::example2, p, n); }, 1, n_max};
}

CasualRepresentation example3_representation(double a1, double a2, double a, int n_max) {
  FamilyParams p;
  p.a1 = a1;
  p.a2 = a2;
  p.a = a;
  validate_normalizer(NormalizerVariant::example3, p, 1);
  return {fmt::format("example3(a1={}, a2={}, a={})", a1, a2, a), hermite(a1, a2),
          SplitLatticePGF::closed_form(ClosedFormPgf::poisson(a)),
          [p](int n) { return make_normalizer(NormalizerVariant::example3, p, n); }, 1, n_max};
}

CasualRepresentation example4_representation(double a, double A, const LatticeCF& h,
                                             int n_max) {
  FamilyParams p;
  p.a = a;
  p.A = A;
  validate_normalizer(NormalizerVariant::example4, p, 1, &h);
  return {fmt::format("example4(a={}, A={}, h={})", a, A, h.label()), compound_poisson(a, h),
          SplitLatticePGF::closed_form(ClosedFormPgf::poisson(A)),
          [p, h](int n) { return make_normalizer(NormalizerVariant::example4, p, n, &h); }, 1,
          n_max};
}

CasualRepresentation nonunique_first_representation(double lambda, double gamma, int n_max) {
  FamilyParams p;
  p.lambda = lambda;
  p.gamma = gamma;
  return {fmt::format("nonunique-first(lambda={}, gamma={})", lambda, gamma),
          positive_discrete_stable(lambda, gamma),
          SplitLatticePGF::closed_form(ClosedFormPgf::positive_discrete_stable(lambda, gamma)),
          [p](int n) { return make_normalizer(NormalizerVariant::nonunique_first, p, n); }, 1,
          n_max};
}

CasualRepresentation nonunique_second_representation(double lambda, double gamma, int n_max) {
  FamilyParams p;
  p.lambda = lambda;
  p.gamma = gamma;
  validate_normalizer(NormalizerVariant::nonunique_second, p, 1);
  return {fmt::format("nonunique-second(lambda={}, gamma={})", lambda, gamma),
          positive_discrete_stable(lambda, gamma),
          SplitLatticePGF::closed_form(
              ClosedFormPgf::positive_discrete_stable(lambda, 2.0 * gamma)),
          [p](int n) { return make_normalizer(NormalizerVariant::nonunique_second, p, n); }, 1,
          n_max};
}

NonuniquenessResult nonuniqueness_demo(double lambda, double gamma, int n_min, int n_max,
                                       std::size_t grid_size, double tolerance) {
  if (!(gamma > 0.0 && gamma < 0.5)) throw DomainError("gamma must lie in (0, 1/2)");
  CasualRepresentation first = nonunique_first_representation(lambda, gamma, n_max);
  CasualRepresentation second = nonunique_second_representation(lambda, gamma, n_max);
  first.n_min = second.n_min = n_min;

  NonuniquenessResult out;
  out.first = verify_representation(first, grid_size, tolerance);
  out.second = verify_representation(second, grid_size, tolerance);
  out.base_tv = tv_distance(invert_to_pmf(first.base.pgf()->cf(), grid_size),
                            invert_to_pmf(second.base.pgf()->cf(), grid_size));
  return out;
}

}  // namespace latstab

namespace latstab {

LatticeCF theorem1_row_cf(const ClosedFormPgf& count_pgf, const LatticeCF& h, double lambda,
                          int n) {
  FamilyParams p;
  p.lambda = lambda;
  const LatticeCF g = make_normalizer(NormalizerVariant::theorem1, p, n, &h);
  const SplitLatticePGF base = SplitLatticePGF::closed_form(count_pgf);
  return LatticeCF::from_callable(
      fmt::format("theorem1-row(P={}, h={}, lambda={}, n={})", to_string(count_pgf.family()),
                  h.label(), lambda, n),
      [base, g, n](double t) { return casual_compose_pow(base, g, n, t); });
}

LatticeCF theorem1_limit_cf(const ClosedFormPgf& count_pgf, const LatticeCF& h, double lambda) {
  const double m = count_pgf.mean();
  if (!std::isfinite(m)) throw DomainError("count law must have a finite mean P'(1)");
  return compound_poisson(lambda * m, h);
}

}  // namespace latstab

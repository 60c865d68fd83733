#include <cmath>

#include <gtest/gtest.h>

#include "latstab/composition.hpp"
#include "latstab/error.hpp"
#include "latstab/families.hpp"
#include "latstab/inversion.hpp"

using namespace latstab;

namespace {

SplitLatticePGF degenerate(int k) {
  std::vector<double> nonneg(static_cast<std::size_t>(k) + 1, 0.0);
  nonneg.back() = 1.0;
  return SplitLatticePGF::from_coefficients({}, nonneg);
}

LatticeCF example1_g(double gamma, int n) {
  FamilyParams p;
  p.gamma = gamma;
  return make_normalizer(NormalizerVariant::example1, p, n);
}

// |binom(1/2, j)| = Gamma(j - 1/2) / (2 sqrt(pi) Gamma(j + 1)) for j >= 1
double half_binomial_abs(double j) {
  return std::exp(std::lgamma(j - 0.5) - std::lgamma(j + 1.0)) / (2.0 * std::sqrt(kPi));
}

// Mass the N-point DFT reports at k for the law {1 - c at 0; c |binom(1/2, j)| at j >= 1}:
// the sum over m of the true mass at k + mN, with the far tail integrated.
double aliased_binomial_law(double c, std::int64_t k, std::int64_t N) {
  constexpr std::int64_t kTerms = 4000;
  double s = k == 0 ? 1.0 - c : 0.0;
  for (std::int64_t m = k >= 1 ? 0 : 1; m <= kTerms; ++m) {
    s += c * half_binomial_abs(static_cast<double>(k + m * N));
  }
  const double j_end = static_cast<double>(k) + (kTerms + 0.5) * static_cast<double>(N);
  return s + c / (2.0 * std::sqrt(kPi)) * 2.0 / std::sqrt(j_end) / static_cast<double>(N);
}

}  // namespace

TEST(CasualInner, DegenerateBases) {
  const auto g = example1_g(0.5, 3);
  for (double t : {0.0, 0.4, 2.5, -1.0}) {
    EXPECT_NEAR(std::abs(casual_inner(degenerate(0), g, t) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(casual_inner(degenerate(1), g, t) - g(t)), 0.0, 1e-15);
  }
}

TEST(CasualInner, PositiveStableWithExampleOneNormalizer) {
  const auto base = SplitLatticePGF::closed_form(ClosedFormPgf::positive_discrete_stable(1.0, 0.5));
  const double t = kPi / 3;
  const double expected = std::exp(-(1.0 / 4.0) * std::sqrt(1.0 - std::cos(t)));
  EXPECT_NEAR(std::abs(casual_inner(base, example1_g(0.5, 4), t) - expected), 0.0, 1e-13);
}

TEST(CasualInner, EqualsOneAtOrigin) {
  const auto g = example1_g(0.3, 5);
  for (const auto& base :
       {SplitLatticePGF::closed_form(ClosedFormPgf::poisson(2.0)),
        SplitLatticePGF::closed_form(ClosedFormPgf::positive_discrete_stable(1.0, 0.3)),
        SplitLatticePGF::adaptive_series_from_cf(two_sided_discrete_stable(1.0, 0.5, 1.0)),
        SplitLatticePGF::from_coefficients({0.2, 0.1}, {0.3, 0.4})}) {
    EXPECT_NEAR(std::abs(casual_inner(base, g, 0.0) - 1.0), 0.0, 1e-12);
  }
}

TEST(CasualInner, TwoSidedBaseUsesReflectedArgument) {
  const auto base = SplitLatticePGF::from_coefficients({0.25}, {0.5, 0.25});
  const auto g = example1_g(1.0, 2);
  const double t = 0.9;
  const cplx expected = 0.25 * g(-t) + 0.5 + 0.25 * g(t);
  EXPECT_NEAR(std::abs(casual_inner(base, g, t) - expected), 0.0, 1e-15);
}

TEST(CasualInner, Errors) {
  const auto big = LatticeCF::from_callable("big", [](double) { return cplx(1.5); });
  EXPECT_THROW(casual_inner(degenerate(2), big, 0.3), CompositionError);
  const auto base = SplitLatticePGF::from_coefficients({}, {0.5, 0.5 - 1e-4}, 0.0, 1e-4);
  EXPECT_THROW(casual_inner(base, example1_g(0.5, 2), 0.3), CompositionError);
}

TEST(SplitLatticePGF, CoefficientValidation) {
  EXPECT_THROW(SplitLatticePGF::from_coefficients({}, {0.5, 0.6}), DomainError);
  EXPECT_THROW(SplitLatticePGF::from_coefficients({-0.1}, {0.5, 0.6}), DomainError);
  const auto s = SplitLatticePGF::from_coefficients({}, {0.25, 0.75});
  EXPECT_TRUE(s.one_sided());
  EXPECT_FALSE(s.has_closed_form());
  EXPECT_NEAR(s.total_mass(), 1.0, 1e-15);
}

TEST(SplitLatticePGF, OneSidedBasesHaveEmptyNegativePart) {
  EXPECT_TRUE(SplitLatticePGF::adaptive_series_from_cf(poisson(2.0)).one_sided());
  // a heavy right tail aliases onto negative k; that mass stays within the tail bound
  const auto s = SplitLatticePGF::adaptive_series_from_cf(positive_discrete_stable(1.0, 0.9));
  double negative = 0.0;
  for (double m : s.negative()) negative += m;
  EXPECT_LE(negative, s.tail_bound());
  EXPECT_TRUE(SplitLatticePGF::closed_form(ClosedFormPgf::poisson(1.0)).one_sided());
  const auto two = SplitLatticePGF::adaptive_series_from_cf(two_sided_discrete_stable(1.0, 1.0, 1.0));
  EXPECT_FALSE(two.one_sided());
  EXPECT_LE(two.tail_bound(), 1e-12);
  EXPECT_NEAR(two.total_mass(), 1.0, 1e-10);
}

TEST(SplitLatticePGF, SeriesAgreesWithClosedForm) {
  const auto pgf = ClosedFormPgf::poisson(3.0);
  const auto closed = SplitLatticePGF::closed_form(pgf);
  const auto series = SplitLatticePGF::adaptive_series_from_cf(pgf.cf());
  ASSERT_LE(series.tail_bound(), 1e-12);
  FamilyParams p;
  p.a = 1.0;
  p.A = 3.0;
  const LatticeCF h = hermite_jump_law(1.0, 0.5);
  for (int n : {1, 4, 16}) {
    const auto g = make_normalizer(NormalizerVariant::example4, p, n, &h);
    for (int l = 0; l < 512; ++l) {
      const double t = kTwoPi * l / 512.0;
      EXPECT_LE(std::abs(casual_inner(closed, g, t) - casual_inner(series, g, t)), 1e-10);
    }
  }
}

TEST(SplitLatticePGF, HeavyTailedSeriesAgreesWithClosedForm) {
  const auto pgf = ClosedFormPgf::positive_discrete_stable(1.0, 0.9);
  const auto closed = SplitLatticePGF::closed_form(pgf);
  const auto series = SplitLatticePGF::adaptive_series_from_cf(pgf.cf());
  const auto g = example1_g(0.9, 3);
  double err = 0.0;
  for (int l = 0; l < 512; ++l) {
    const double t = kTwoPi * l / 512.0;
    err = std::max(err, std::abs(casual_inner(closed, g, t) - casual_inner(series, g, t, 1.0)));
  }
  EXPECT_LE(err, std::max(1e-10, 2.0 * series.tail_bound()));
}

TEST(SplitLatticePGF, MonotoneTruncation) {
  // Example 2 base series on growing windows
  const auto target = two_sided_discrete_stable(1.0, 1.0, 0.5);
  FamilyParams p;
  p.lambda1 = 1.0;
  p.lambda2 = 1.0;
  p.lambda = 3.0;
  const auto base_cf = positive_discrete_stable(3.0, 0.5);
  const int n = 4;
  const auto g = make_normalizer(NormalizerVariant::example2, p, n);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t terms = 16; terms <= 4096; terms *= 2) {
    const auto series = SplitLatticePGF::series_from_cf(base_cf, terms);
    double err = 0.0;
    for (int l = 0; l < 256; ++l) {
      const double t = kTwoPi * l / 256.0;
      err = std::max(err, std::abs(target(t) - casual_compose_pow(series, g, n, t, 1.0)));
    }
    EXPECT_LE(err, previous + series.tail_bound()) << terms;
    previous = err;
  }
}

TEST(CasualComposePow, NOneEqualsInner) {
  const auto base = SplitLatticePGF::closed_form(ClosedFormPgf::hermite(1.0, 0.5));
  const auto g = example1_g(0.5, 1);
  for (double t : {0.1, 1.0, 3.0}) {
    EXPECT_EQ(casual_compose_pow(base, g, 1, t), casual_inner(base, g, t));
  }
}

TEST(CasualComposePow, ExampleIdentities) {
  const auto ex1 = example1_representation(1.0, 0.5, 8);
  EXPECT_LE(std::abs(casual_compose_pow(ex1.base, ex1.normalizer(8), 8, 1.0) -
                     eval_symmetric_discrete_stable(1.0, 0.5, 1.0)),
            1e-12);
  const auto ex3 = example3_representation(1.0, 0.5, 2.0, 5);
  EXPECT_LE(std::abs(casual_compose_pow(ex3.base, ex3.normalizer(5), 5, 2.0) - eval_hermite(1.0, 0.5, 2.0)),
            1e-12);
}

TEST(VerifyRepresentation, ExamplesPass) {
  const auto r1 = verify_representation(example1_representation(1.0, 0.5, 64), 1 << 12, 1e-10);
  EXPECT_TRUE(r1.passed()) << r1.max_error;
  EXPECT_EQ(r1.rows.size(), 64u);
  EXPECT_EQ(r1.rows.front().n, 1);
  const auto r4 =
      verify_representation(example4_representation(1.0, 2.0, hermite_jump_law(1.0, 0.5), 32), 1 << 12, 1e-12);
  EXPECT_TRUE(r4.passed()) << r4.max_error;
  const auto r2 = verify_representation(example2_representation(1.0, 1.0, 3.0, 8), 1 << 10, 1e-12);
  EXPECT_TRUE(r2.passed()) << r2.max_error;
}

TEST(VerifyRepresentation, VerdictIffMaxErrorWithinTolerance) {
  const auto rep = example1_representation(1.0, 0.5, 4);
  for (double tol : {1e-20, 1e-15, 1e-12}) {
    const auto r = verify_representation(rep, 256, tol);
    EXPECT_EQ(r.verdict, r.max_error <= tol);
    double m = 0.0;
    for (const auto& row : r.rows) m = std::max(m, row.sup_error);
    EXPECT_EQ(r.max_error, m);
  }
}

TEST(VerifyRepresentation, CorruptedNormalizerFails) {
  auto rep = example1_representation(1.0, 0.5, 16);
  rep.normalizer = [](int n) { return example1_g(1.0, n); };
  const auto r = verify_representation(rep, 1 << 12, 1e-10);
  EXPECT_FALSE(r.verdict);
  EXPECT_GT(r.max_error, 1e-3);
  // direct evaluation at n = 2, t = pi: g_2 = 0, so the composed value is exp(-1)^2
  const double direct = std::abs(eval_symmetric_discrete_stable(1.0, 0.5, kPi) - std::exp(-2.0));
  EXPECT_GE(r.max_error, direct - 1e-12);
  EXPECT_GT(direct, 1e-3);
}

TEST(VerifyRepresentation, InvalidNormalizersAreFlagged) {
  const auto r = verify_representation(example2_representation(1.0, 1.0, 1.0, 2), 1 << 10, 1e-12);
  EXPECT_FALSE(r.normalizers_valid);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.rows.front().normalizer_validity.is_valid);
}

TEST(VerifyRepresentation, FailuresAreRecordedNotThrown) {
  auto rep = example1_representation(1.0, 0.5, 3);
  rep.normalizer = [](int) { return LatticeCF::from_callable("big", [](double) { return cplx(2.0); }); };
  VerificationReport r;
  EXPECT_NO_THROW(r = verify_representation(rep, 64, 1e-12));
  EXPECT_FALSE(r.verdict);
  EXPECT_FALSE(r.error.empty());
  EXPECT_TRUE(std::isinf(r.max_error));
}

TEST(Representations, DomainErrors) {
  EXPECT_THROW(example1_representation(1.0, 1.2, 4), DomainError);
  EXPECT_THROW(example3_representation(1.0, 0.5, 1.0, 4), DomainError);
  EXPECT_THROW(example4_representation(2.0, 1.0, point_mass(1), 4), DomainError);
  EXPECT_THROW(nonunique_second_representation(1.0, 0.5, 4), DomainError);
  EXPECT_THROW(nonuniqueness_demo(1.0, 0.6, 1, 4, 256, 1e-12), DomainError);
}

TEST(Nonuniqueness, BothRepresentationsVerifyAndBasesDiffer) {
  const auto d = nonuniqueness_demo(1.0, 0.25, 1, 16, 1 << 12, 1e-12);
  EXPECT_TRUE(d.first.passed()) << d.first.max_error;
  EXPECT_TRUE(d.second.passed()) << d.second.max_error;
  EXPECT_GT(d.base_tv, 1e-3);
}

TEST(Nonuniqueness, SecondNormalizerIsBinomialSeriesLaw) {
  constexpr std::int64_t N = 1 << 14;
  for (double gamma : {0.25, 0.45}) {
    for (int n : {1, 2, 9}) {
      FamilyParams p;
      p.gamma = gamma;
      const PMFWindow w = invert_to_pmf(make_normalizer(NormalizerVariant::nonunique_second, p, n), N);
      const double c = std::pow(static_cast<double>(n), -1.0 / (2.0 * gamma));
      for (std::int64_t k = -200; k <= 200; ++k) {
        EXPECT_NEAR(w.mass(k), aliased_binomial_law(c, k, N), 1e-12) << k;
      }
      EXPECT_GE(w.min_mass(), -1e-12);
    }
  }
  EXPECT_NEAR(half_binomial_abs(1.0), 0.5, 1e-15);
  EXPECT_NEAR(half_binomial_abs(2.0), 0.125, 1e-15);
  EXPECT_NEAR(half_binomial_abs(3.0), 0.0625, 1e-15);
}

TEST(LimitLaw, RowAndLimitCfs) {
  const auto count = ClosedFormPgf::unit();
  const auto h = point_mass(1);
  // N = 1, unit jumps: Binomial(n, lambda / n)
  const double lambda = 0.5;
  const int n = 10;
  const auto row = theorem1_row_cf(count, h, lambda, n);
  for (double t : {0.3, 1.7}) {
    const cplx binom = std::pow(1.0 - lambda / n + lambda / n * std::polar(1.0, t), n);
    EXPECT_NEAR(std::abs(row(t) - binom), 0.0, 1e-14);
  }
  const auto limit = theorem1_limit_cf(ClosedFormPgf::shifted_poisson(1.0), hermite_jump_law(1.0, 0.5), 0.5);
  for (double t : {0.3, 1.7}) {
    EXPECT_NEAR(std::abs(limit(t) - eval_compound_poisson(1.0, hermite_jump_law(1.0, 0.5), t)), 0.0, 1e-15);
  }
  EXPECT_THROW(theorem1_limit_cf(ClosedFormPgf::positive_discrete_stable(1.0, 0.5), h, 0.5), DomainError);
  EXPECT_THROW(theorem1_row_cf(count, h, 1.5, 4), DomainError);
}

#include "latstab/lattice_cf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace latstab {

double PMFWindow::total() const noexcept {
  return std::accumulate(masses.begin(), masses.end(), 0.0);
}

double PMFWindow::min_mass() const noexcept {
  if (masses.empty()) return 0.0;
  return *std::min_element(masses.begin(), masses.end());
}

double outer_decay(const std::vector<double>& masses) noexcept {
  const std::size_t n = masses.size();
  if (n == 0) return 0.0;
  const std::size_t edge = std::max<std::size_t>(1, n / 20);
  double worst = 0.0;
  for (std::size_t j = 0; j < edge; ++j) {
    worst = std::max({worst, std::abs(masses[j]), std::abs(masses[n - 1 - j])});
  }
  return worst;
}

std::string_view to_string(CFKind kind) noexcept {
  switch (kind) {
    case CFKind::positive_discrete_stable: return "positive-discrete-stable";
    case CFKind::symmetric_discrete_stable: return "symmetric-discrete-stable";
    case CFKind::two_sided_discrete_stable: return "two-sided-discrete-stable";
    case CFKind::hermite: return "hermite";
    case CFKind::compound_poisson: return "compound-poisson";
    case CFKind::normalizer_variant: return "normalizer-variant";
    case CFKind::pmf_backed: return "pmf-backed";
    case CFKind::generic_callable: return "generic-callable";
  }
  return "unknown";
}

LatticeCF::LatticeCF(CFKind kind, std::string label, FamilyParams params,
                     Evaluator value, Evaluator complement)
    : kind_(kind),
      label_(std::move(label)),
      params_(params),
      value_(std::move(value)),
      complement_(std::move(complement)) {}

LatticeCF LatticeCF::from_pmf(PMFWindow pmf, std::string label) {
  auto shared = std::make_shared<const PMFWindow>(std::move(pmf));
  auto value = [shared](double t) {
    cplx sum{0.0, 0.0};
    std::int64_t k = shared->k_min;
    for (double p : shared->masses) {
      if (p != 0.0) {
        const double kt = static_cast<double>(k) * t;
        sum += p * cplx{std::cos(kt), std::sin(kt)};
      }
      ++k;
    }
    return sum;
  };
  // Sum of p_k (1 - e^{ikt}); exact at t = 0 and free of cancellation near it.
  auto complement = [shared](double t) {
    cplx sum{1.0 - shared->total(), 0.0};
    std::int64_t k = shared->k_min;
    for (double p : shared->masses) {
      if (p != 0.0) sum += p * one_minus_expi(static_cast<double>(k) * t);
      ++k;
    }
    return sum;
  };
  LatticeCF cf(CFKind::pmf_backed, std::move(label), FamilyParams{},
               std::move(value), std::move(complement));
  cf.pmf_ = std::move(shared);
  return cf;
}

LatticeCF LatticeCF::from_callable(std::string label, Evaluator value,
                                   Evaluator complement) {
  return LatticeCF(CFKind::generic_callable, std::move(label), FamilyParams{},
                   std::move(value), std::move(complement));
}

cplx LatticeCF::complement(double t) const {
  if (complement_) return complement_(t);
  return 1.0 - value_(t);
}

}  // namespace latstab

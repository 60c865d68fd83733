#include "latstab/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "latstab/error.hpp"

namespace latstab {

double RandomSource::uniform() {
  constexpr double kScale = 0x1.0p-53;
  for (;;) {
    const double u = static_cast<double>(engine_() >> 11) * kScale;
    if (u > 0.0) return u;
  }
}

double RandomSource::exponential() { return -std::log(uniform()); }

std::int64_t RandomSource::poisson(double mean) {
  if (!(mean >= 0.0)) throw DomainError("Poisson mean must be >= 0");
  if (mean == 0.0) return 0;
  if (mean < 1e12) return std::poisson_distribution<std::int64_t>(mean)(engine_);
  if (!(mean < 1e36)) return kSaturated;
  const double draw = mean + std::sqrt(mean) * std::normal_distribution<double>()(engine_);
  if (!(draw < static_cast<double>(kSaturated))) return kSaturated;
  return std::max<std::int64_t>(0, std::llround(draw));
}

bool RandomSource::bernoulli(double p) { return uniform() < p; }

double sample_positive_stable(double gamma, RandomSource& source) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in (0, 1]");
  if (gamma == 1.0) return 1.0;
  const double u = kPi * source.uniform();
  const double e = source.exponential();
  const double log_s = std::log(std::sin(gamma * u)) - std::log(std::sin(u)) / gamma +
                       (1.0 - gamma) / gamma * (std::log(std::sin((1.0 - gamma) * u)) - std::log(e));
  return std::exp(log_s);
}

std::int64_t sample_positive_discrete_stable(double lambda, double gamma, RandomSource& source) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be > 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in (0, 1]");
  if (gamma == 1.0) return source.poisson(lambda);
  const double s = sample_positive_stable(gamma, source);
  return source.poisson(std::pow(lambda, 1.0 / gamma) * s);
}

std::int64_t sample_compound_poisson(double a, const IntSampler& jump, RandomSource& source) {
  if (!(a > 0.0)) throw DomainError("compound Poisson rate a must be > 0");
  const std::int64_t k = source.poisson(a);
  std::int64_t sum = 0;
  for (std::int64_t j = 0; j < k; ++j) sum += jump(source);
  return sum;
}

std::int64_t sample_theorem1_row(int n, double lambda, const IntSampler& count,
                                 const IntSampler& jump, RandomSource& source) {
  if (n < 1) throw DomainError("n must be >= 1");
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0, 1)");
  const double p = lambda / static_cast<double>(n);
  std::int64_t sum = 0;
  for (int i = 0; i < n; ++i) {
    const std::int64_t ni = count(source);
    for (std::int64_t j = 0; j < ni; ++j) {
      if (source.bernoulli(p)) sum += jump(source);
    }
  }
  return sum;
}

SampleBatch draw_batch(std::string law, const IntSampler& sampler, std::size_t count,
                       std::uint64_t seed) {
  SampleBatch batch;
  batch.law = std::move(law);
  batch.seed = seed;
  batch.values.reserve(count);
  RandomSource source(seed);
  for (std::size_t i = 0; i < count; ++i) batch.values.push_back(sampler(source));
  return batch;
}

SampleBatch merge_batches(const SampleBatch& lhs, const SampleBatch& rhs) {
  SampleBatch out = lhs;
  out.values.insert(out.values.end(), rhs.values.begin(), rhs.values.end());
  return out;
}

PMFWindow empirical_pmf(const SampleBatch& batch, std::size_t max_width) {
  if (batch.values.empty()) throw DomainError("empirical_pmf needs a nonempty batch");
  if (max_width == 0) throw DomainError("histogram width must be > 0");
  const auto [lo_it, hi_it] = std::minmax_element(batch.values.begin(), batch.values.end());
  const std::int64_t lo = *lo_it;
  const std::int64_t hi = *hi_it;
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::size_t width =
      span > max_width ? max_width : static_cast<std::size_t>(span);

  std::vector<std::uint64_t> counts(width, 0);
  std::uint64_t outside = 0;
  for (std::int64_t v : batch.values) {
    const auto offset = static_cast<std::uint64_t>(v - lo);
    if (offset < width) {
      ++counts[offset];
    } else {
      ++outside;
    }
  }
  PMFWindow w;
  w.k_min = lo;
  w.masses.resize(width);
  const double inv = 1.0 / static_cast<double>(batch.values.size());
  for (std::size_t j = 0; j < width; ++j) w.masses[j] = static_cast<double>(counts[j]) * inv;
  w.tail_mass = static_cast<double>(outside) * inv;
  w.decay_estimate = outer_decay(w.masses);
  return w;
}

double expected_sampling_tv(const PMFWindow& pmf, std::size_t draws) {
  if (draws == 0) throw DomainError("expected_sampling_tv needs draws > 0");
  const double n = static_cast<double>(draws);
  double total = 0.0;
  for (double mass : pmf.masses) {
    const double p = std::clamp(mass, 0.0, 1.0);
    if (p <= 0.0 || p >= 1.0) continue;
    // mean absolute deviation of Binomial(n, p)
    const double nu = std::floor(n * p) + 1.0;
    const double log_mad = std::log(2.0 * nu) + std::lgamma(n + 1.0) - std::lgamma(nu + 1.0) -
                           std::lgamma(n - nu + 1.0) + nu * std::log(p) +
                           (n - nu + 1.0) * std::log1p(-p);
    total += std::exp(log_mad) / n;
  }
  return 0.5 * total;
}

// ---------------------------------------------------------------------------

CountLaw unit_count() {
  return {"unit", ClosedFormPgf::unit(), [](RandomSource&) { return std::int64_t{1}; }};
}

CountLaw shifted_poisson_count(double mu) {
  ClosedFormPgf pgf = ClosedFormPgf::shifted_poisson(mu);
  return {fmt::format("shifted-poisson(mu={})", mu), pgf,
          [mu](RandomSource& s) { return 1 + s.poisson(mu); }};
}

CountLaw shifted_geometric_count(double p) {
  ClosedFormPgf pgf = ClosedFormPgf::shifted_geometric(p);
  return {fmt::format("shifted-geometric(p={})", p), pgf, [p](RandomSource& s) {
            if (p == 1.0) return std::int64_t{1};
            return 1 + static_cast<std::int64_t>(std::floor(std::log(s.uniform()) / std::log1p(-p)));
          }};
}

CountLaw hermite_count(double a1, double a2) {
  ClosedFormPgf pgf = ClosedFormPgf::hermite(a1, a2);
  const double rate = a1 + a2;
  const double p_one = a1 / rate;
  return {fmt::format("hermite(a1={}, a2={})", a1, a2), pgf, [rate, p_one](RandomSource& s) {
            const std::int64_t k = s.poisson(rate);
            std::int64_t sum = 0;
            for (std::int64_t j = 0; j < k; ++j) sum += s.uniform() < p_one ? 1 : 2;
            return sum;
          }};
}

CountLaw count_law(const std::string& name, const FamilyParams& params) {
  if (name == "unit") return unit_count();
  if (name == "shifted-poisson") return shifted_poisson_count(params.mu);
  if (name == "shifted-geometric") return shifted_geometric_count(params.p);
  if (name == "hermite") return hermite_count(params.a1, params.a2);
  throw DomainError(fmt::format("unknown count law '{}'", name));
}

JumpLaw unit_jump() {
  return {"unit", point_mass(1), [](RandomSource&) { return std::int64_t{1}; }};
}

JumpLaw hermite_jump(double a1, double a2) {
  LatticeCF cf = hermite_jump_law(a1, a2);
  const double p_one = a1 / (a1 + a2);
  return {fmt::format("hermite-jump(a1={}, a2={})", a1, a2), cf,
          [p_one](RandomSource& s) { return s.uniform() < p_one ? std::int64_t{1} : std::int64_t{2}; }};
}

JumpLaw jump_law(const std::string& name, const FamilyParams& params) {
  if (name == "unit") return unit_jump();
  if (name == "hermite") return hermite_jump(params.a1, params.a2);
  throw DomainError(fmt::format("unknown jump law '{}'", name));
}

}  // namespace latstab

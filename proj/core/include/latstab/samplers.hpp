#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "latstab/composition.hpp"
#include "latstab/families.hpp"
#include "latstab/pmf_window.hpp"

namespace latstab {

/// Seeded 64-bit Mersenne Twister stream. Identical seeds give identical
/// streams within a build.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  std::mt19937_64& engine() noexcept { return engine_; }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  /// Standard exponential.
  double exponential();
  /// Poisson(mean). Means above 1e12 use a rounded normal approximation and
  /// the draw saturates at kSaturated.
  std::int64_t poisson(double mean);
  bool bernoulli(double p);

  static constexpr std::int64_t kSaturated = std::int64_t{1} << 62;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

using IntSampler = std::function<std::int64_t(RandomSource&)>;

/// Positive strictly stable S with E exp(-u S) = exp(-u^gamma), by Kanter's
/// representation sin(gU) / sin(U)^{1/g} * (sin((1-g)U) / E)^{(1-g)/g}
/// with U uniform on (0, pi) and E standard exponential. gamma = 1 gives
/// S = 1.
double sample_positive_stable(double gamma, RandomSource& source);

/// Draw from the law with PGF exp{-lambda (1 - z)^gamma}: Poisson with the
/// random mean lambda^{1/gamma} S.
std::int64_t sample_positive_discrete_stable(double lambda, double gamma,
                                             RandomSource& source);

/// Sum of K ~ Poisson(a) draws of jump.
std::int64_t sample_compound_poisson(double a, const IntSampler& jump, RandomSource& source);

/// One row sum of the triangular array: sum over i <= n and j <= N_i of
/// B_ij Y_ij with N_i from count, B_ij ~ Bernoulli(lambda / n), Y_ij from
/// jump. Its CF is P^n((1 - lambda/n) + (lambda/n) h(t)).
std::int64_t sample_theorem1_row(int n, double lambda, const IntSampler& count,
                                 const IntSampler& jump, RandomSource& source);

struct SampleBatch {
  std::vector<std::int64_t> values;
  std::string law;
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t count() const noexcept { return values.size(); }
};

SampleBatch draw_batch(std::string law, const IntSampler& sampler, std::size_t count,
                       std::uint64_t seed);

/// Concatenation; the law and seed of the left batch are kept.
SampleBatch merge_batches(const SampleBatch& lhs, const SampleBatch& rhs);

inline constexpr std::size_t kMaxHistogramWidth = std::size_t{1} << 22;

/// Normalized histogram over [min, max] of the batch. When that range is
/// wider than max_width the window is [min, min + max_width) and the rest
/// goes to tail_mass. Throws DomainError on an empty batch.
PMFWindow empirical_pmf(const SampleBatch& batch, std::size_t max_width = kMaxHistogramWidth);

/// E[TV] between an exact sampler's empirical PMF over `draws` draws and
/// pmf itself, summed cell by cell from the binomial mean absolute deviation.
/// Mass outside the window is not counted.
double expected_sampling_tv(const PMFWindow& pmf, std::size_t draws);

// Catalog of laws used by the limit-theorem harness.

/// Law of the summand count N, described by its PGF.
struct CountLaw {
  std::string name;
  ClosedFormPgf pgf;
  IntSampler sampler;
};

/// Jump law h of the limit compound Poisson.
struct JumpLaw {
  std::string name;
  LatticeCF cf;
  IntSampler sampler;
};

CountLaw unit_count();
CountLaw shifted_poisson_count(double mu);
CountLaw shifted_geometric_count(double p);
CountLaw hermite_count(double a1, double a2);
/// name is one of unit, shifted-poisson, shifted-geometric, hermite; params
/// supplies mu, p or a1/a2. Throws DomainError otherwise.
CountLaw count_law(const std::string& name, const FamilyParams& params);

JumpLaw unit_jump();
JumpLaw hermite_jump(double a1, double a2);
/// name is unit or hermite.
JumpLaw jump_law(const std::string& name, const FamilyParams& params);

}  // namespace latstab

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace latstab {

/// Probabilities over the consecutive integers k_min, k_min + 1, ...
///
/// Windows produced by DFT inversion are aliased: the entry at k carries
/// the sum of the true masses at k + mN over all integers m. Windows built
/// from samples are exact histograms; whatever fell outside the stored range
/// is accounted for in tail_mass.
struct PMFWindow {
  std::int64_t k_min = 0;
  std::vector<double> masses;
  bool aliased = false;
  /// Largest |mass| in the outer 10% of the window (5% at each end).
  double decay_estimate = 0.0;
  /// Probability known to lie outside [k_min, k_max()].
  double tail_mass = 0.0;
  /// Largest imaginary part discarded during inversion.
  double imag_residue = 0.0;

  [[nodiscard]] std::size_t size() const noexcept { return masses.size(); }
  [[nodiscard]] std::int64_t k_max() const noexcept {
    return k_min + static_cast<std::int64_t>(masses.size()) - 1;
  }
  [[nodiscard]] bool contains(std::int64_t k) const noexcept {
    return k >= k_min && k <= k_max();
  }
  /// Mass at k, zero outside the window.
  [[nodiscard]] double mass(std::int64_t k) const noexcept {
    return contains(k) ? masses[static_cast<std::size_t>(k - k_min)] : 0.0;
  }
  /// Sum of the stored masses (tail excluded).
  [[nodiscard]] double total() const noexcept;
  [[nodiscard]] double min_mass() const noexcept;
};

/// Recompute decay_estimate from the current masses.
double outer_decay(const std::vector<double>& masses) noexcept;

}  // namespace latstab

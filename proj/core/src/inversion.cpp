#include "latstab/inversion.hpp"

#include <algorithm>
#include <limits>
#include <bit>
#include <cmath>
#include <mutex>
#include <vector>

#include <fftw3.h>
#include <fmt/format.h>

#include "latstab/error.hpp"
#include "latstab/families.hpp"

namespace latstab {
namespace {

// FFTW planning is not thread-safe; execution on a private plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class ForwardDft {
 public:
  explicit ForwardDft(std::size_t n) : n_(n) {
    data_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), data_, data_, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  ~ForwardDft() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(data_);
  }
  ForwardDft(const ForwardDft&) = delete;
  ForwardDft& operator=(const ForwardDft&) = delete;

  cplx& operator[](std::size_t j) { return reinterpret_cast<cplx*>(data_)[j]; }
  void execute() { fftw_execute(plan_); }

 private:
  std::size_t n_;
  fftw_complex* data_ = nullptr;
  fftw_plan plan_ = nullptr;
};

double grid_point(std::size_t l, std::size_t n) {
  return kTwoPi * static_cast<double>(l) / static_cast<double>(n);
}

void check_grid(std::size_t grid_size) {
  if (!is_valid_grid(grid_size)) {
    throw DomainError(fmt::format("grid size {} must be a power of two >= 8", grid_size));
  }
}

}  // namespace

bool is_valid_grid(std::size_t grid_size) noexcept {
  return grid_size >= 8 && std::has_single_bit(grid_size);
}

PMFWindow invert_to_pmf(const LatticeCF& cf, std::size_t grid_size) {
  check_grid(grid_size);
  const std::size_t n = grid_size;
  ForwardDft dft(n);
  for (std::size_t l = 0; l < n; ++l) dft[l] = cf(grid_point(l, n));
  dft.execute();

  PMFWindow w;
  w.k_min = -static_cast<std::int64_t>(n / 2);
  w.masses.resize(n);
  w.aliased = true;
  const double inv_n = 1.0 / static_cast<double>(n);
  double residue = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    // window index j holds k = j - N/2, which the DFT stores at k mod N
    const std::size_t src = (j + n / 2) % n;
    const cplx c = dft[src] * inv_n;
    w.masses[j] = c.real();
    residue = std::max(residue, std::abs(c.imag()));
  }
  w.imag_residue = residue;
  if (residue > 1e-8) {
    throw InversionError(fmt::format(
        "imaginary residue {:.3e} after inverting {}: not a lattice CF", residue, cf.label()));
  }
  w.decay_estimate = outer_decay(w.masses);
  return w;
}

ValidityReport is_valid_cf(const LatticeCF& cf, std::size_t grid_size, double tolerance) {
  ValidityReport r;
  r.tolerance = tolerance;
  PMFWindow w;
  try {
    w = invert_to_pmf(cf, grid_size);
  } catch (const InversionError&) {
    r.is_valid = false;
    r.imag_residue = std::numeric_limits<double>::infinity();
    return r;
  }
  r.min_mass = w.min_mass();
  r.normalization_error = std::abs(w.total() - 1.0);
  r.origin_error = std::abs(cf(0.0) - 1.0);
  r.decay_estimate = w.decay_estimate;
  r.imag_residue = w.imag_residue;
  double herm = 0.0;
  for (std::size_t l = 0; l < grid_size; ++l) {
    const double t = grid_point(l, grid_size);
    herm = std::max(herm, std::abs(cf(-t) - std::conj(cf(t))));
  }
  r.hermitian_error = herm;
  r.is_valid = r.min_mass >= -tolerance && r.normalization_error <= tolerance &&
               r.origin_error <= tolerance && r.hermitian_error <= tolerance;
  return r;
}

double example2_pmf_closed_form(double lambda1, double lambda2, double lambda, int n,
                                std::int64_t k, Example2Formula formula) {
  if (!(lambda1 > 0.0 && lambda2 > 0.0 && lambda > 0.0)) {
    throw DomainError("lambda1, lambda2 and lambda must be > 0");
  }
  if (n < 1) throw DomainError("n must be >= 1");
  const double a = lambda1 / lambda;
  const double b = lambda2 / lambda;
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  const double cross = 8.0 * a * b / (kPi * n2);
  if (k == 0) {
    const double p0 = 1.0 - cross;
    return formula == Example2Formula::corrected ? p0 - (a * a + b * b) / n2 : p0;
  }
  const double kd = static_cast<double>(k);
  const double pk = cross / (4.0 * kd * kd - 1.0);
  if (formula == Example2Formula::uncorrected) return pk;
  if (k == 1) return pk + a * a / n2;
  if (k == -1) return pk + b * b / n2;
  return pk;
}

double example2_lambda_boundary(double lambda1, double lambda2, int n) {
  if (!(lambda1 > 0.0 && lambda2 > 0.0)) throw DomainError("lambda1, lambda2 must be > 0");
  if (n < 1) throw DomainError("n must be >= 1");
  return std::sqrt(lambda1 * lambda1 + lambda2 * lambda2 + 8.0 * lambda1 * lambda2 / kPi) /
         static_cast<double>(n);
}

MinLambdaResult min_valid_lambda(double lambda1, double lambda2, int n, double tolerance,
                                 std::size_t grid_size) {
  MinLambdaResult out;
  out.closed_form = example2_lambda_boundary(lambda1, lambda2, n);
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be > 0");

  auto valid_at = [&](double lambda) {
    FamilyParams p;
    p.lambda1 = lambda1;
    p.lambda2 = lambda2;
    p.lambda = lambda;
    return is_valid_cf(make_normalizer(NormalizerVariant::example2, p, n), grid_size).is_valid;
  };

  double lo = std::max(lambda1, lambda2) * 1e-3;
  double hi = (lambda1 + lambda2) * 1e3;
  if (valid_at(lo) || !valid_at(hi)) {
    throw InversionError(fmt::format(
        "validity predicate does not change sign on [{}, {}]", lo, hi));
  }
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (valid_at(mid) ? hi : lo) = mid;
    ++out.iterations;
  }
  out.bisection = hi;
  if (std::abs(out.bisection - out.closed_form) > 10.0 * tolerance) {
    throw InversionError(fmt::format("bisection boundary {} disagrees with closed form {}",
                                     out.bisection, out.closed_form));
  }
  return out;
}

double tv_distance(const PMFWindow& p, const PMFWindow& q) {
  double sum = 0.0;
  if (p.size() == 0 && q.size() == 0) return 0.5 * (p.tail_mass + q.tail_mass);
  std::int64_t lo = std::min(p.size() ? p.k_min : q.k_min, q.size() ? q.k_min : p.k_min);
  std::int64_t hi = std::max(p.size() ? p.k_max() : q.k_max(), q.size() ? q.k_max() : p.k_max());
  for (std::int64_t k = lo; k <= hi; ++k) sum += std::abs(p.mass(k) - q.mass(k));
  return 0.5 * (sum + p.tail_mass + q.tail_mass);
}

double sup_cf_distance(const LatticeCF& f, const LatticeCF& g, std::size_t grid_size) {
  if (grid_size < 8) throw DomainError("grid size must be >= 8");
  double worst = 0.0;
  for (std::size_t l = 0; l < grid_size; ++l) {
    const double t = grid_point(l, grid_size);
    worst = std::max(worst, std::abs(f(t) - g(t)));
  }
  return worst;
}

}  // namespace latstab

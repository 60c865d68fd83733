#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "latstab/composition.hpp"
#include "latstab/inversion.hpp"
#include "latstab/samplers.hpp"

namespace latstab::harness {

enum class ExitCode : int { ok = 0, verdict_failed = 1, usage_error = 2 };

enum class Format { csv, json };

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "LATSTAB_OUTPUT_DIR";

/// Command selection and parameters. Unset fields take per-command
/// defaults; the config file only fills fields the flags left unset.
struct RunConfig {
  std::string command;
  std::optional<int> example;
  std::optional<double> lambda, gamma, alpha, lambda1, lambda2, a1, a2, a, A, mu, p;
  std::optional<double> tolerance;
  std::optional<int> n, n_max;
  std::optional<std::size_t> grid, samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, family, law, count_law, jump;
  std::optional<Format> format;
};

/// Fill unset fields of cfg from a JSON object whose keys are the long flag
/// names ("lambda", "n-max", "count-law", ...). Unknown keys are a
/// DomainError.
void merge_config_json(RunConfig& cfg, const nlohmann::json& j);

struct VerifyResult {
  int example = 0;
  std::vector<VerificationReport> reports;
  /// Example 2 only: the validity boundary for n = 1.
  std::optional<MinLambdaResult> boundary;
  [[nodiscard]] bool passed() const noexcept;
};

struct NonuniqueResult {
  NonuniquenessResult demo;
  bool bases_distinct = false;
  [[nodiscard]] bool passed() const noexcept {
    return demo.first.passed() && demo.second.passed() && bases_distinct;
  }
};

struct ConvergenceRow {
  int n = 0;
  double sup_cf_distance = 0.0;
  double tv_distance = 0.0;
  double n_tv = 0.0;
  std::optional<double> mc_tv_row;
  std::optional<double> mc_tv_limit;
};

struct ConvergenceReport {
  std::string count_law;
  std::string jump_law;
  double lambda = 0.0;
  /// a = lambda P'(1).
  double limit_rate = 0.0;
  std::string limit;
  std::size_t grid_size = 0;
  std::vector<ConvergenceRow> rows;  // ascending n
  bool sup_decreasing = false;
  bool tv_decreasing = false;
  /// max n * TV <= 2 * (n * TV at n = 16, or at the first row if 16 is absent).
  bool ntv_bounded = false;
  /// TV at the last row <= 0.01.
  bool final_tv_ok = false;
  [[nodiscard]] bool passed() const noexcept {
    return sup_decreasing && tv_decreasing && ntv_bounded && final_tv_ok;
  }
};

struct InvertResult {
  std::string family;
  PMFWindow pmf;
  /// Example 2 normalizer only: closed forms aligned with pmf.
  std::optional<std::vector<double>> corrected;
  std::optional<std::vector<double>> uncorrected;
};

struct SampleResult {
  SampleBatch batch;
  PMFWindow empirical;
  PMFWindow oracle;
  double oracle_tv = 0.0;
  std::string oracle_kind;
};

/// n = 2, 4, ..., up to n_max.
std::vector<int> doubling_schedule(int n_max);

ConvergenceReport run_convergence(const CountLaw& count, const JumpLaw& jump, double lambda,
                                  const std::vector<int>& schedule, std::size_t grid_size,
                                  std::size_t mc_samples = 0, std::uint64_t seed = 1);

/// Exact Poisson(lambda) masses on [0, k_max].
PMFWindow poisson_pmf_window(double lambda, std::int64_t k_max);

VerifyResult cmd_verify(const RunConfig& cfg);
NonuniqueResult cmd_nonunique(const RunConfig& cfg);
ConvergenceReport cmd_converge(const RunConfig& cfg);
InvertResult cmd_invert(const RunConfig& cfg);
SampleResult cmd_sample(const RunConfig& cfg);

nlohmann::json to_json(const VerifyResult& r);
nlohmann::json to_json(const NonuniqueResult& r);
nlohmann::json to_json(const ConvergenceReport& r);
nlohmann::json to_json(const InvertResult& r);

/// Run the command, write its output, and map the outcome to an exit code:
/// 0 all verdicts pass, 1 a verdict failed, 2 usage or domain error.
/// Output goes to cfg.out, else $LATSTAB_OUTPUT_DIR/<command>.<ext>, else
/// to out. Diagnostics go to err.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace latstab::harness

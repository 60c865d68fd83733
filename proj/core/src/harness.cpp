#include "latstab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "latstab/error.hpp"
#include "latstab/families.hpp"
#include "latstab/io.hpp"

namespace latstab::harness {
namespace {

constexpr std::size_t kVerifyGrid = std::size_t{1} << 12;
constexpr std::size_t kHeavyTailGrid = std::size_t{1} << 20;
constexpr double kDefaultTolerance = 1e-12;
constexpr double kBaseSeparation = 1e-3;
constexpr double kFinalTv = 0.01;

template <typename T>
T get(const std::optional<T>& v, T fallback) {
  return v.value_or(fallback);
}

std::size_t grid_or(const RunConfig& cfg, std::size_t fallback) {
  const std::size_t g = get(cfg.grid, fallback);
  if (!is_valid_grid(g)) throw DomainError(fmt::format("--grid {} must be a power of two >= 8", g));
  return g;
}

int n_max_or(const RunConfig& cfg, int fallback) {
  const int n = get(cfg.n_max, fallback);
  if (n < 1) throw DomainError("--n-max must be >= 1");
  return n;
}

// Jump-law parameters share --a1/--a2 with the Hermite families.
FamilyParams jump_params(const RunConfig& cfg) {
  FamilyParams p;
  p.a1 = get(cfg.a1, 1.0);
  p.a2 = get(cfg.a2, 0.5);
  return p;
}

FamilyParams count_params(const RunConfig& cfg) {
  FamilyParams p;
  p.mu = get(cfg.mu, 1.0);
  p.p = get(cfg.p, 0.4);
  p.a1 = get(cfg.a1, 1.0);
  p.a2 = get(cfg.a2, 0.5);
  return p;
}

bool strictly_decreasing(const std::vector<ConvergenceRow>& rows,
                         double ConvergenceRow::*field) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].*field < rows[i - 1].*field)) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

void merge_config_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("config file must hold a JSON object");
  auto real = [&](std::optional<double>& slot) {
    return [&slot](const nlohmann::json& v) {
      const auto parsed = v.get<double>();
      if (!slot) slot = parsed;
    };
  };
  auto integer = [&](std::optional<int>& slot) {
    return [&slot](const nlohmann::json& v) {
      const auto parsed = v.get<int>();
      if (!slot) slot = parsed;
    };
  };
  auto size = [&](std::optional<std::size_t>& slot) {
    return [&slot](const nlohmann::json& v) {
      const auto parsed = v.get<std::size_t>();
      if (!slot) slot = parsed;
    };
  };
  auto text = [&](std::optional<std::string>& slot) {
    return [&slot](const nlohmann::json& v) {
      const auto parsed = v.get<std::string>();
      if (!slot) slot = parsed;
    };
  };
  const std::map<std::string, std::function<void(const nlohmann::json&)>> setters = {
      {"example", integer(cfg.example)},
      {"lambda", real(cfg.lambda)},
      {"gamma", real(cfg.gamma)},
      {"alpha", real(cfg.alpha)},
      {"lambda1", real(cfg.lambda1)},
      {"lambda2", real(cfg.lambda2)},
      {"a1", real(cfg.a1)},
      {"a2", real(cfg.a2)},
      {"a", real(cfg.a)},
      {"A", real(cfg.A)},
      {"mu", real(cfg.mu)},
      {"p", real(cfg.p)},
      {"tolerance", real(cfg.tolerance)},
      {"n", integer(cfg.n)},
      {"n-max", integer(cfg.n_max)},
      {"grid", size(cfg.grid)},
      {"samples", size(cfg.samples)},
      {"seed",
       [&cfg](const nlohmann::json& v) {
         const auto parsed = v.get<std::uint64_t>();
         if (!cfg.seed) cfg.seed = parsed;
       }},
      {"out", text(cfg.out)},
      {"family", text(cfg.family)},
      {"law", text(cfg.law)},
      {"count-law", text(cfg.count_law)},
      {"jump", text(cfg.jump)},
      {"format",
       [&cfg](const nlohmann::json& v) {
         const auto s = v.get<std::string>();
         if (s != "csv" && s != "json") throw DomainError("format must be csv or json");
         if (!cfg.format) cfg.format = s == "csv" ? Format::csv : Format::json;
       }},
  };
  for (const auto& [key, value] : j.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw DomainError(fmt::format("unknown config key '{}'", key));
    try {
      it->second(value);
    } catch (const nlohmann::json::exception& e) {
      throw DomainError(fmt::format("config key '{}': {}", key, e.what()));
    }
  }
}

bool VerifyResult::passed() const noexcept {
  return !reports.empty() &&
         std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed(); });
}

std::vector<int> doubling_schedule(int n_max) {
  std::vector<int> out;
  for (int n = 2; n <= n_max; n *= 2) out.push_back(n);
  return out;
}

PMFWindow poisson_pmf_window(double lambda, std::int64_t k_max) {
  if (!(lambda > 0.0)) throw DomainError("Poisson rate must be > 0");
  PMFWindow w;
  w.k_min = 0;
  w.masses.resize(static_cast<std::size_t>(k_max) + 1);
  for (std::int64_t k = 0; k <= k_max; ++k) {
    const double kd = static_cast<double>(k);
    w.masses[static_cast<std::size_t>(k)] =
        std::exp(kd * std::log(lambda) - lambda - std::lgamma(kd + 1.0));
  }
  w.decay_estimate = outer_decay(w.masses);
  return w;
}

ConvergenceReport run_convergence(const CountLaw& count, const JumpLaw& jump, double lambda,
                                  const std::vector<int>& schedule, std::size_t grid_size,
                                  std::size_t mc_samples, std::uint64_t seed) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0, 1)");
  if (schedule.empty()) throw DomainError("empty n schedule");
  if (!std::is_sorted(schedule.begin(), schedule.end())) {
    throw DomainError("n schedule must be ascending");
  }

  ConvergenceReport report;
  report.count_law = count.name;
  report.jump_law = jump.name;
  report.lambda = lambda;
  report.grid_size = grid_size;
  const LatticeCF limit = theorem1_limit_cf(count.pgf, jump.cf, lambda);
  report.limit_rate = lambda * count.pgf.mean();
  report.limit = limit.label();
  const PMFWindow limit_pmf = invert_to_pmf(limit, grid_size);

  for (int n : schedule) {
    const LatticeCF row_cf = theorem1_row_cf(count.pgf, jump.cf, lambda, n);
    ConvergenceRow row;
    row.n = n;
    row.sup_cf_distance = sup_cf_distance(row_cf, limit, grid_size);
    const PMFWindow row_pmf = invert_to_pmf(row_cf, grid_size);
    row.tv_distance = tv_distance(row_pmf, limit_pmf);
    row.n_tv = static_cast<double>(n) * row.tv_distance;
    if (mc_samples > 0) {
      const IntSampler sampler = [&, n](RandomSource& s) {
        return sample_theorem1_row(n, lambda, count.sampler, jump.sampler, s);
      };
      const SampleBatch batch =
          draw_batch(fmt::format("theorem1-row(n={})", n), sampler, mc_samples,
                     seed + static_cast<std::uint64_t>(n));
      const PMFWindow emp = empirical_pmf(batch);
      row.mc_tv_row = tv_distance(emp, row_pmf);
      row.mc_tv_limit = tv_distance(emp, limit_pmf);
    }
    report.rows.push_back(row);
  }

  report.sup_decreasing = strictly_decreasing(report.rows, &ConvergenceRow::sup_cf_distance);
  report.tv_decreasing = strictly_decreasing(report.rows, &ConvergenceRow::tv_distance);
  const auto ref = std::find_if(report.rows.begin(), report.rows.end(),
                                [](const auto& r) { return r.n == 16; });
  const double ref_ntv = ref != report.rows.end() ? ref->n_tv : report.rows.front().n_tv;
  double max_ntv = 0.0;
  for (const auto& r : report.rows) max_ntv = std::max(max_ntv, r.n_tv);
  report.ntv_bounded = max_ntv <= 2.0 * ref_ntv;
  report.final_tv_ok = report.rows.back().tv_distance <= kFinalTv;
  return report;
}

// ---------------------------------------------------------------------------
// Commands

VerifyResult cmd_verify(const RunConfig& cfg) {
  if (!cfg.example) throw DomainError("verify needs --example 1..4");
  const int n_max = n_max_or(cfg, 64);
  const std::size_t grid = grid_or(cfg, kVerifyGrid);
  const double tol = get(cfg.tolerance, kDefaultTolerance);

  VerifyResult result;
  result.example = *cfg.example;
  switch (*cfg.example) {
    case 1: {
      const auto rep =
          example1_representation(get(cfg.lambda, 1.0), get(cfg.gamma, 0.5), n_max);
      result.reports.push_back(verify_representation(rep, grid, tol));
      break;
    }
    case 2: {
      const double l1 = get(cfg.lambda1, 1.0);
      const double l2 = get(cfg.lambda2, 1.0);
      const double lambda = get(cfg.lambda, 3.0);
      const auto rep = example2_representation(l1, l2, lambda, n_max);
      result.boundary = min_valid_lambda(l1, l2, 1);
      result.reports.push_back(verify_representation(rep, grid, tol));
      break;
    }
    case 3: {
      const double a1 = get(cfg.a1, 1.0);
      const double a2 = get(cfg.a2, 0.5);
      const auto rep = example3_representation(a1, a2, get(cfg.a, 2.0 * (a1 + a2)), n_max);
      result.reports.push_back(verify_representation(rep, grid, tol));
      break;
    }
    case 4: {
      const JumpLaw h = jump_law(get(cfg.jump, std::string("hermite")), jump_params(cfg));
      const double a = get(cfg.a, 1.0);
      const auto rep = example4_representation(a, get(cfg.A, 2.0 * a), h.cf, n_max);
      result.reports.push_back(verify_representation(rep, grid, tol));
      break;
    }
    default:
      throw DomainError(fmt::format("unknown example {} (expected 1..4)", *cfg.example));
  }
  return result;
}

NonuniqueResult cmd_nonunique(const RunConfig& cfg) {
  const double gamma = get(cfg.gamma, 0.25);
  if (!(gamma > 0.0 && gamma < 0.5)) throw DomainError("nonunique needs gamma in (0, 1/2)");
  NonuniqueResult r;
  r.demo = nonuniqueness_demo(get(cfg.lambda, 1.0), gamma, 1, n_max_or(cfg, 16),
                              grid_or(cfg, kVerifyGrid), get(cfg.tolerance, kDefaultTolerance));
  r.bases_distinct = r.demo.base_tv > kBaseSeparation;
  return r;
}

ConvergenceReport cmd_converge(const RunConfig& cfg) {
  const CountLaw count = count_law(get(cfg.count_law, std::string("unit")), count_params(cfg));
  const JumpLaw jump = jump_law(get(cfg.jump, std::string("unit")), jump_params(cfg));
  const double lambda = get(cfg.lambda, 0.5);
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("converge needs lambda in (0, 1)");
  const auto schedule = doubling_schedule(n_max_or(cfg, 256));
  if (schedule.empty()) throw DomainError("--n-max must be >= 2 for converge");
  return run_convergence(count, jump, lambda, schedule, grid_or(cfg, kVerifyGrid),
                         get(cfg.samples, std::size_t{0}), get(cfg.seed, std::uint64_t{1}));
}

InvertResult cmd_invert(const RunConfig& cfg) {
  const std::string family = get(cfg.family, std::string("positive-stable"));
  const std::size_t grid = grid_or(cfg, kOracleGrid);
  InvertResult r;
  r.family = family;
  auto lambda_or = [&](double d) { return get(cfg.lambda, d); };
  if (family == "positive-stable") {
    r.pmf = invert_to_pmf(positive_discrete_stable(lambda_or(1.0), get(cfg.gamma, 0.5)), grid);
  } else if (family == "symmetric-stable") {
    r.pmf = invert_to_pmf(symmetric_discrete_stable(lambda_or(1.0), get(cfg.gamma, 0.5)), grid);
  } else if (family == "two-sided-stable") {
    r.pmf = invert_to_pmf(two_sided_discrete_stable(get(cfg.lambda1, 1.0),
                                                    get(cfg.lambda2, 1.0), get(cfg.alpha, 0.5)),
                          grid);
  } else if (family == "hermite") {
    r.pmf = invert_to_pmf(hermite(get(cfg.a1, 1.0), get(cfg.a2, 0.5)), grid);
  } else if (family == "poisson") {
    r.pmf = invert_to_pmf(poisson(lambda_or(1.0)), grid);
  } else if (family == "compound-poisson") {
    const JumpLaw h = jump_law(get(cfg.jump, std::string("hermite")), jump_params(cfg));
    r.pmf = invert_to_pmf(compound_poisson(get(cfg.a, 1.0), h.cf), grid);
  } else if (family == "example2-normalizer") {
    FamilyParams p;
    p.lambda1 = get(cfg.lambda1, 1.0);
    p.lambda2 = get(cfg.lambda2, 1.0);
    p.lambda = lambda_or(3.0);
    const int n = get(cfg.n, 1);
    r.pmf = invert_to_pmf(make_normalizer(NormalizerVariant::example2, p, n), grid);
    std::vector<double> corrected(r.pmf.size());
    std::vector<double> uncorrected(r.pmf.size());
    for (std::size_t j = 0; j < r.pmf.size(); ++j) {
      const std::int64_t k = r.pmf.k_min + static_cast<std::int64_t>(j);
      corrected[j] = example2_pmf_closed_form(p.lambda1, p.lambda2, p.lambda, n, k);
      uncorrected[j] = example2_pmf_closed_form(p.lambda1, p.lambda2, p.lambda, n, k,
                                            Example2Formula::uncorrected);
    }
    r.corrected = std::move(corrected);
    r.uncorrected = std::move(uncorrected);
  } else {
    throw DomainError(fmt::format("unknown family '{}'", family));
  }
  return r;
}

SampleResult cmd_sample(const RunConfig& cfg) {
  const std::string law = get(cfg.law, std::string("poisson"));
  const std::size_t count = get(cfg.samples, std::size_t{100000});
  if (count == 0) throw DomainError("--samples must be > 0");
  const std::uint64_t seed = get(cfg.seed, std::uint64_t{1});

  SampleResult r;
  IntSampler sampler;
  std::string descriptor;
  if (law == "poisson") {
    const double lambda = get(cfg.lambda, 1.0);
    if (!(lambda > 0.0)) throw DomainError("lambda must be > 0");
    sampler = [lambda](RandomSource& s) { return sample_positive_discrete_stable(lambda, 1.0, s); };
    descriptor = fmt::format("poisson(lambda={})", lambda);
    r.batch = draw_batch(descriptor, sampler, count, seed);
    const auto k_max = *std::max_element(r.batch.values.begin(), r.batch.values.end());
    r.oracle = poisson_pmf_window(lambda, std::max<std::int64_t>(k_max, 10) * 2 + 20);
    r.oracle_kind = "exact-poisson";
  } else if (law == "discrete-stable") {
    const double lambda = get(cfg.lambda, 1.0);
    const double gamma = get(cfg.gamma, 0.5);
    const LatticeCF cf = positive_discrete_stable(lambda, gamma);
    sampler = [lambda, gamma](RandomSource& s) {
      return sample_positive_discrete_stable(lambda, gamma, s);
    };
    descriptor = fmt::format("discrete-stable(lambda={}, gamma={})", lambda, gamma);
    r.batch = draw_batch(descriptor, sampler, count, seed);
    r.oracle = invert_to_pmf(cf, grid_or(cfg, gamma < 1.0 ? kHeavyTailGrid : kOracleGrid));
    r.oracle_kind = "inversion";
  } else if (law == "hermite") {
    const double a1 = get(cfg.a1, 1.0);
    const double a2 = get(cfg.a2, 0.5);
    const JumpLaw h = hermite_jump(a1, a2);
    const double rate = a1 + a2;
    sampler = [rate, h](RandomSource& s) { return sample_compound_poisson(rate, h.sampler, s); };
    descriptor = fmt::format("hermite(a1={}, a2={})", a1, a2);
    r.batch = draw_batch(descriptor, sampler, count, seed);
    r.oracle = invert_to_pmf(hermite(a1, a2), grid_or(cfg, kVerifyGrid));
    r.oracle_kind = "inversion";
  } else if (law == "theorem1-row") {
    const CountLaw cl = count_law(get(cfg.count_law, std::string("shifted-poisson")),
                                  count_params(cfg));
    const JumpLaw jl = jump_law(get(cfg.jump, std::string("unit")), jump_params(cfg));
    const double lambda = get(cfg.lambda, 0.5);
    const int n = get(cfg.n, 64);
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0, 1)");
    if (n < 1) throw DomainError("--n must be >= 1");
    sampler = [=](RandomSource& s) {
      return sample_theorem1_row(n, lambda, cl.sampler, jl.sampler, s);
    };
    descriptor = fmt::format("theorem1-row(P={}, h={}, lambda={}, n={})", cl.name, jl.name,
                             lambda, n);
    r.batch = draw_batch(descriptor, sampler, count, seed);
    r.oracle = invert_to_pmf(theorem1_row_cf(cl.pgf, jl.cf, lambda, n), grid_or(cfg, kVerifyGrid));
    r.oracle_kind = "inversion";
  } else {
    throw DomainError(fmt::format("unknown law '{}'", law));
  }
  r.empirical = empirical_pmf(r.batch);
  r.oracle_tv = tv_distance(r.empirical, r.oracle);
  return r;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json to_json(const VerifyResult& r) {
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& rep : r.reports) reports.push_back(io::to_json(rep));
  nlohmann::json j = {
      {"command", "verify"}, {"example", r.example}, {"passed", r.passed()}, {"reports", reports}};
  if (r.boundary) {
    j["lambda_boundary"] = {{"bisection", r.boundary->bisection},
                            {"closed_form", r.boundary->closed_form},
                            {"iterations", r.boundary->iterations}};
  }
  return j;
}

nlohmann::json to_json(const NonuniqueResult& r) {
  return {{"command", "nonunique"},
          {"first", io::to_json(r.demo.first)},
          {"second", io::to_json(r.demo.second)},
          {"base_tv", r.demo.base_tv},
          {"bases_distinct", r.bases_distinct},
          {"passed", r.passed()}};
}

nlohmann::json to_json(const ConvergenceReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json jr = {{"n", row.n},
                         {"sup_cf_distance", row.sup_cf_distance},
                         {"tv_distance", row.tv_distance},
                         {"n_tv", row.n_tv}};
    if (row.mc_tv_row) jr["mc_tv_row"] = *row.mc_tv_row;
    if (row.mc_tv_limit) jr["mc_tv_limit"] = *row.mc_tv_limit;
    rows.push_back(jr);
  }
  return {{"command", "converge"},
          {"count_law", r.count_law},
          {"jump_law", r.jump_law},
          {"lambda", r.lambda},
          {"limit_rate", r.limit_rate},
          {"limit", r.limit},
          {"grid_size", r.grid_size},
          {"rows", rows},
          {"sup_decreasing", r.sup_decreasing},
          {"tv_decreasing", r.tv_decreasing},
          {"ntv_bounded", r.ntv_bounded},
          {"final_tv_ok", r.final_tv_ok},
          {"passed", r.passed()}};
}

nlohmann::json to_json(const InvertResult& r) {
  nlohmann::json j = io::to_json(r.pmf);
  j["command"] = "invert";
  j["family"] = r.family;
  if (r.corrected) j["corrected"] = *r.corrected;
  if (r.uncorrected) j["uncorrected"] = *r.uncorrected;
  return j;
}

namespace {

void write_converge_csv(std::ostream& os, const ConvergenceReport& r) {
  const bool mc = !r.rows.empty() && r.rows.front().mc_tv_row.has_value();
  os << "n,sup_cf_distance,tv_distance,n_tv" << (mc ? ",mc_tv_row,mc_tv_limit" : "") << '\n';
  for (const auto& row : r.rows) {
    os << row.n << ',' << io::format_real(row.sup_cf_distance) << ','
       << io::format_real(row.tv_distance) << ',' << io::format_real(row.n_tv);
    if (mc) {
      os << ',' << io::format_real(row.mc_tv_row.value_or(NAN)) << ','
         << io::format_real(row.mc_tv_limit.value_or(NAN));
    }
    os << '\n';
  }
}

void write_invert_csv(std::ostream& os, const InvertResult& r) {
  if (!r.corrected) {
    io::write_pmf_csv(os, r.pmf);
    return;
  }
  os << "k,mass,corrected,uncorrected\n";
  for (std::size_t j = 0; j < r.pmf.size(); ++j) {
    os << r.pmf.k_min + static_cast<std::int64_t>(j) << ',' << io::format_real(r.pmf.masses[j])
       << ',' << io::format_real((*r.corrected)[j]) << ',' << io::format_real((*r.uncorrected)[j])
       << '\n';
  }
}

void write_nonunique_csv(std::ostream& os, const NonuniqueResult& r) {
  os << "representation,n,sup_error,normalizer_valid,normalizer_min_mass,base_tv\n";
  for (const auto* rep : {&r.demo.first, &r.demo.second}) {
    const char* name = rep == &r.demo.first ? "first" : "second";
    for (const auto& row : rep->rows) {
      os << name << ',' << row.n << ',' << io::format_real(row.sup_error) << ','
         << (row.normalizer_validity.is_valid ? 1 : 0) << ','
         << io::format_real(row.normalizer_validity.min_mass) << ','
         << io::format_real(r.demo.base_tv) << '\n';
    }
  }
}

// Resolves where a command's primary output goes.
struct Destination {
  std::optional<std::filesystem::path> path;
};

Destination destination(const RunConfig& cfg, Format fmt_) {
  if (cfg.out) return {std::filesystem::path(*cfg.out)};
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
    return {std::filesystem::path(dir) /
            fmt::format("{}.{}", cfg.command, fmt_ == Format::json ? "json" : "csv")};
  }
  return {};
}

void emit(const Destination& dest, const std::string& body, std::ostream& out) {
  if (!dest.path) {
    out << body;
    return;
  }
  if (dest.path->has_parent_path()) std::filesystem::create_directories(dest.path->parent_path());
  std::ofstream f(*dest.path, std::ios::binary);
  if (!f) throw DomainError(fmt::format("cannot open output file {}", dest.path->string()));
  f << body;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Format format = cfg.format.value_or(Format::csv);
  try {
    const Destination dest = destination(cfg, format);
    std::ostringstream body;
    bool passed = true;

    if (cfg.command == "verify") {
      const VerifyResult r = cmd_verify(cfg);
      passed = r.passed();
      if (format == Format::json) {
        body << dump(to_json(r));
      } else {
        bool header = true;
        for (const auto& rep : r.reports) {
          io::write_verification_csv(body, rep, header);
          header = false;
        }
      }
      for (const auto& rep : r.reports) {
        err << fmt::format("{}: max error {:.3e} (tol {:.1e}), normalizers {} -> {}\n",
                           rep.label, rep.max_error, rep.tolerance,
                           rep.normalizers_valid ? "valid" : "INVALID",
                           rep.passed() ? "PASS" : "FAIL");
        if (!rep.error.empty()) err << "  " << rep.error << '\n';
      }
    } else if (cfg.command == "nonunique") {
      const NonuniqueResult r = cmd_nonunique(cfg);
      passed = r.passed();
      if (format == Format::json) {
        body << dump(to_json(r));
      } else {
        write_nonunique_csv(body, r);
      }
      err << fmt::format("first {:.3e}, second {:.3e}, base TV {:.4f} -> {}\n",
                         r.demo.first.max_error, r.demo.second.max_error, r.demo.base_tv,
                         r.passed() ? "PASS" : "FAIL");
    } else if (cfg.command == "converge") {
      const ConvergenceReport r = cmd_converge(cfg);
      passed = r.passed();
      if (format == Format::json) {
        body << dump(to_json(r));
      } else {
        write_converge_csv(body, r);
      }
      err << fmt::format("limit {}: final TV {:.3e} -> {}\n", r.limit,
                         r.rows.back().tv_distance, r.passed() ? "PASS" : "FAIL");
    } else if (cfg.command == "invert") {
      const InvertResult r = cmd_invert(cfg);
      if (format == Format::json) {
        body << dump(to_json(r));
      } else {
        write_invert_csv(body, r);
      }
    } else if (cfg.command == "sample") {
      const SampleResult r = cmd_sample(cfg);
      nlohmann::json sidecar = io::batch_sidecar(r.batch);
      sidecar["oracle"] = r.oracle_kind;
      sidecar["oracle_tv"] = r.oracle_tv;
      if (format == Format::json) {
        nlohmann::json j = io::to_json(r.batch);
        j["oracle"] = r.oracle_kind;
        j["oracle_tv"] = r.oracle_tv;
        body << dump(j);
      } else {
        io::write_batch_csv(body, r.batch);
        if (dest.path) {
          std::filesystem::path side = *dest.path;
          side += ".json";
          emit({side}, dump(sidecar), out);
        }
      }
      err << fmt::format("{}: {} draws, TV vs {} oracle {:.4e}\n", r.batch.law, r.batch.count(),
                         r.oracle_kind, r.oracle_tv);
    } else {
      throw DomainError(fmt::format("unknown command '{}'", cfg.command));
    }

    emit(dest, body.str(), out);
    return static_cast<int>(passed ? ExitCode::ok : ExitCode::verdict_failed);
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::usage_error);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::verdict_failed);
  }
}

}  // namespace latstab::harness

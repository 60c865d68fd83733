#include "latstab/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "latstab/error.hpp"

namespace latstab::io {
namespace {

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

template <typename T>
T parse_field(const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw DomainError("malformed CSV field '" + text + "'");
  return value;
}

}  // namespace

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

void write_pmf_csv(std::ostream& os, const PMFWindow& pmf) {
  os << "k,mass\n";
  for (std::size_t j = 0; j < pmf.size(); ++j) {
    os << pmf.k_min + static_cast<std::int64_t>(j) << ',' << format_real(pmf.masses[j]) << '\n';
  }
}

PMFWindow read_pmf_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != "k,mass") {
    throw DomainError("PMF CSV must start with the header 'k,mass'");
  }
  PMFWindow w;
  bool first = true;
  std::int64_t expected = 0;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("malformed PMF CSV row: " + line);
    const std::int64_t k = parse_field<std::int64_t>(line.substr(0, comma));
    const double mass = parse_field<double>(line.substr(comma + 1));
    if (first) {
      w.k_min = k;
      expected = k;
      first = false;
    }
    if (k != expected) throw DomainError("PMF CSV rows must have consecutive k");
    w.masses.push_back(mass);
    ++expected;
  }
  w.decay_estimate = outer_decay(w.masses);
  return w;
}

nlohmann::json to_json(const PMFWindow& pmf) {
  return {{"k_min", pmf.k_min},
          {"masses", pmf.masses},
          {"aliased", pmf.aliased},
          {"decay_estimate", pmf.decay_estimate},
          {"tail_mass", pmf.tail_mass},
          {"imag_residue", pmf.imag_residue}};
}

PMFWindow pmf_from_json(const nlohmann::json& j) {
  PMFWindow w;
  w.k_min = j.at("k_min").get<std::int64_t>();
  w.masses = j.at("masses").get<std::vector<double>>();
  w.aliased = j.value("aliased", false);
  w.decay_estimate = j.value("decay_estimate", outer_decay(w.masses));
  w.tail_mass = j.value("tail_mass", 0.0);
  w.imag_residue = j.value("imag_residue", 0.0);
  return w;
}

void write_batch_csv(std::ostream& os, const SampleBatch& batch) {
  os << "value\n";
  for (std::int64_t v : batch.values) os << v << '\n';
}

nlohmann::json batch_sidecar(const SampleBatch& batch) {
  return {{"law", batch.law}, {"seed", batch.seed}, {"count", batch.count()}};
}

SampleBatch read_batch(std::istream& csv, const nlohmann::json& sidecar) {
  SampleBatch b;
  b.law = sidecar.at("law").get<std::string>();
  b.seed = sidecar.at("seed").get<std::uint64_t>();
  std::string line;
  if (!std::getline(csv, line) || trim(line) != "value") {
    throw DomainError("sample CSV must start with the header 'value'");
  }
  while (std::getline(csv, line)) {
    line = trim(line);
    if (!line.empty()) b.values.push_back(parse_field<std::int64_t>(line));
  }
  if (b.count() != sidecar.at("count").get<std::size_t>()) {
    throw DomainError("sample CSV row count does not match the sidecar");
  }
  return b;
}

nlohmann::json to_json(const SampleBatch& batch) {
  nlohmann::json j = batch_sidecar(batch);
  j["values"] = batch.values;
  return j;
}

nlohmann::json to_json(const ValidityReport& r) {
  return {{"is_valid", r.is_valid},
          {"min_mass", r.min_mass},
          {"normalization_error", r.normalization_error},
          {"hermitian_error", r.hermitian_error},
          {"origin_error", r.origin_error},
          {"decay_estimate", r.decay_estimate},
          {"imag_residue", r.imag_residue},
          {"tolerance", r.tolerance}};
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n},
                    {"sup_error", row.sup_error},
                    {"normalizer", to_json(row.normalizer_validity)}});
  }
  nlohmann::json j = {{"label", r.label},
                      {"grid_size", r.grid_size},
                      {"tolerance", r.tolerance},
                      {"base_tail", r.base_tail},
                      {"max_error", r.max_error},
                      {"verdict", r.verdict},
                      {"normalizers_valid", r.normalizers_valid},
                      {"passed", r.passed()},
                      {"rows", rows}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

void write_verification_csv(std::ostream& os, const VerificationReport& r, bool header) {
  if (header) os << "label,n,sup_error,normalizer_valid,normalizer_min_mass\n";
  for (const auto& row : r.rows) {
    os << '"' << r.label << "\"," << row.n << ',' << format_real(row.sup_error) << ','
       << (row.normalizer_validity.is_valid ? 1 : 0) << ','
       << format_real(row.normalizer_validity.min_mass) << '\n';
  }
}

}  // namespace latstab::io

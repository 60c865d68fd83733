#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "latstab/composition.hpp"
#include "latstab/pmf_window.hpp"
#include "latstab/samplers.hpp"

namespace latstab::io {

/// Reals are written with 17 significant digits, which round-trips every
/// double exactly.
std::string format_real(double x);

/// Columns: k,mass.
void write_pmf_csv(std::ostream& os, const PMFWindow& pmf);
/// Reads k,mass rows; k must be consecutive. Metadata fields are reset.
PMFWindow read_pmf_csv(std::istream& is);

nlohmann::json to_json(const PMFWindow& pmf);
PMFWindow pmf_from_json(const nlohmann::json& j);

/// Columns: value.
void write_batch_csv(std::ostream& os, const SampleBatch& batch);
/// Sidecar: {"law", "seed", "count"} plus any extra fields supplied.
nlohmann::json batch_sidecar(const SampleBatch& batch);
SampleBatch read_batch(std::istream& csv, const nlohmann::json& sidecar);
nlohmann::json to_json(const SampleBatch& batch);

nlohmann::json to_json(const ValidityReport& r);
nlohmann::json to_json(const VerificationReport& r);
/// Columns: label,n,sup_error,normalizer_valid,normalizer_min_mass.
void write_verification_csv(std::ostream& os, const VerificationReport& r, bool header = true);

}  // namespace latstab::io

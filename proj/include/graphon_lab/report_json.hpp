#pragma once

// JSON views of the result types. Non-finite doubles render as null.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "graphon_lab/clique.hpp"
#include "graphon_lab/experiments.hpp"
#include "graphon_lab/moments.hpp"

namespace graphon_lab {

// {"schema_version", "version", "spec", "seed"} header shared by all outputs.
nlohmann::json provenance(const std::string& spec_tag, std::uint64_t seed);

nlohmann::json to_json(const CliqueResult& result);
nlohmann::json to_json(const MomentReport& report);
nlohmann::json to_json(const CutoffResult& result);
nlohmann::json to_json(const VarianceReport& report);
nlohmann::json to_json(const ScalingReport& report);
nlohmann::json to_json(const ConcentrationReport& report);
nlohmann::json to_json(const SuiteResult& result);
nlohmann::json to_json(const MomentCheck& check);

}  // namespace graphon_lab

#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "infolaw/confusion.hpp"
#include "infolaw/distance.hpp"

namespace infolaw {

nlohmann::json to_json(const LawReport& r);
nlohmann::json to_json(const FitReport& r);
nlohmann::json to_json(const AdmissibilityReport& r, const DistanceMatrix& m);
nlohmann::json to_json(const InvarianceReport& r);
nlohmann::json to_json(const SandwichReport& r, const ConfusionMatrix& m);
nlohmann::json to_json(const BoundsReport& r, const ConfusionMatrix& m);

/// Writes `report` with a "metadata" member, pretty-printed, trailing newline.
void save_report(nlohmann::json report, const nlohmann::json& metadata,
                 const std::filesystem::path& path);

}  // namespace infolaw

#pragma once

#include "nicholson/classifier.hpp"
#include "nicholson/dde.hpp"

#include <json.hpp>

namespace nicholson {

nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const Matrix& m);
nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const SpectralResult& spectral);
nlohmann::json to_json(const FrobeniusForm& form);
nlohmann::json to_json(const EquilibriumCertificate& cert);
nlohmann::json to_json(const DelayRobustnessVerdict& verdict);
nlohmann::json to_json(const AsymptoticBounds& bounds);
nlohmann::json to_json(const ClassificationReport& report);
nlohmann::json to_json(const TailStats& stats);
nlohmann::json to_json(const std::vector<TailLabel>& labels);

}  // namespace nicholson

#pragma once

// JSON and CSV output of run reports. Field snapshots are CSV site lists.

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "antiplane/analysis.hpp"
#include "antiplane/greens.hpp"

namespace antiplane {

/// Library version, "major.minor.patch".
const char* version();

ReportMeta make_meta(double radius, const PredictorSpec& spec, const PairPotential& potential,
                     const SolveSettings& settings);

void to_json(nlohmann::json& j, const ReportMeta& m);
void from_json(const nlohmann::json& j, ReportMeta& m);
void to_json(nlohmann::json& j, const Shell& s);
void from_json(const nlohmann::json& j, Shell& s);
void to_json(nlohmann::json& j, const DecayWindow& w);
void from_json(const nlohmann::json& j, DecayWindow& w);
void to_json(nlohmann::json& j, const DecayReport& r);
void from_json(const nlohmann::json& j, DecayReport& r);
void to_json(nlohmann::json& j, const SolveReport& r);
void from_json(const nlohmann::json& j, SolveReport& r);
void to_json(nlohmann::json& j, const C2Calibration& c);
void from_json(const nlohmann::json& j, C2Calibration& c);
void to_json(nlohmann::json& j, const ConvergenceReport& r);
void from_json(const nlohmann::json& j, ConvergenceReport& r);
void to_json(nlohmann::json& j, const SinclairSample& s);
void from_json(const nlohmann::json& j, SinclairSample& s);
void to_json(nlohmann::json& j, const SinclairReport& r);
void from_json(const nlohmann::json& j, SinclairReport& r);
void to_json(nlohmann::json& j, const Gbar1Sample& s);
void from_json(const nlohmann::json& j, Gbar1Sample& s);

/// CSV flattening: a `# key=value` header per meta entry followed by one row per shell.
void write_csv(std::ostream& out, const DecayReport& r);
void write_csv(std::ostream& out, const ConvergenceReport& r);
void write_csv(std::ostream& out, const SinclairReport& r);

/// "a,b,value" rows for every interior site.
void write_field_csv(std::ostream& out, const ScalarField& f);
/// Reads a snapshot back onto `domain`; sites not listed stay 0. Throws
/// std::runtime_error on malformed rows or sites outside the interior.
ScalarField read_field_csv(std::istream& in, const DomainPtr& domain);

}  // namespace antiplane

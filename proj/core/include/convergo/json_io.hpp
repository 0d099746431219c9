#pragma once

#include <string>

#include "convergo/classify.hpp"
#include "convergo/group.hpp"
#include "convergo/measure.hpp"

namespace convergo {

// JSON schemas:
//   group   {"family":"cyclic","n":4} | {"family":"product","factors":[...]}
//           | {"family":"dihedral","n":5} | {"family":"symmetric","n":4}
//           | {"family":"cayley","table":[[...]]}
//   measure {"group":<group>, "weights":[[re,im],...]} or sparse
//           {"group":<group>, "atoms":[{"element":k,"weight":[re,im]},...]},
//           optional "probability": true to validate the invariants
//   zmeasure {"dimension":d, "atoms":[{"point":[...], "weight":[re,im]},...]}
// Weights may be written as single numbers when purely real.

std::string group_spec_to_json(const GroupSpec& spec);
GroupSpec group_spec_from_json(const std::string& text);

std::string measure_to_json(const Measure& m, bool probability_flag);
Measure measure_from_json(const std::string& text);

std::string zmeasure_to_json(const ZMeasure& m);
ZMeasure zmeasure_from_json(const std::string& text);

/// The self-describing analyze document: the exact input spec is embedded, so
/// reports can be reproduced from themselves.
std::string report_to_json(const ErgodicityReport& report, const GroupSpec& group,
                           const Measure& mu, const ClassifyOptions& opts);

std::string verify_summary_to_json(const VerifySummary& summary);
std::string zwitness_to_json(const ZWitnessReport& report, const ZMeasure& mu);
std::string arc_demo_to_json(const ArcDemoReport& report);

}  // namespace convergo

#pragma once

// JSON encoders/decoders for the report documents. Uses the single-header
// nlohmann/json (ordered objects, so key order matches insertion).

#include <algorithm>
#include <map>
#include <span>
#include <vector>

#include "json.hpp"

#include "consortia/model.hpp"
#include "consortia/stats.hpp"
#include "consortia/synth.hpp"

namespace consortia::json_codec {

using Json = nlohmann::ordered_json;

Json to_json(const Consortium& consortium);
Json to_json(std::span<const Consortium> consortia);
// Throws Error(MalformedLine) on schema violations.
Consortium consortium_from_json(const Json& doc);
std::vector<Consortium> consortia_from_json(const Json& doc);

Json to_json(const ClusterParams& params);

Json to_json(const ConsortiumReport& report);
Json to_json(std::span<const ConsortiumReport> reports);
ConsortiumReport report_from_json(const Json& doc);
std::vector<ConsortiumReport> reports_from_json(const Json& doc);

Json to_json(const Correlation& correlation);
Json to_json(const ConsortiumCorrelations& correlations);
Json to_json(const BandTallies& tallies);
Json to_json(const SizeHistogram& histogram);
Json to_json(const DetectionMetrics& metrics);

}  // namespace consortia::json_codec

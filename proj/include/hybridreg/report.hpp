#pragma once

#include "hybridreg/ablation.hpp"
#include "hybridreg/pipeline.hpp"
#include "hybridreg/types.hpp"

#include <iosfwd>
#include <json.hpp>

namespace hybridreg {

// Non-finite numbers become null.
nlohmann::json to_json(const PairEvaluation& e);
nlohmann::json to_json(const PipelineCounts& c);
nlohmann::json to_json(const BenchmarkSummary& s);  // aggregates and per-pair records
nlohmann::json to_json(const SuiteReport& r);

// Rebuilds the records of one configuration from its JSON form.
std::vector<PairEvaluation> records_from_json(const nlohmann::json& configuration);

// One row per configuration: RR, FMR, mean IR, median RRE, median RTE.
void write_summary_table(const SuiteReport& r, std::ostream& out);

// Four rows of four values, row-major.
void write_transform(const RigidTransform& t, std::ostream& out);
RigidTransform read_transform(std::istream& in);

}  // namespace hybridreg

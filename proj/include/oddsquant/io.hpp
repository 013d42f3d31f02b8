#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "oddsquant/estimators.hpp"
#include "oddsquant/model.hpp"
#include "oddsquant/sim.hpp"

namespace oddsquant {

// CSV schema: header `score,label` (label column optional), decimal-point
// numbers, UTF-8. Empty label fields are unlabeled records.
ScoredDataset read_scored_csv(std::istream& in, const std::string& name);
ScoredDataset read_scored_csv_file(const std::string& path);
void write_scored_csv(std::ostream& out, const ScoredDataset& data);

// Edges travel as a bare JSON array of numbers.
BinEdges read_edges_json(std::istream& in);
BinEdges read_edges_json_file(const std::string& path);
nlohmann::json edges_to_json(const BinEdges& edges);

/// FNV-1a over scores and labels, as a 16-char hex string. Stable across
/// reformatting of the source file.
std::string dataset_digest(const ScoredDataset& data);

void to_json(nlohmann::json& j, const ExtendedMeasure& m);
void from_json(const nlohmann::json& j, ExtendedMeasure& m);
void to_json(nlohmann::json& j, const CalibrationResult& r);
void from_json(const nlohmann::json& j, CalibrationResult& r);
void to_json(nlohmann::json& j, const BiasBounds& b);
void from_json(const nlohmann::json& j, BiasBounds& b);
void to_json(nlohmann::json& j, const MonteCarloSummary& s);
void from_json(const nlohmann::json& j, MonteCarloSummary& s);

/// One row per estimation method: method,mean,sd,mae,n_used.
std::string summary_methods_csv(const MonteCarloSummary& s);

/// A scenario document plus the binning controls that accompany it.
struct SimulationSpec {
    Scenario scenario;
    std::size_t bins = 20;
    double pseudo_count = 0.5;
};

SimulationSpec read_simulation_spec(const nlohmann::json& j);
SimulationSpec read_simulation_spec_file(const std::string& path);
nlohmann::json simulation_spec_to_json(const SimulationSpec& spec);

} // namespace oddsquant

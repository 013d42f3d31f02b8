#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "oddsquant/estimators.hpp"
#include "oddsquant/io.hpp"
#include "oddsquant/model.hpp"

namespace oddsquant {

// Command bodies live here so they can be exercised without a subprocess;
// tools/ only parses arguments and maps statuses to exit codes.

struct InputDigest {
    std::string name;
    std::size_t records = 0;
    std::string digest;
};

struct BinningSettings {
    std::optional<BinEdges> explicit_edges; // wins over `bins` when present
    std::size_t bins = 20;                  // equal-frequency on pooled training scores
    double smoothing = 0.5;
    double tol = 1e-10;
    std::optional<std::string> class_a_label;
};

struct EstimateReport {
    OddsEstimate total_odds;
    double p_total_probability = 0.0;
    std::optional<double> p_debiased;       // absent when f_a == f_ac
    std::optional<BiasBounds> bias_bounds;  // at q = total-odds estimate
    std::size_t bins = 0;
    double p0 = 0.0;
    double overlap = 0.0;
    std::string label_a;
    std::string label_ac;
    InputDigest train;
    InputDigest test;
    std::vector<double> edges;
    double smoothing = 0.0;
    double tol = 0.0;
};

struct CalibrateReport {
    CalibrationResult recalibrated;
    double target_prior = 0.0;
    NaiveScaledPosterior naive;
    std::vector<double> lambda;
    std::size_t bins = 0;
    double p0 = 0.0;
    InputDigest train;
    InputDigest test;
    std::vector<double> edges;
    double smoothing = 0.0;
    double tol = 0.0;
};

struct CurveData {
    std::vector<double> p;
    std::vector<double> f;
    OddsEstimate root;
};

BinEdges resolve_edges(const ScoredDataset& train, const BinningSettings& settings);

EstimateReport make_estimate_report(const ScoredDataset& train, const ScoredDataset& test,
                                    const BinningSettings& settings);

CalibrateReport make_calibrate_report(const ScoredDataset& train, const ScoredDataset& test,
                                      double target_prior, const BinningSettings& settings);

CurveData make_curve(const BinnedConditionals& model, const TargetDistribution& target,
                     std::size_t grid_points);

/// `# case` / `# root` comment lines followed by p,F rows.
std::string curve_to_csv(const CurveData& curve);

void to_json(nlohmann::json& j, const EstimateReport& r);
void from_json(const nlohmann::json& j, EstimateReport& r);
void to_json(nlohmann::json& j, const CalibrateReport& r);

/// 0 for an interior solution, 2 for boundary or degenerate statuses.
int exit_code_for(SolutionCase status);

} // namespace oddsquant

#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "oddsquant/estimators.hpp"
#include "oddsquant/model.hpp"
#include "oddsquant/rng.hpp"

namespace oddsquant {

struct GaussianScoreModel {
    double mu_a = 0.0;
    double mu_ac = 0.0;
    double sigma = 1.0;
};

struct DiscreteScoreModel {
    std::vector<double> f_a;
    std::vector<double> f_ac;
};

using ScoreModel = std::variant<GaussianScoreModel, DiscreteScoreModel>;

enum class ShiftKind { prior_shift, odds_preserving_shift };

/// A controlled shift experiment: the target population is either an exact
/// class mixture with prior q, or an explicit bin distribution that shares
/// only the relative odds with the training model.
struct Scenario {
    ShiftKind kind = ShiftKind::prior_shift;
    ScoreModel score_model;
    double p0 = 0.5;
    double q = 0.0;                            // prior_shift only
    std::optional<TargetDistribution> target;  // odds_preserving_shift only
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::size_t n_reps = 0;
    std::uint64_t seed = 0;
    bool analytic = false; // exact densities and exact target weights, no sampling

    void validate() const;
};

struct MethodStats {
    double mean = 0.0;
    double sd = 0.0;
    double mae = 0.0;       // vs the scenario truth
    std::size_t n_used = 0; // replications contributing to the statistics
};

struct MonteCarloSummary {
    MethodStats total_probability;
    MethodStats total_odds;
    MethodStats debiased;
    std::size_t non_interior_count = 0; // total-odds replications at a boundary
    double truth = 0.0;
    std::size_t n_reps = 0;
};

/// n labeled draws: class A with the given prior, score from that class's
/// conditional. Discrete models emit the bin index + 0.5 as the score.
ScoredDataset sample_labeled(const ScoreModel& model, double prior, std::size_t n, Rng& rng);

/// The bin probabilities implied by the score model, without sampling.
/// Gaussian tails beyond the outer edges are folded into the end bins.
BinnedConditionals exact_binned_conditionals(const ScoreModel& model, const BinEdges& edges,
                                             double p0);

/// Default partition for a scenario: unit-width integer edges for discrete
/// models, `bins` equal-width bins spanning both means +/- 4 sigma for
/// gaussian ones.
BinEdges default_edges_for(const ScoreModel& model, std::size_t bins);

struct OddsPreservingTarget {
    TargetDistribution target;
    OddsEstimate implied; // the unique prior consistent with preserved relative odds
};

/// Passes the weights through and attaches the prior implied by the
/// total-odds equation (boundary statuses included).
OddsPreservingTarget odds_preserving_target(const BinnedConditionals& model,
                                            const TargetDistribution& weights);

/// Runs the scenario: per replication, fit on a fresh training sample,
/// build target weights from a fresh unlabeled sample, apply all three
/// estimators. Estimator failures are recorded, not fatal; boundary-status
/// total-odds replications are counted but excluded from its statistics.
MonteCarloSummary run_monte_carlo(const Scenario& scenario, const BinEdges& edges,
                                  double pseudo_count);

} // namespace oddsquant

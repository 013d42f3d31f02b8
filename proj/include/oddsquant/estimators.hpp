#pragma once

#include <cstdint>
#include <vector>

#include "oddsquant/model.hpp"
#include "oddsquant/solver.hpp"

namespace oddsquant {

/// Error bounds for the total-probability estimate under a class mixture
/// with true prior q. The gap itself is an identity: TP - q = (p0 - q) * I.
struct BiasBounds {
    double overlap = 0.0;       // sum_k min(f_a[k], f_ac[k]), in (0, 1]
    double i_factor = 0.0;      // sum_k f_a*f_ac / (p0*f_a + (1-p0)*f_ac), in (0, 1]
    double lower = 0.0;         // |q - p0| * overlap
    double upper = 0.0;         // |q - p0|
    double predicted_gap = 0.0; // (p0 - q) * I
};

/// Joint class/bin table extending the target distribution to class events,
/// built from a prior p1 and the (optionally scaled) likelihood ratio.
struct ExtendedMeasure {
    double p1 = 0.0;
    std::vector<double> joint_a;    // P*[A and bin k]
    std::vector<double> joint_ac;   // P*[Ac and bin k]
    std::vector<double> posterior1; // P*[A | bin k]
    std::vector<double> cond_a;     // P*[bin k | A]
    std::vector<double> cond_ac;    // P*[bin k | Ac]
};

struct CalibrationResult {
    double c = 0.0;
    std::vector<double> posterior1;
    double achieved_mean = 0.0; // expectation of posterior1 under the target
};

/// Unclamped rescaled posteriors; in_range[k] is false where the value
/// exceeds one.
struct NaiveScaledPosterior {
    double scale = 0.0;
    std::vector<double> values;
    std::vector<bool> in_range;
};

/// Averages the training posteriors over the target bin distribution.
/// Biased toward p0 when the target prior differs from the training prior.
double total_probability(const BinnedConditionals& model, const TargetDistribution& target);

/// Root of the total-odds equation for the model's likelihood ratios under
/// the target weights. Recovers the true prior exactly on mixture targets.
OddsEstimate total_odds(const BinnedConditionals& model, const TargetDistribution& target,
                        double tol = 1e-10, int max_iter = 200);

BiasBounds bias_bounds(const BinnedConditionals& model, double q);

/// Inverts the total-probability bias identity: (TP - p0 * I) / (1 - I).
/// Undefined when the class-conditional densities coincide (I = 1).
double debiased_total_probability(const BinnedConditionals& model,
                                  const TargetDistribution& target);

/// Builds the joint table for prior p1 and scaled ratio c * lambda. The
/// table only normalizes when (p1, c) solve the total-odds/scale equation
/// for the target; a violation beyond 1e-8 throws NotNormalized.
ExtendedMeasure extend_measure(const BinnedConditionals& model, const TargetDistribution& target,
                               double p1, double c = 1.0);

/// Rescales the likelihood ratio so the posteriors average to the externally
/// supplied target prior. Values stay inside (0,1) by construction, unlike
/// the naive proportional rescaling.
CalibrationResult recalibrate_posteriors(const BinnedConditionals& model,
                                         const TargetDistribution& target, double p1_target,
                                         double tol = 1e-10);

/// Proportional rescaling of the training posteriors to hit the target
/// prior on average. Can push individual bins above one; returned unclamped
/// with per-bin validity flags.
NaiveScaledPosterior naive_scaled_posterior(const BinnedConditionals& model,
                                            const TargetDistribution& target, double p1_target);

/// The q-dependent part of the mixture log-likelihood for binned counts:
/// sum_k counts[k] * log(q + (1-q) * lambda[k]), evaluated on q_grid.
std::vector<double> log_likelihood_profile(const std::vector<double>& q_grid,
                                           const std::vector<double>& lambdas,
                                           const std::vector<std::int64_t>& counts);

} // namespace oddsquant

#include "oddsquant/estimators.hpp"

#include <algorithm>
#include <cmath>

namespace oddsquant {

namespace {

void check_dimensions(const BinnedConditionals& model, const TargetDistribution& target) {
    if (target.weights.size() != model.bin_count())
        throw DimensionMismatch("target has " + std::to_string(target.weights.size()) +
                                " weights, model has " + std::to_string(model.bin_count()) +
                                " bins");
}

} // namespace

double total_probability(const BinnedConditionals& model, const TargetDistribution& target) {
    check_dimensions(model, target);
    const auto post = posterior0(model);
    double acc = 0.0;
    for (std::size_t i = 0; i < post.size(); ++i)
        acc += target.weights[i] * post[i];
    return acc;
}

OddsEstimate total_odds(const BinnedConditionals& model, const TargetDistribution& target,
                        double tol, int max_iter) {
    check_dimensions(model, target);
    return solve_total_odds(LambdaSample{lambda_of(model), target.weights}, tol, max_iter);
}

BiasBounds bias_bounds(const BinnedConditionals& model, double q) {
    if (!(q >= 0.0 && q <= 1.0))
        throw InvalidInput("q must lie in [0,1]");
    BiasBounds b;
    for (std::size_t i = 0; i < model.bin_count(); ++i) {
        b.overlap += std::min(model.f_a[i], model.f_ac[i]);
        b.i_factor += model.f_a[i] * model.f_ac[i] /
                      (model.p0 * model.f_a[i] + (1.0 - model.p0) * model.f_ac[i]);
    }
    b.lower = std::abs(q - model.p0) * b.overlap;
    b.upper = std::abs(q - model.p0);
    b.predicted_gap = (model.p0 - q) * b.i_factor;
    return b;
}

double debiased_total_probability(const BinnedConditionals& model,
                                  const TargetDistribution& target) {
    check_dimensions(model, target);
    const double i_factor = bias_bounds(model, model.p0).i_factor;
    if (i_factor >= 1.0 - 1e-12)
        throw DegenerateOverlap("f_a and f_ac coincide; the debiased estimator is undefined");
    const double tp = total_probability(model, target);
    return (tp - model.p0 * i_factor) / (1.0 - i_factor);
}

ExtendedMeasure extend_measure(const BinnedConditionals& model, const TargetDistribution& target,
                               double p1, double c) {
    check_dimensions(model, target);
    if (!(p1 > 0.0 && p1 < 1.0))
        throw InvalidInput("p1 must lie strictly inside (0,1)");
    if (!(c > 0.0))
        throw InvalidInput("scale c must be positive");

    const auto lam = lambda_of(model);
    const std::size_t k = lam.size();
    ExtendedMeasure m;
    m.p1 = p1;
    m.joint_a.resize(k);
    m.joint_ac.resize(k);
    m.posterior1.resize(k);
    m.cond_a.resize(k);
    m.cond_ac.resize(k);

    double mass_a = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        m.posterior1[i] = p1 / (p1 + (1.0 - p1) * c * lam[i]);
        m.joint_a[i] = target.weights[i] * m.posterior1[i];
        m.joint_ac[i] = target.weights[i] * (1.0 - m.posterior1[i]);
        mass_a += m.joint_a[i];
    }
    if (std::abs(mass_a - p1) > 1e-8)
        throw NotNormalized("class-A mass " + std::to_string(mass_a) +
                            " deviates from p1; the prior/scale pair does not solve the "
                            "total-odds equation for this target");

    for (std::size_t i = 0; i < k; ++i) {
        m.cond_a[i] = m.joint_a[i] / p1;
        m.cond_ac[i] = m.joint_ac[i] / (1.0 - p1);
    }
    return m;
}

CalibrationResult recalibrate_posteriors(const BinnedConditionals& model,
                                         const TargetDistribution& target, double p1_target,
                                         double tol) {
    check_dimensions(model, target);
    const auto lam = lambda_of(model);
    const LambdaSample sample{lam, target.weights};

    CalibrationResult r;
    r.c = solve_scale(sample, p1_target, tol);
    r.posterior1.resize(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) {
        r.posterior1[i] = p1_target / (p1_target + (1.0 - p1_target) * r.c * lam[i]);
        r.achieved_mean += target.weights[i] * r.posterior1[i];
    }
    return r;
}

NaiveScaledPosterior naive_scaled_posterior(const BinnedConditionals& model,
                                            const TargetDistribution& target,
                                            double p1_target) {
    check_dimensions(model, target);
    NaiveScaledPosterior out;
    out.scale = p1_target / total_probability(model, target);
    const auto post = posterior0(model);
    out.values.resize(post.size());
    out.in_range.resize(post.size());
    for (std::size_t i = 0; i < post.size(); ++i) {
        out.values[i] = post[i] * out.scale;
        out.in_range[i] = out.values[i] <= 1.0;
    }
    return out;
}

std::vector<double> log_likelihood_profile(const std::vector<double>& q_grid,
                                           const std::vector<double>& lambdas,
                                           const std::vector<std::int64_t>& counts) {
    if (lambdas.size() != counts.size())
        throw DimensionMismatch("lambdas and counts differ in length");
    std::int64_t total = 0;
    for (std::int64_t c : counts) {
        if (c < 0)
            throw InvalidInput("counts must be nonnegative");
        total += c;
    }
    if (total == 0)
        throw InvalidInput("counts are all zero");

    std::vector<double> profile(q_grid.size(), 0.0);
    for (std::size_t gi = 0; gi < q_grid.size(); ++gi) {
        const double q = q_grid[gi];
        double acc = 0.0;
        for (std::size_t i = 0; i < lambdas.size(); ++i)
            if (counts[i] != 0)
                acc += static_cast<double>(counts[i]) * std::log(q + (1.0 - q) * lambdas[i]);
        profile[gi] = acc;
    }
    return profile;
}

} // namespace oddsquant

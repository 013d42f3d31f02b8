#include "oddsquant/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace oddsquant {

namespace {

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

// Bin probabilities of a normal with the tails folded into the end bins.
std::vector<double> gaussian_bin_probs(const BinEdges& edges, double mu, double sigma) {
    const auto& e = edges.edges();
    const std::size_t k = edges.bin_count();
    std::vector<double> probs(k);
    double prev = 0.0; // CDF mass strictly below the current interior edge
    for (std::size_t i = 0; i < k; ++i) {
        const double next = i + 1 < k ? normal_cdf((e[i + 1] - mu) / sigma) : 1.0;
        probs[i] = next - prev;
        prev = next;
    }
    return probs;
}

struct ReplicationOutcome {
    std::optional<double> tp;
    std::optional<double> to;
    std::optional<double> db;
    bool non_interior = false;
};

MethodStats aggregate(const std::vector<double>& values, double truth) {
    MethodStats stats;
    stats.n_used = values.size();
    if (values.empty()) {
        stats.mean = stats.sd = stats.mae = std::numeric_limits<double>::quiet_NaN();
        return stats;
    }
    double sum = 0.0;
    for (double v : values)
        sum += v;
    stats.mean = sum / static_cast<double>(values.size());
    double ss = 0.0, abs_err = 0.0;
    for (double v : values) {
        ss += (v - stats.mean) * (v - stats.mean);
        abs_err += std::abs(v - truth);
    }
    stats.sd = values.size() > 1
                   ? std::sqrt(ss / static_cast<double>(values.size() - 1))
                   : 0.0;
    stats.mae = abs_err / static_cast<double>(values.size());
    return stats;
}

} // namespace

void Scenario::validate() const {
    if (const auto* g = std::get_if<GaussianScoreModel>(&score_model)) {
        if (!(g->sigma > 0.0))
            throw InvalidInput("gaussian sigma must be positive");
    } else {
        const auto& d = std::get<DiscreteScoreModel>(score_model);
        if (d.f_a.size() != d.f_ac.size() || d.f_a.size() < 2)
            throw InvalidInput("discrete score model needs matching f_a/f_ac of length >= 2");
    }
    if (!(p0 > 0.0 && p0 < 1.0))
        throw InvalidInput("p0 must lie strictly inside (0,1)");
    if (kind == ShiftKind::prior_shift) {
        if (!(q > 0.0 && q < 1.0))
            throw InvalidInput("prior_shift q must lie strictly inside (0,1)");
    } else {
        if (!target)
            throw InvalidInput("odds_preserving_shift needs explicit target weights");
        target->validate();
    }
    if (!analytic && (n_train < 1 || n_test < 1))
        throw InvalidInput("sample sizes must be >= 1");
    if (n_reps < 1)
        throw InvalidInput("n_reps must be >= 1");
}

ScoredDataset sample_labeled(const ScoreModel& model, double prior, std::size_t n, Rng& rng) {
    if (!(prior >= 0.0 && prior <= 1.0))
        throw InvalidInput("prior must lie in [0,1]");
    if (n < 1)
        throw InvalidInput("sample size must be >= 1");

    ScoredDataset out;
    out.name = "sampled";
    out.records.reserve(n);

    if (const auto* g = std::get_if<GaussianScoreModel>(&model)) {
        for (std::size_t i = 0; i < n; ++i) {
            const bool is_a = rng.uniform() < prior;
            const double mu = is_a ? g->mu_a : g->mu_ac;
            out.records.push_back({mu + g->sigma * rng.normal(),
                                   std::optional<std::string>(is_a ? "A" : "Ac")});
        }
    } else {
        const auto& d = std::get<DiscreteScoreModel>(model);
        const auto cum_a = Rng::cumulative(d.f_a);
        const auto cum_ac = Rng::cumulative(d.f_ac);
        for (std::size_t i = 0; i < n; ++i) {
            const bool is_a = rng.uniform() < prior;
            const std::size_t bin = rng.categorical(is_a ? cum_a : cum_ac);
            out.records.push_back({static_cast<double>(bin) + 0.5,
                                   std::optional<std::string>(is_a ? "A" : "Ac")});
        }
    }
    return out;
}

BinnedConditionals exact_binned_conditionals(const ScoreModel& model, const BinEdges& edges,
                                             double p0) {
    std::vector<double> f_a, f_ac;
    if (const auto* g = std::get_if<GaussianScoreModel>(&model)) {
        f_a = gaussian_bin_probs(edges, g->mu_a, g->sigma);
        f_ac = gaussian_bin_probs(edges, g->mu_ac, g->sigma);
    } else {
        const auto& d = std::get<DiscreteScoreModel>(model);
        if (d.f_a.size() != edges.bin_count())
            throw DimensionMismatch("discrete score model does not match the bin count");
        f_a = d.f_a;
        f_ac = d.f_ac;
    }
    BinnedConditionals out{edges, std::move(f_a), std::move(f_ac), p0, "A", "Ac"};
    out.validate();
    return out;
}

BinEdges default_edges_for(const ScoreModel& model, std::size_t bins) {
    if (const auto* g = std::get_if<GaussianScoreModel>(&model)) {
        const double lo = std::min(g->mu_a, g->mu_ac) - 4.0 * g->sigma;
        const double hi = std::max(g->mu_a, g->mu_ac) + 4.0 * g->sigma;
        return uniform_edges(lo, hi, bins);
    }
    const auto& d = std::get<DiscreteScoreModel>(model);
    return uniform_edges(0.0, static_cast<double>(d.f_a.size()), d.f_a.size());
}

OddsPreservingTarget odds_preserving_target(const BinnedConditionals& model,
                                            const TargetDistribution& weights) {
    return OddsPreservingTarget{weights, total_odds(model, weights)};
}

MonteCarloSummary run_monte_carlo(const Scenario& scenario, const BinEdges& edges,
                                  double pseudo_count) {
    scenario.validate();

    const BinnedConditionals exact =
        exact_binned_conditionals(scenario.score_model, edges, scenario.p0);

    double truth;
    TargetDistribution exact_target{{}, std::nullopt};
    std::vector<double> target_midpoints(edges.bin_count());
    for (std::size_t i = 0; i < edges.bin_count(); ++i)
        target_midpoints[i] = edges.midpoint(i);

    if (scenario.kind == ShiftKind::prior_shift) {
        truth = scenario.q;
        exact_target = mixture_target(exact, scenario.q);
    } else {
        exact_target = *scenario.target;
        truth = odds_preserving_target(exact, exact_target).implied.p1;
    }
    const auto cum_target = Rng::cumulative(exact_target.weights);

    std::vector<ReplicationOutcome> outcomes(scenario.n_reps);
    for (std::size_t rep = 0; rep < scenario.n_reps; ++rep) {
        ReplicationOutcome& out = outcomes[rep];

        BinnedConditionals model = exact;
        TargetDistribution target = exact_target;
        if (!scenario.analytic) {
            Rng rng = Rng::for_replication(scenario.seed, rep);
            try {
                const ScoredDataset train =
                    sample_labeled(scenario.score_model, scenario.p0, scenario.n_train, rng);
                model = fit_binned(train, edges, pseudo_count);
            } catch (const Error&) {
                continue; // no model this replication; all estimators skipped
            }
            ScoredDataset test;
            test.name = "target";
            test.records.reserve(scenario.n_test);
            if (scenario.kind == ShiftKind::prior_shift) {
                test = sample_labeled(scenario.score_model, scenario.q, scenario.n_test, rng);
            } else {
                for (std::size_t i = 0; i < scenario.n_test; ++i) {
                    const std::size_t bin = rng.categorical(cum_target);
                    test.records.push_back({target_midpoints[bin], std::nullopt});
                }
            }
            target = target_weights(test, edges);
        }

        try {
            out.tp = total_probability(model, target);
        } catch (const Error&) {
        }
        try {
            const OddsEstimate est = total_odds(model, target);
            if (est.status == SolutionCase::interior)
                out.to = est.p1;
            else
                out.non_interior = true;
        } catch (const Error&) {
            out.non_interior = true;
        }
        try {
            out.db = debiased_total_probability(model, target);
        } catch (const Error&) {
        }
    }

    std::vector<double> tp_values, to_values, db_values;
    MonteCarloSummary summary;
    for (const auto& out : outcomes) {
        if (out.tp)
            tp_values.push_back(*out.tp);
        if (out.to)
            to_values.push_back(*out.to);
        if (out.db)
            db_values.push_back(*out.db);
        if (out.non_interior)
            ++summary.non_interior_count;
    }
    summary.total_probability = aggregate(tp_values, truth);
    summary.total_odds = aggregate(to_values, truth);
    summary.debiased = aggregate(db_values, truth);
    summary.truth = truth;
    summary.n_reps = scenario.n_reps;
    return summary;
}

} // namespace oddsquant

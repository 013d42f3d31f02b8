#include "oddsquant/cli.hpp"

#include <cmath>
#include <cstdio>

namespace oddsquant {

namespace {

InputDigest digest_of(const ScoredDataset& data) {
    return InputDigest{data.name, data.records.size(), dataset_digest(data)};
}

nlohmann::json digest_json(const InputDigest& d) {
    return {{"name", d.name}, {"records", d.records}, {"digest", d.digest}};
}

InputDigest digest_from_json(const nlohmann::json& j) {
    InputDigest d;
    j.at("name").get_to(d.name);
    j.at("records").get_to(d.records);
    j.at("digest").get_to(d.digest);
    return d;
}

nlohmann::json model_block(std::size_t bins, double p0, double overlap,
                           const std::string& label_a, const std::string& label_ac) {
    return {{"bins", bins},
            {"p0", p0},
            {"overlap", overlap},
            {"label_a", label_a},
            {"label_ac", label_ac}};
}

nlohmann::json settings_block(const std::vector<double>& edges, double smoothing, double tol) {
    return {{"edges", edges}, {"smoothing", smoothing}, {"tol", tol}};
}

} // namespace

BinEdges resolve_edges(const ScoredDataset& train, const BinningSettings& settings) {
    if (settings.explicit_edges)
        return *settings.explicit_edges;
    std::vector<double> scores;
    scores.reserve(train.records.size());
    for (const auto& r : train.records)
        scores.push_back(r.score);
    return equal_frequency_edges(std::move(scores), settings.bins);
}

EstimateReport make_estimate_report(const ScoredDataset& train, const ScoredDataset& test,
                                    const BinningSettings& settings) {
    const BinEdges edges = resolve_edges(train, settings);
    const BinnedConditionals model =
        fit_binned(train, edges, settings.smoothing, settings.class_a_label);
    const TargetDistribution target = target_weights(test, edges);

    EstimateReport r;
    r.total_odds = total_odds(model, target, settings.tol);
    r.p_total_probability = total_probability(model, target);
    try {
        r.p_debiased = debiased_total_probability(model, target);
    } catch (const DegenerateOverlap&) {
        // leave absent; the report still carries the other estimators
    }
    if (std::isfinite(r.total_odds.p1))
        r.bias_bounds = bias_bounds(model, r.total_odds.p1);

    r.bins = model.bin_count();
    r.p0 = model.p0;
    r.overlap = bias_bounds(model, model.p0).overlap;
    r.label_a = model.label_a;
    r.label_ac = model.label_ac;
    r.train = digest_of(train);
    r.test = digest_of(test);
    r.edges = edges.edges();
    r.smoothing = settings.smoothing;
    r.tol = settings.tol;
    return r;
}

CalibrateReport make_calibrate_report(const ScoredDataset& train, const ScoredDataset& test,
                                      double target_prior, const BinningSettings& settings) {
    if (!(target_prior > 0.0 && target_prior < 1.0))
        throw InvalidInput("target prior must lie strictly inside (0,1)");
    const BinEdges edges = resolve_edges(train, settings);
    const BinnedConditionals model =
        fit_binned(train, edges, settings.smoothing, settings.class_a_label);
    const TargetDistribution target = target_weights(test, edges);

    CalibrateReport r;
    r.recalibrated = recalibrate_posteriors(model, target, target_prior, settings.tol);
    r.target_prior = target_prior;
    r.naive = naive_scaled_posterior(model, target, target_prior);
    r.lambda = lambda_of(model);
    r.bins = model.bin_count();
    r.p0 = model.p0;
    r.train = digest_of(train);
    r.test = digest_of(test);
    r.edges = edges.edges();
    r.smoothing = settings.smoothing;
    r.tol = settings.tol;
    return r;
}

CurveData make_curve(const BinnedConditionals& model, const TargetDistribution& target,
                     std::size_t grid_points) {
    if (grid_points < 2)
        throw InvalidInput("grid needs at least 2 points");
    const LambdaSample sample{lambda_of(model), target.weights};
    sample.validate();

    CurveData curve;
    curve.p.resize(grid_points);
    curve.f.resize(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i) {
        curve.p[i] =
            static_cast<double>(i) / static_cast<double>(grid_points - 1);
        curve.f[i] = f_eval(curve.p[i], sample);
    }
    curve.root = solve_total_odds(sample);
    return curve;
}

std::string curve_to_csv(const CurveData& curve) {
    std::string out;
    char buf[64];
    out += "# case ";
    out += to_string(curve.root.status);
    out += '\n';
    std::snprintf(buf, sizeof(buf), "# root %.17g\n", curve.root.p1);
    out += buf;
    out += "p,F\n";
    for (std::size_t i = 0; i < curve.p.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", curve.p[i], curve.f[i]);
        out += buf;
    }
    return out;
}

void to_json(nlohmann::json& j, const EstimateReport& r) {
    nlohmann::json odds{{"p1", r.total_odds.p1},
                        {"status", std::string(to_string(r.total_odds.status))},
                        {"residual", r.total_odds.residual},
                        {"iterations", r.total_odds.iterations}};
    nlohmann::json diag{{"mean_lambda", r.total_odds.diagnostics.mean_lambda},
                        {"mean_inv_lambda", r.total_odds.diagnostics.mean_inv_lambda},
                        {"degenerate", r.total_odds.diagnostics.degenerate},
                        {"case", std::string(to_string(r.total_odds.diagnostics.status))}};
    j = nlohmann::json{
        {"estimates",
         {{"total_odds", odds},
          {"total_probability", r.p_total_probability},
          {"debiased", r.p_debiased ? nlohmann::json(*r.p_debiased) : nlohmann::json()}}},
        {"diagnostics", diag},
        {"bias_bounds", r.bias_bounds ? nlohmann::json(*r.bias_bounds) : nlohmann::json()},
        {"model", model_block(r.bins, r.p0, r.overlap, r.label_a, r.label_ac)},
        {"inputs", {{"train", digest_json(r.train)}, {"test", digest_json(r.test)}}},
        {"settings", settings_block(r.edges, r.smoothing, r.tol)}};
}

void from_json(const nlohmann::json& j, EstimateReport& r) {
    const auto& odds = j.at("estimates").at("total_odds");
    r.total_odds.p1 = odds.at("p1").is_null() ? std::nan("") : odds.at("p1").get<double>();
    r.total_odds.status = solution_case_from_string(odds.at("status").get<std::string>());
    r.total_odds.residual =
        odds.at("residual").is_null() ? std::nan("") : odds.at("residual").get<double>();
    r.total_odds.iterations = odds.at("iterations").get<int>();

    const auto& diag = j.at("diagnostics");
    r.total_odds.diagnostics.mean_lambda = diag.at("mean_lambda").get<double>();
    r.total_odds.diagnostics.mean_inv_lambda = diag.at("mean_inv_lambda").get<double>();
    r.total_odds.diagnostics.degenerate = diag.at("degenerate").get<bool>();
    r.total_odds.diagnostics.status =
        solution_case_from_string(diag.at("case").get<std::string>());

    r.p_total_probability = j.at("estimates").at("total_probability").get<double>();
    const auto& db = j.at("estimates").at("debiased");
    r.p_debiased = db.is_null() ? std::nullopt : std::optional<double>(db.get<double>());
    const auto& bb = j.at("bias_bounds");
    r.bias_bounds = bb.is_null() ? std::nullopt : std::optional<BiasBounds>(bb.get<BiasBounds>());

    const auto& model = j.at("model");
    r.bins = model.at("bins").get<std::size_t>();
    r.p0 = model.at("p0").get<double>();
    r.overlap = model.at("overlap").get<double>();
    r.label_a = model.at("label_a").get<std::string>();
    r.label_ac = model.at("label_ac").get<std::string>();

    r.train = digest_from_json(j.at("inputs").at("train"));
    r.test = digest_from_json(j.at("inputs").at("test"));

    const auto& settings = j.at("settings");
    settings.at("edges").get_to(r.edges);
    r.smoothing = settings.at("smoothing").get<double>();
    r.tol = settings.at("tol").get<double>();
}

void to_json(nlohmann::json& j, const CalibrateReport& r) {
    std::vector<bool> valid(r.naive.in_range.begin(), r.naive.in_range.end());
    j = nlohmann::json{
        {"c", r.recalibrated.c},
        {"achieved_mean", r.recalibrated.achieved_mean},
        {"posterior1", r.recalibrated.posterior1},
        {"target_prior", r.target_prior},
        {"naive", {{"scale", r.naive.scale}, {"values", r.naive.values}, {"valid", valid}}},
        {"lambda", r.lambda},
        {"model", {{"bins", r.bins}, {"p0", r.p0}}},
        {"inputs", {{"train", digest_json(r.train)}, {"test", digest_json(r.test)}}},
        {"settings", settings_block(r.edges, r.smoothing, r.tol)}};
}

int exit_code_for(SolutionCase status) {
    return status == SolutionCase::interior ? 0 : 2;
}

} // namespace oddsquant

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "oddsquant/cli.hpp"
#include "oddsquant/estimators.hpp"
#include "oddsquant/io.hpp"
#include "oddsquant/sim.hpp"

namespace {

using namespace oddsquant;

struct BinningFlags {
    std::size_t bins = 20;
    std::string edges_file;
    double smoothing = 0.5;
    double tol = 1e-10;
    std::string class_a;
};

void add_binning_flags(CLI::App* cmd, BinningFlags& flags) {
    cmd->add_option("--bins", flags.bins, "Equal-frequency bin count (default 20)");
    cmd->add_option("--edges", flags.edges_file, "JSON file with explicit bin edges");
    cmd->add_option("--smoothing", flags.smoothing,
                    "Pseudo-count added to every bin (default 0.5)");
    cmd->add_option("--tol", flags.tol, "Root-finding residual tolerance (default 1e-10)");
    cmd->add_option("--class-a", flags.class_a,
                    "Label tag treated as class A (default: lexicographically first)");
}

BinningSettings to_settings(const BinningFlags& flags) {
    BinningSettings s;
    if (!flags.edges_file.empty())
        s.explicit_edges = read_edges_json_file(flags.edges_file);
    s.bins = flags.bins;
    s.smoothing = flags.smoothing;
    s.tol = flags.tol;
    if (!flags.class_a.empty())
        s.class_a_label = flags.class_a;
    return s;
}

void emit(const nlohmann::json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out(out_path);
        if (!out)
            throw InvalidInput("cannot write '" + out_path + "'");
        out << j.dump(2) << '\n';
    }
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out)
            throw InvalidInput("cannot write '" + out_path + "'");
        out << text;
    }
}

int run_estimate(const std::string& train_path, const std::string& test_path,
                 const BinningFlags& flags, const std::string& out_path) {
    const auto train = read_scored_csv_file(train_path);
    const auto test = read_scored_csv_file(test_path);
    const EstimateReport report = make_estimate_report(train, test, to_settings(flags));
    emit(nlohmann::json(report), out_path);
    return exit_code_for(report.total_odds.status);
}

int run_calibrate(const std::string& train_path, const std::string& test_path,
                  double target_prior, const BinningFlags& flags,
                  const std::string& out_path) {
    const auto train = read_scored_csv_file(train_path);
    const auto test = read_scored_csv_file(test_path);
    try {
        const CalibrateReport report =
            make_calibrate_report(train, test, target_prior, to_settings(flags));
        emit(nlohmann::json(report), out_path);
    } catch (const DegenerateLambda& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

int run_simulate(const std::string& scenario_path, const std::string& out_prefix) {
    const SimulationSpec spec = read_simulation_spec_file(scenario_path);
    const BinEdges edges = default_edges_for(spec.scenario.score_model, spec.bins);
    const MonteCarloSummary summary =
        run_monte_carlo(spec.scenario, edges, spec.pseudo_count);

    nlohmann::json j = summary;
    j["scenario"] = simulation_spec_to_json(spec);
    emit(j, out_prefix + "_summary.json");
    emit_text(summary_methods_csv(summary), out_prefix + "_methods.csv");
    return 0;
}

int run_curve(const std::string& train_path, const std::string& test_path,
              const BinningFlags& flags, std::size_t grid, const std::string& out_path) {
    const auto train = read_scored_csv_file(train_path);
    const auto test = read_scored_csv_file(test_path);
    const BinningSettings settings = to_settings(flags);
    const BinEdges edges = resolve_edges(train, settings);
    const BinnedConditionals model =
        fit_binned(train, edges, settings.smoothing, settings.class_a_label);
    const TargetDistribution target = target_weights(test, edges);
    emit_text(curve_to_csv(make_curve(model, target, grid)), out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Class-prior estimation from classifier scores: total-odds and "
                 "total-probability estimators, bias bounds, posterior recalibration, "
                 "and Monte Carlo shift experiments"};
    app.require_subcommand(1);

    std::string train_path, test_path, out_path, scenario_path, out_prefix;
    double target_prior = 0.5;
    std::size_t grid = 101;
    BinningFlags flags;

    auto* estimate = app.add_subcommand(
        "estimate", "Estimate the target-population class prior from score files");
    estimate->add_option("train", train_path, "Labeled training CSV (score,label)")
        ->required();
    estimate->add_option("test", test_path, "Target-population CSV (score[,label])")
        ->required();
    add_binning_flags(estimate, flags);
    estimate->add_option("--out", out_path, "Write the JSON report here instead of stdout");

    auto* calibrate = app.add_subcommand(
        "calibrate", "Recalibrate per-bin posteriors to an externally given prior");
    calibrate->add_option("train", train_path, "Labeled training CSV")->required();
    calibrate->add_option("test", test_path, "Target-population CSV")->required();
    calibrate->add_option("--target-prior", target_prior, "Externally supplied class-A prior")
        ->required();
    add_binning_flags(calibrate, flags);
    calibrate->add_option("--out", out_path, "Write the JSON report here instead of stdout");

    auto* simulate =
        app.add_subcommand("simulate", "Run a Monte Carlo shift scenario from a JSON file");
    simulate->add_option("scenario", scenario_path, "Scenario JSON document")->required();
    simulate->add_option("--out", out_prefix, "Output prefix for _summary.json/_methods.csv")
        ->required();

    auto* curve = app.add_subcommand(
        "curve", "Tabulate F(p) on a uniform grid together with the located root");
    curve->add_option("train", train_path, "Labeled training CSV")->required();
    curve->add_option("test", test_path, "Target-population CSV")->required();
    curve->add_option("--grid", grid, "Number of grid points (default 101)");
    add_binning_flags(curve, flags);
    curve->add_option("--out", out_path, "Write the CSV here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (estimate->parsed())
            return run_estimate(train_path, test_path, flags, out_path);
        if (calibrate->parsed())
            return run_calibrate(train_path, test_path, target_prior, flags, out_path);
        if (simulate->parsed())
            return run_simulate(scenario_path, out_prefix);
        if (curve->parsed())
            return run_curve(train_path, test_path, flags, grid, out_path);
    } catch (const oddsquant::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

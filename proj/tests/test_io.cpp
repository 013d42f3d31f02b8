#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "oddsquant/cli.hpp"
#include "oddsquant/io.hpp"
#include "test_support.hpp"

using namespace oddsquant;
using nlohmann::json;
using test_support::fixture;

TEST_CASE("csv parsing accepts both schemas") {
    std::istringstream labeled("score,label\n0.25,A\n0.75,Ac\n1.5,\n");
    const auto data = read_scored_csv(labeled, "mem");
    REQUIRE(data.records.size() == 3);
    CHECK(data.records[0].score == 0.25);
    CHECK(*data.records[0].label == "A");
    CHECK(*data.records[1].label == "Ac");
    CHECK_FALSE(data.records[2].label.has_value()); // empty label field
    CHECK_FALSE(data.fully_labeled());

    std::istringstream bare("score\n-1.5\n2e-3\n");
    const auto scores = read_scored_csv(bare, "mem");
    REQUIRE(scores.records.size() == 2);
    CHECK(scores.records[0].score == -1.5);
    CHECK(scores.records[1].score == 2e-3);
}

TEST_CASE("csv parsing survives CRLF, BOM and blank lines") {
    std::istringstream windows("\xEF\xBB\xBFscore,label\r\n0.25,A\r\n\r\n0.75,Ac\r\n");
    const auto data = read_scored_csv(windows, "mem");
    REQUIRE(data.records.size() == 2);
    CHECK(data.records[1].score == 0.75);
    CHECK(data.distinct_labels() == std::vector<std::string>{"A", "Ac"});
}

TEST_CASE("csv parsing rejects malformed input") {
    std::istringstream bad_header("value,label\n1,A\n");
    CHECK_THROWS_AS(read_scored_csv(bad_header, "mem"), InvalidInput);

    std::istringstream bad_score("score,label\nxyz,A\n");
    CHECK_THROWS_AS(read_scored_csv(bad_score, "mem"), InvalidInput);

    std::istringstream empty("");
    CHECK_THROWS_AS(read_scored_csv(empty, "mem"), InvalidInput);

    std::istringstream extra_column("score\n1.0,A\n");
    CHECK_THROWS_AS(read_scored_csv(extra_column, "mem"), InvalidInput);

    CHECK_THROWS_AS(read_scored_csv_file("/nonexistent/file.csv"), InvalidInput);
}

TEST_CASE("csv writing round-trips") {
    ScoredDataset data;
    data.name = "round";
    data.records.push_back({0.125, std::optional<std::string>("A")});
    data.records.push_back({-3.75, std::nullopt});

    std::ostringstream out;
    write_scored_csv(out, data);
    std::istringstream in(out.str());
    const auto back = read_scored_csv(in, "round");
    REQUIRE(back.records.size() == 2);
    CHECK(back.records[0].score == 0.125);
    CHECK(*back.records[0].label == "A");
    CHECK(back.records[1].score == -3.75);
    CHECK_FALSE(back.records[1].label.has_value());
    CHECK(dataset_digest(back) == dataset_digest(data));
}

TEST_CASE("digests track content, not formatting") {
    std::istringstream a("score,label\n0.25,A\n");
    std::istringstream b("score,label\r\n 0.25 , A \r\n"); // same content, messy format
    std::istringstream c("score,label\n0.26,A\n");
    const auto da = dataset_digest(read_scored_csv(a, "x"));
    const auto db = dataset_digest(read_scored_csv(b, "y"));
    const auto dc = dataset_digest(read_scored_csv(c, "z"));
    CHECK(da == db);
    CHECK(da != dc);
    CHECK(da.size() == 16);
}

TEST_CASE("edges JSON round-trips and validates") {
    std::istringstream in("[0.0, 0.5, 1.0]");
    const auto edges = read_edges_json(in);
    CHECK(edges.bin_count() == 2);
    CHECK(edges_to_json(edges).dump() == "[0.0,0.5,1.0]");

    std::istringstream not_array("{\"edges\": []}");
    CHECK_THROWS_AS(read_edges_json(not_array), InvalidInput);
    std::istringstream not_numbers("[0, \"a\"]");
    CHECK_THROWS_AS(read_edges_json(not_numbers), InvalidInput);
    std::istringstream not_sorted("[1.0, 0.0, 2.0]");
    CHECK_THROWS_AS(read_edges_json(not_sorted), InvalidInput);

    const auto from_file = read_edges_json_file(fixture("edges_two_bin.json"));
    CHECK(from_file.bin_count() == 2);
}

TEST_CASE("extended measure serializes with the documented keys") {
    const auto model = test_support::canonical_model();
    const TargetDistribution target{{0.38, 0.62}, std::nullopt};
    const auto m = extend_measure(model, target, 0.3);

    const json j = m;
    for (const char* key : {"p1", "joint_A", "joint_Ac", "posterior1", "cond_A", "cond_Ac"})
        CHECK(j.contains(key));

    const auto back = j.get<ExtendedMeasure>();
    CHECK(back.p1 == m.p1);
    CHECK(back.joint_a == m.joint_a);
    CHECK(back.joint_ac == m.joint_ac);
    CHECK(back.posterior1 == m.posterior1);
    CHECK(back.cond_a == m.cond_a);
    CHECK(back.cond_ac == m.cond_ac);
}

TEST_CASE("calibration result serializes with the documented keys") {
    const auto model = test_support::canonical_model();
    const TargetDistribution target{{0.38, 0.62}, std::nullopt};
    const auto r = recalibrate_posteriors(model, target, 0.5);

    const json j = r;
    CHECK(j.contains("c"));
    CHECK(j.contains("posterior1"));
    CHECK(j.contains("achieved_mean"));
    const auto back = j.get<CalibrationResult>();
    CHECK(back.c == r.c);
    CHECK(back.posterior1 == r.posterior1);
    CHECK(back.achieved_mean == r.achieved_mean);
}

TEST_CASE("simulation specs parse with defaults") {
    const auto spec = read_simulation_spec_file(fixture("scenario_analytic.json"));
    CHECK(spec.scenario.kind == ShiftKind::prior_shift);
    CHECK(spec.scenario.analytic);
    CHECK(spec.scenario.q == 0.3);
    CHECK(spec.pseudo_count == 0.0);
    CHECK(spec.bins == 20); // default, unused for discrete models

    const json round = simulation_spec_to_json(spec);
    const auto again = read_simulation_spec(round);
    CHECK(simulation_spec_to_json(again) == round);

    json bad = round;
    bad["kind"] = "time_travel";
    CHECK_THROWS_AS(read_simulation_spec(bad), InvalidInput);

    json zero_reps = round;
    zero_reps["n_reps"] = 0;
    CHECK_THROWS_AS(read_simulation_spec(zero_reps), InvalidInput);
}

TEST_CASE("monte carlo summaries round-trip through JSON and CSV") {
    MonteCarloSummary s;
    s.total_probability = {0.428, 0.01, 0.128, 500};
    s.total_odds = {0.3, 0.02, 0.015, 497};
    s.debiased = {0.3, 0.025, 0.02, 500};
    s.non_interior_count = 3;
    s.truth = 0.3;
    s.n_reps = 500;

    const json j = s;
    const auto back = j.get<MonteCarloSummary>();
    CHECK(back.total_odds.mean == s.total_odds.mean);
    CHECK(back.total_odds.n_used == s.total_odds.n_used);
    CHECK(back.non_interior_count == 3);
    CHECK(back.truth == 0.3);

    const std::string csv = summary_methods_csv(s);
    CHECK(csv.find("method,mean,sd,mae,n_used\n") == 0);
    CHECK(csv.find("total_probability,") != std::string::npos);
    CHECK(csv.find("total_odds,") != std::string::npos);
    CHECK(csv.find("debiased,") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("estimate reports round-trip losslessly") {
    const auto train = read_scored_csv_file(fixture("canonical_train.csv"));
    const auto test = read_scored_csv_file(fixture("canonical_test.csv"));

    BinningSettings settings;
    settings.explicit_edges = BinEdges({0.0, 0.5, 1.0});
    settings.smoothing = 0.0;
    const auto report = make_estimate_report(train, test, settings);

    CHECK(report.total_odds.p1 == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(report.p_total_probability == doctest::Approx(0.428).epsilon(1e-12));
    REQUIRE(report.p_debiased.has_value());
    CHECK(*report.p_debiased == doctest::Approx(0.3).epsilon(1e-12));

    // serialize, parse back, compare bit-for-bit
    const json j = report;
    const auto back = json::parse(j.dump()).get<EstimateReport>();
    CHECK(back.total_odds.p1 == report.total_odds.p1);
    CHECK(back.total_odds.status == report.total_odds.status);
    CHECK(back.total_odds.residual == report.total_odds.residual);
    CHECK(back.total_odds.diagnostics.mean_lambda ==
          report.total_odds.diagnostics.mean_lambda);
    CHECK(back.total_odds.diagnostics.mean_inv_lambda ==
          report.total_odds.diagnostics.mean_inv_lambda);
    CHECK(back.p_total_probability == report.p_total_probability);
    CHECK(*back.p_debiased == *report.p_debiased);
    REQUIRE(back.bias_bounds.has_value());
    CHECK(back.bias_bounds->overlap == report.bias_bounds->overlap);
    CHECK(back.bias_bounds->i_factor == report.bias_bounds->i_factor);
    CHECK(back.bias_bounds->lower == report.bias_bounds->lower);
    CHECK(back.bias_bounds->upper == report.bias_bounds->upper);
    CHECK(back.bias_bounds->predicted_gap == report.bias_bounds->predicted_gap);
    CHECK(back.p0 == report.p0);
    CHECK(back.overlap == report.overlap);
    CHECK(back.edges == report.edges);
    CHECK(back.train.digest == report.train.digest);
    CHECK(back.test.records == report.test.records);
    CHECK(back.smoothing == report.smoothing);
    CHECK(back.tol == report.tol);
}

TEST_CASE("curve output carries the case label and the root") {
    const auto model = test_support::canonical_model();
    const TargetDistribution target{{0.38, 0.62}, std::nullopt};
    const auto curve = make_curve(model, target, 5);
    REQUIRE(curve.p.size() == 5);
    CHECK(curve.p == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(curve.f.front() == doctest::Approx(1.675).epsilon(1e-12));
    CHECK(curve.f.back() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(curve.root.p1 == doctest::Approx(0.3).epsilon(1e-10));

    const std::string csv = curve_to_csv(curve);
    CHECK(csv.find("# case interior\n") == 0);
    CHECK(csv.find("p,F\n") != std::string::npos);
    const auto root_pos = csv.find("# root ");
    REQUIRE(root_pos != std::string::npos);
    CHECK(std::stod(csv.substr(root_pos + 7)) == doctest::Approx(0.3).epsilon(1e-10));

    CHECK_THROWS_AS(make_curve(model, target, 1), InvalidInput);
}

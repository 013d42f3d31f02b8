#include "oddsquant/io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace oddsquant {

namespace {

std::string trim(std::string s) {
    const auto is_space = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; };
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b]))
        ++b;
    while (e > b && is_space(s[e - 1]))
        --e;
    return s.substr(b, e - b);
}

double parse_score(const std::string& field, std::size_t line_no) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw InvalidInput("line " + std::to_string(line_no) + ": bad score '" + field + "'");
    return value;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot open '" + path + "'");
    return in;
}

nlohmann::json stats_json(const MethodStats& s) {
    return {{"mean", s.mean}, {"sd", s.sd}, {"mae", s.mae}, {"n_used", s.n_used}};
}

MethodStats stats_from_json(const nlohmann::json& j) {
    MethodStats s;
    s.mean = j.value("mean", std::numeric_limits<double>::quiet_NaN());
    s.sd = j.value("sd", std::numeric_limits<double>::quiet_NaN());
    s.mae = j.value("mae", std::numeric_limits<double>::quiet_NaN());
    s.n_used = j.at("n_used").get<std::size_t>();
    return s;
}

void append_csv_double(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

} // namespace

ScoredDataset read_scored_csv(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line))
        throw InvalidInput("'" + name + "': empty file");
    // strip a UTF-8 BOM if present
    if (line.size() >= 3 && std::memcmp(line.data(), "\xEF\xBB\xBF", 3) == 0)
        line.erase(0, 3);

    const std::string header = trim(line);
    bool has_label;
    if (header == "score")
        has_label = false;
    else if (header == "score,label")
        has_label = true;
    else
        throw InvalidInput("'" + name + "': header must be 'score' or 'score,label', got '" +
                           header + "'");

    ScoredDataset out;
    out.name = name;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = trim(line);
        if (row.empty())
            continue;
        const auto comma = row.find(',');
        if (!has_label) {
            if (comma != std::string::npos)
                throw InvalidInput("line " + std::to_string(line_no) +
                                   ": unexpected second column");
            out.records.push_back({parse_score(row, line_no), std::nullopt});
        } else {
            const std::string score_field =
                comma == std::string::npos ? row : trim(row.substr(0, comma));
            const std::string label_field =
                comma == std::string::npos ? std::string() : trim(row.substr(comma + 1));
            ScoredRecord rec;
            rec.score = parse_score(score_field, line_no);
            if (!label_field.empty())
                rec.label = label_field;
            out.records.push_back(std::move(rec));
        }
    }
    return out;
}

ScoredDataset read_scored_csv_file(const std::string& path) {
    auto in = open_or_throw(path);
    return read_scored_csv(in, path);
}

void write_scored_csv(std::ostream& out, const ScoredDataset& data) {
    out << "score,label\n";
    char buf[32];
    for (const auto& r : data.records) {
        std::snprintf(buf, sizeof(buf), "%.17g", r.score);
        out << buf << ',' << (r.label ? *r.label : "") << '\n';
    }
}

BinEdges read_edges_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("bad edges JSON: ") + e.what());
    }
    if (!j.is_array())
        throw InvalidInput("edges JSON must be an array of numbers");
    std::vector<double> edges;
    for (const auto& v : j) {
        if (!v.is_number())
            throw InvalidInput("edges JSON must contain only numbers");
        edges.push_back(v.get<double>());
    }
    return BinEdges(std::move(edges));
}

BinEdges read_edges_json_file(const std::string& path) {
    auto in = open_or_throw(path);
    return read_edges_json(in);
}

nlohmann::json edges_to_json(const BinEdges& edges) {
    return nlohmann::json(edges.edges());
}

std::string dataset_digest(const ScoredDataset& data) {
    std::uint64_t hash = 0xcbf29ce484222325ULL; // FNV-1a offset basis
    const auto mix = [&hash](const void* bytes, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(bytes);
        for (std::size_t i = 0; i < n; ++i) {
            hash ^= p[i];
            hash *= 0x100000001b3ULL;
        }
    };
    for (const auto& r : data.records) {
        mix(&r.score, sizeof(r.score));
        if (r.label)
            mix(r.label->data(), r.label->size());
        const unsigned char sep = 0x1f;
        mix(&sep, 1);
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

void to_json(nlohmann::json& j, const ExtendedMeasure& m) {
    j = nlohmann::json{{"p1", m.p1},          {"joint_A", m.joint_a},
                       {"joint_Ac", m.joint_ac}, {"posterior1", m.posterior1},
                       {"cond_A", m.cond_a},  {"cond_Ac", m.cond_ac}};
}

void from_json(const nlohmann::json& j, ExtendedMeasure& m) {
    j.at("p1").get_to(m.p1);
    j.at("joint_A").get_to(m.joint_a);
    j.at("joint_Ac").get_to(m.joint_ac);
    j.at("posterior1").get_to(m.posterior1);
    j.at("cond_A").get_to(m.cond_a);
    j.at("cond_Ac").get_to(m.cond_ac);
}

void to_json(nlohmann::json& j, const CalibrationResult& r) {
    j = nlohmann::json{{"c", r.c}, {"posterior1", r.posterior1}, {"achieved_mean", r.achieved_mean}};
}

void from_json(const nlohmann::json& j, CalibrationResult& r) {
    j.at("c").get_to(r.c);
    j.at("posterior1").get_to(r.posterior1);
    j.at("achieved_mean").get_to(r.achieved_mean);
}

void to_json(nlohmann::json& j, const BiasBounds& b) {
    j = nlohmann::json{{"overlap", b.overlap},
                       {"i_factor", b.i_factor},
                       {"lower", b.lower},
                       {"upper", b.upper},
                       {"predicted_gap", b.predicted_gap}};
}

void from_json(const nlohmann::json& j, BiasBounds& b) {
    j.at("overlap").get_to(b.overlap);
    j.at("i_factor").get_to(b.i_factor);
    j.at("lower").get_to(b.lower);
    j.at("upper").get_to(b.upper);
    j.at("predicted_gap").get_to(b.predicted_gap);
}

void to_json(nlohmann::json& j, const MonteCarloSummary& s) {
    j = nlohmann::json{{"truth", s.truth},
                       {"n_reps", s.n_reps},
                       {"non_interior_count", s.non_interior_count},
                       {"methods",
                        {{"total_probability", stats_json(s.total_probability)},
                         {"total_odds", stats_json(s.total_odds)},
                         {"debiased", stats_json(s.debiased)}}}};
}

void from_json(const nlohmann::json& j, MonteCarloSummary& s) {
    s.truth = j.value("truth", std::numeric_limits<double>::quiet_NaN());
    s.n_reps = j.at("n_reps").get<std::size_t>();
    s.non_interior_count = j.at("non_interior_count").get<std::size_t>();
    const auto& m = j.at("methods");
    s.total_probability = stats_from_json(m.at("total_probability"));
    s.total_odds = stats_from_json(m.at("total_odds"));
    s.debiased = stats_from_json(m.at("debiased"));
}

std::string summary_methods_csv(const MonteCarloSummary& s) {
    std::string out = "method,mean,sd,mae,n_used\n";
    const auto row = [&out](const char* name, const MethodStats& stats) {
        out += name;
        out += ',';
        append_csv_double(out, stats.mean);
        out += ',';
        append_csv_double(out, stats.sd);
        out += ',';
        append_csv_double(out, stats.mae);
        out += ',';
        out += std::to_string(stats.n_used);
        out += '\n';
    };
    row("total_probability", s.total_probability);
    row("total_odds", s.total_odds);
    row("debiased", s.debiased);
    return out;
}

SimulationSpec read_simulation_spec(const nlohmann::json& j) {
    SimulationSpec spec;
    Scenario& sc = spec.scenario;

    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "prior_shift")
        sc.kind = ShiftKind::prior_shift;
    else if (kind == "odds_preserving_shift")
        sc.kind = ShiftKind::odds_preserving_shift;
    else
        throw InvalidInput("unknown scenario kind '" + kind + "'");

    const auto& sm = j.at("score_model");
    const std::string type = sm.at("type").get<std::string>();
    if (type == "gaussian") {
        GaussianScoreModel g;
        g.mu_a = sm.at("mu_A").get<double>();
        g.mu_ac = sm.at("mu_Ac").get<double>();
        g.sigma = sm.at("sigma").get<double>();
        sc.score_model = g;
    } else if (type == "discrete") {
        DiscreteScoreModel d;
        sm.at("fA").get_to(d.f_a);
        sm.at("fAc").get_to(d.f_ac);
        sc.score_model = d;
    } else {
        throw InvalidInput("unknown score model type '" + type + "'");
    }

    sc.p0 = j.at("p0").get<double>();
    if (sc.kind == ShiftKind::prior_shift) {
        sc.q = j.at("q").get<double>();
    } else {
        TargetDistribution t{j.at("target_weights").get<std::vector<double>>(), std::nullopt};
        sc.target = std::move(t);
    }
    sc.n_train = j.value("n_train", std::size_t{0});
    sc.n_test = j.value("n_test", std::size_t{0});
    sc.n_reps = j.at("n_reps").get<std::size_t>();
    sc.seed = j.value("seed", std::uint64_t{0});
    sc.analytic = j.value("analytic", false);

    spec.bins = j.value("bins", std::size_t{20});
    spec.pseudo_count = j.value("pseudo_count", 0.5);
    sc.validate();
    return spec;
}

SimulationSpec read_simulation_spec_file(const std::string& path) {
    auto in = open_or_throw(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("bad scenario JSON: ") + e.what());
    }
    return read_simulation_spec(j);
}

nlohmann::json simulation_spec_to_json(const SimulationSpec& spec) {
    const Scenario& sc = spec.scenario;
    nlohmann::json j;
    j["kind"] =
        sc.kind == ShiftKind::prior_shift ? "prior_shift" : "odds_preserving_shift";
    if (const auto* g = std::get_if<GaussianScoreModel>(&sc.score_model)) {
        j["score_model"] = {{"type", "gaussian"},
                            {"mu_A", g->mu_a},
                            {"mu_Ac", g->mu_ac},
                            {"sigma", g->sigma}};
    } else {
        const auto& d = std::get<DiscreteScoreModel>(sc.score_model);
        j["score_model"] = {{"type", "discrete"}, {"fA", d.f_a}, {"fAc", d.f_ac}};
    }
    j["p0"] = sc.p0;
    if (sc.kind == ShiftKind::prior_shift)
        j["q"] = sc.q;
    else
        j["target_weights"] = sc.target->weights;
    j["n_train"] = sc.n_train;
    j["n_test"] = sc.n_test;
    j["n_reps"] = sc.n_reps;
    j["seed"] = sc.seed;
    j["analytic"] = sc.analytic;
    j["bins"] = spec.bins;
    j["pseudo_count"] = spec.pseudo_count;
    return j;
}

} // namespace oddsquant

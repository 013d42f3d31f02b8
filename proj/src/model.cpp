#include "oddsquant/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace oddsquant {

namespace {

constexpr double kSumTol = 1e-12;

void check_probability_vector(const std::vector<double>& v, const char* what) {
    double sum = 0.0;
    for (double x : v) {
        if (!std::isfinite(x) || x <= 0.0)
            throw InvalidInput(std::string(what) + " entries must be finite and strictly positive");
        sum += x;
    }
    if (std::abs(sum - 1.0) > kSumTol)
        throw InvalidInput(std::string(what) + " must sum to 1");
}

} // namespace

bool ScoredDataset::fully_labeled() const {
    return std::all_of(records.begin(), records.end(),
                       [](const ScoredRecord& r) { return r.label.has_value(); });
}

std::vector<std::string> ScoredDataset::distinct_labels() const {
    std::set<std::string> tags;
    for (const auto& r : records)
        if (r.label)
            tags.insert(*r.label);
    return {tags.begin(), tags.end()};
}

BinEdges::BinEdges(std::vector<double> edges) : edges_(std::move(edges)) {
    if (edges_.size() < 3)
        throw InvalidInput("need at least 3 edges (2 bins)");
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (!std::isfinite(edges_[i]))
            throw InvalidInput("edges must be finite");
        if (i > 0 && !(edges_[i - 1] < edges_[i]))
            throw InvalidInput("edges must be strictly increasing");
    }
}

std::size_t BinEdges::bin_index(double score) const {
    if (score < edges_.front())
        return 0;
    if (score >= edges_.back())
        return bin_count() - 1;
    auto it = std::upper_bound(edges_.begin(), edges_.end(), score);
    return static_cast<std::size_t>(it - edges_.begin()) - 1;
}

double BinEdges::midpoint(std::size_t bin) const {
    return 0.5 * (edges_[bin] + edges_[bin + 1]);
}

BinEdges uniform_edges(double lo, double hi, std::size_t bins) {
    if (!(lo < hi) || bins < 2)
        throw InvalidInput("uniform_edges requires lo < hi and bins >= 2");
    std::vector<double> e(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i)
        e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    return BinEdges(std::move(e));
}

BinEdges equal_frequency_edges(std::vector<double> scores, std::size_t bins) {
    if (scores.empty())
        throw InvalidInput("no scores to derive edges from");
    if (bins < 2)
        throw InvalidInput("bins must be >= 2");
    std::sort(scores.begin(), scores.end());
    const double lo = scores.front();
    const double hi = scores.back();
    if (!(lo < hi))
        throw InvalidInput("all scores identical; cannot form bins");

    std::vector<double> edges{lo};
    const std::size_t n = scores.size();
    for (std::size_t i = 1; i < bins; ++i) {
        // type-7 quantile at i/bins
        const double h = static_cast<double>(n - 1) * static_cast<double>(i) /
                         static_cast<double>(bins);
        const std::size_t k = static_cast<std::size_t>(h);
        const double frac = h - static_cast<double>(k);
        const double q =
            k + 1 < n ? scores[k] + frac * (scores[k + 1] - scores[k]) : scores[k];
        if (q > edges.back() && q < hi)
            edges.push_back(q);
    }
    edges.push_back(hi);
    if (edges.size() < 3)
        throw InvalidInput("scores too heavily tied to form 2 bins");
    return BinEdges(std::move(edges));
}

void BinnedConditionals::validate() const {
    const std::size_t k = edges.bin_count();
    if (f_a.size() != k || f_ac.size() != k)
        throw InvalidInput("density length does not match the bin count");
    check_probability_vector(f_a, "f_a");
    check_probability_vector(f_ac, "f_ac");
    if (!(p0 > 0.0 && p0 < 1.0))
        throw InvalidInput("p0 must lie strictly inside (0,1)");
    if (label_a == label_ac)
        throw InvalidInput("class labels must differ");
}

void TargetDistribution::validate() const {
    if (weights.empty())
        throw InvalidInput("target weights are empty");
    double sum = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0)
            throw InvalidInput("target weights must be finite and nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kSumTol)
        throw InvalidInput("target weights must sum to 1");
}

BinnedConditionals fit_binned(const ScoredDataset& train, const BinEdges& edges,
                              double pseudo_count,
                              const std::optional<std::string>& class_a_label) {
    if (!(pseudo_count >= 0.0))
        throw InvalidInput("pseudo_count must be >= 0");
    if (train.records.empty())
        throw EmptyDataset("training dataset '" + train.name + "' is empty");
    if (!train.fully_labeled())
        throw InvalidInput("training dataset '" + train.name + "' has unlabeled records");

    const auto tags = train.distinct_labels();
    if (tags.size() == 1)
        throw EmptyClass("only one class present in '" + train.name + "': " + tags[0]);
    if (tags.size() != 2)
        throw InvalidInput("expected exactly two label tags, got " +
                           std::to_string(tags.size()));

    std::string label_a = tags[0]; // lexicographically first by construction
    if (class_a_label) {
        if (*class_a_label != tags[0] && *class_a_label != tags[1])
            throw InvalidInput("class_a_label '" + *class_a_label + "' not present in data");
        label_a = *class_a_label;
    }
    const std::string label_ac = label_a == tags[0] ? tags[1] : tags[0];

    const std::size_t k = edges.bin_count();
    std::vector<double> count_a(k, 0.0), count_ac(k, 0.0);
    double n_a = 0.0, n_ac = 0.0;
    for (const auto& r : train.records) {
        const std::size_t bin = edges.bin_index(r.score);
        if (*r.label == label_a) {
            count_a[bin] += 1.0;
            n_a += 1.0;
        } else {
            count_ac[bin] += 1.0;
            n_ac += 1.0;
        }
    }
    if (n_a == 0.0)
        throw EmptyClass("no records of class '" + label_a + "'");
    if (n_ac == 0.0)
        throw EmptyClass("no records of class '" + label_ac + "'");

    if (pseudo_count == 0.0) {
        for (std::size_t i = 0; i < k; ++i)
            if (count_a[i] == 0.0 || count_ac[i] == 0.0)
                throw ZeroBin("bin " + std::to_string(i) +
                              " has a zero count and no smoothing was requested");
    }

    std::vector<double> f_a(k), f_ac(k);
    const double denom_a = n_a + static_cast<double>(k) * pseudo_count;
    const double denom_ac = n_ac + static_cast<double>(k) * pseudo_count;
    for (std::size_t i = 0; i < k; ++i) {
        f_a[i] = (count_a[i] + pseudo_count) / denom_a;
        f_ac[i] = (count_ac[i] + pseudo_count) / denom_ac;
    }

    BinnedConditionals model{edges, std::move(f_a), std::move(f_ac),
                             n_a / (n_a + n_ac), label_a, label_ac};
    model.validate();
    return model;
}

std::vector<double> lambda_of(const BinnedConditionals& model) {
    std::vector<double> lam(model.bin_count());
    for (std::size_t i = 0; i < lam.size(); ++i)
        lam[i] = model.f_ac[i] / model.f_a[i];
    return lam;
}

std::vector<double> posterior0(const BinnedConditionals& model) {
    std::vector<double> post(model.bin_count());
    for (std::size_t i = 0; i < post.size(); ++i) {
        const double lam = model.f_ac[i] / model.f_a[i];
        post[i] = model.p0 / (model.p0 + (1.0 - model.p0) * lam);
    }
    return post;
}

TargetDistribution target_weights(const ScoredDataset& test, const BinEdges& edges) {
    if (test.records.empty())
        throw EmptyDataset("test dataset '" + test.name + "' is empty");
    std::vector<double> w(edges.bin_count(), 0.0);
    for (const auto& r : test.records)
        w[edges.bin_index(r.score)] += 1.0;
    const double n = static_cast<double>(test.records.size());
    for (double& x : w)
        x /= n;
    return TargetDistribution{std::move(w), test.records.size()};
}

TargetDistribution mixture_target(const BinnedConditionals& model, double q) {
    if (!(q >= 0.0 && q <= 1.0))
        throw InvalidInput("mixture prior q must lie in [0,1]");
    std::vector<double> w(model.bin_count());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = q * model.f_a[i] + (1.0 - q) * model.f_ac[i];
    return TargetDistribution{std::move(w), std::nullopt};
}

} // namespace oddsquant

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "oddsquant/errors.hpp"

namespace oddsquant {

struct ScoredRecord {
    double score = 0.0;
    std::optional<std::string> label;
};

/// A named collection of scored observations. Labels are free-form tags;
/// a dataset used for training must carry exactly two distinct tags.
struct ScoredDataset {
    std::vector<ScoredRecord> records;
    std::string name;

    bool fully_labeled() const;
    /// Distinct label tags present, sorted lexicographically.
    std::vector<std::string> distinct_labels() const;
};

/// Strictly increasing cut points e_0 < ... < e_K defining K >= 2 contiguous
/// bins. Bin k is [e_k, e_{k+1}); the last bin is closed on the right.
/// Scores outside [e_0, e_K] are clamped into the first/last bin.
class BinEdges {
public:
    explicit BinEdges(std::vector<double> edges);

    std::size_t bin_count() const { return edges_.size() - 1; }
    std::size_t bin_index(double score) const;
    const std::vector<double>& edges() const { return edges_; }
    double midpoint(std::size_t bin) const;

private:
    std::vector<double> edges_;
};

/// K equal-width bins on [lo, hi].
BinEdges uniform_edges(double lo, double hi, std::size_t bins);

/// Edges whose interior cut points are score quantiles, so bins hold roughly
/// equal counts. Duplicate cut points (tied scores) are dropped; throws
/// InvalidInput if fewer than two bins survive.
BinEdges equal_frequency_edges(std::vector<double> scores, std::size_t bins);

/// Per-bin class-conditional probabilities f_a, f_ac and the training prior
/// p0. Entries must be strictly positive and each density sums to one.
struct BinnedConditionals {
    BinEdges edges;
    std::vector<double> f_a;
    std::vector<double> f_ac;
    double p0 = 0.0;
    std::string label_a = "A";
    std::string label_ac = "Ac";

    std::size_t bin_count() const { return f_a.size(); }
    void validate() const;
};

/// Empirical (or analytic) probabilities of the bins under the target
/// population.
struct TargetDistribution {
    std::vector<double> weights;
    std::optional<std::size_t> n_effective;

    void validate() const;
};

/// Estimates the class-conditional bin probabilities from a fully labeled
/// dataset. pseudo_count is added to every bin count (per class) before
/// normalizing; with pseudo_count = 0 every bin must contain at least one
/// record of each class. The lexicographically first tag becomes class A
/// unless class_a_label says otherwise.
BinnedConditionals fit_binned(const ScoredDataset& train, const BinEdges& edges,
                              double pseudo_count = 0.5,
                              const std::optional<std::string>& class_a_label = std::nullopt);

/// Per-bin likelihood ratio f_ac[k] / f_a[k]; strictly positive.
std::vector<double> lambda_of(const BinnedConditionals& model);

/// Per-bin conditional probability of class A under the training prior:
/// p0 / (p0 + (1 - p0) * lambda_k).
std::vector<double> posterior0(const BinnedConditionals& model);

/// Fraction of test scores falling in each bin. Labels are ignored.
TargetDistribution target_weights(const ScoredDataset& test, const BinEdges& edges);

/// The bin distribution of a population that mixes the two classes with
/// prior q: q * f_a + (1 - q) * f_ac.
TargetDistribution mixture_target(const BinnedConditionals& model, double q);

} // namespace oddsquant

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "oddsquant/errors.hpp"

namespace oddsquant {

/// Shape classification of F(p) = sum_i w_i / (p + (1-p) * lambda_i) on [0,1].
///
///   interior      — a unique root of F(p) = 1 exists in (0,1)
///   boundary_zero — E[1/lambda] = 1, the unique root is p = 0
///   boundary_one  — only the trivial root p = 1 exists; the training and
///                   target models are incompatible
///   degenerate    — lambda == 1 on the whole support; the partition carries
///                   no class information and no estimate is possible
enum class SolutionCase { interior, boundary_zero, boundary_one, degenerate };

std::string_view to_string(SolutionCase c);
SolutionCase solution_case_from_string(std::string_view s);

/// Positive likelihood-ratio values together with their probabilities under
/// the target distribution. Weights are nonnegative, sum to one, and at
/// least one must be positive.
struct LambdaSample {
    std::vector<double> lambdas;
    std::vector<double> weights;

    void validate() const;
};

struct ExistenceDiagnostics {
    double mean_lambda = 0.0;     // E[lambda] under the sample weights
    double mean_inv_lambda = 0.0; // E[1/lambda]
    bool degenerate = false;      // all supported lambdas equal 1
    SolutionCase status = SolutionCase::interior;
};

struct OddsEstimate {
    double p1 = 0.0;
    SolutionCase status = SolutionCase::interior;
    double residual = 0.0; // |F(p1) - 1|
    int iterations = 0;
    ExistenceDiagnostics diagnostics;
};

/// F(p) = sum_i w_i / (p + (1-p) * lambda_i). Finite on all of [0,1];
/// F(0) = E[1/lambda] and F(1) = 1. Strictly convex unless lambda is
/// constant on the support.
double f_eval(double p, const LambdaSample& s);

/// dF/dp = sum_i w_i * (lambda_i - 1) / (p + (1-p) * lambda_i)^2.
double f_prime(double p, const LambdaSample& s);

/// Classifies the sample. A root in (0,1) exists iff E[lambda] > 1 and
/// E[1/lambda] > 1; E[1/lambda] within tol of 1 is the p = 0 boundary;
/// everything else only admits the trivial root p = 1.
ExistenceDiagnostics diagnose(const LambdaSample& s, double tol = 1e-9);

/// Finds the root of F(p) = 1. Interior cases use sign-change bisection
/// (F - 1 is positive left of the root, negative right of it) followed by a
/// Newton polish; boundary cases return p = 0 or p = 1 with the matching
/// status; degenerate samples return NaN. Throws NoConvergence when the
/// residual cannot be brought below tol within max_iter bisections.
OddsEstimate solve_total_odds(const LambdaSample& s, double tol = 1e-10, int max_iter = 200);

/// Solves sum_i w_i / (p1 + (1-p1) * c * lambda_i) = 1 for the scale c > 0.
/// Requires 0 < p1 < 1 and a non-constant lambda; the solution lies in
/// (1/E[lambda], E[1/lambda]).
double solve_scale(const LambdaSample& s, double p1_target, double tol = 1e-10,
                   int max_iter = 200);

} // namespace oddsquant

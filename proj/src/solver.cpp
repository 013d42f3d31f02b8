#include "oddsquant/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oddsquant {

namespace {

// Bisection brackets are driven to this width before the residual is
// judged, so the returned root stays accurate even when F' is small.
constexpr double kWidthTol = 1e-15;

} // namespace

std::string_view to_string(SolutionCase c) {
    switch (c) {
    case SolutionCase::interior: return "interior";
    case SolutionCase::boundary_zero: return "boundary_zero";
    case SolutionCase::boundary_one: return "boundary_one";
    case SolutionCase::degenerate: return "degenerate";
    }
    return "unknown";
}

SolutionCase solution_case_from_string(std::string_view s) {
    if (s == "interior") return SolutionCase::interior;
    if (s == "boundary_zero") return SolutionCase::boundary_zero;
    if (s == "boundary_one") return SolutionCase::boundary_one;
    if (s == "degenerate") return SolutionCase::degenerate;
    throw InvalidInput("unknown solution case '" + std::string(s) + "'");
}

void LambdaSample::validate() const {
    if (lambdas.size() != weights.size())
        throw DimensionMismatch("lambda/weight length mismatch");
    if (lambdas.empty())
        throw InvalidInput("empty lambda sample");
    double sum = 0.0;
    bool any_support = false;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!std::isfinite(lambdas[i]) || lambdas[i] <= 0.0)
            throw InvalidInput("lambdas must be finite and strictly positive");
        if (!std::isfinite(weights[i]) || weights[i] < 0.0)
            throw InvalidInput("weights must be finite and nonnegative");
        if (weights[i] > 0.0)
            any_support = true;
        sum += weights[i];
    }
    if (!any_support)
        throw InvalidInput("at least one weight must be positive");
    if (std::abs(sum - 1.0) > 1e-12)
        throw InvalidInput("weights must sum to 1");
}

double f_eval(double p, const LambdaSample& s) {
    double acc = 0.0;
    const double one_minus_p = 1.0 - p;
    for (std::size_t i = 0; i < s.lambdas.size(); ++i)
        acc += s.weights[i] / (p + one_minus_p * s.lambdas[i]);
    return acc;
}

double f_prime(double p, const LambdaSample& s) {
    double acc = 0.0;
    const double one_minus_p = 1.0 - p;
    for (std::size_t i = 0; i < s.lambdas.size(); ++i) {
        const double denom = p + one_minus_p * s.lambdas[i];
        acc += s.weights[i] * (s.lambdas[i] - 1.0) / (denom * denom);
    }
    return acc;
}

ExistenceDiagnostics diagnose(const LambdaSample& s, double tol) {
    ExistenceDiagnostics d;
    bool all_unit = true;
    for (std::size_t i = 0; i < s.lambdas.size(); ++i) {
        d.mean_lambda += s.weights[i] * s.lambdas[i];
        d.mean_inv_lambda += s.weights[i] / s.lambdas[i];
        if (s.weights[i] > 0.0 && std::abs(s.lambdas[i] - 1.0) > tol)
            all_unit = false;
    }
    d.degenerate = all_unit;

    if (d.degenerate)
        d.status = SolutionCase::degenerate;
    else if (std::abs(d.mean_inv_lambda - 1.0) <= tol)
        d.status = SolutionCase::boundary_zero;
    else if (d.mean_lambda > 1.0 && d.mean_inv_lambda > 1.0)
        d.status = SolutionCase::interior;
    else
        // Only p = 1 solves the equation, whether the slope condition
        // E[lambda] > 1 or the level condition E[1/lambda] > 1 failed.
        d.status = SolutionCase::boundary_one;
    return d;
}

OddsEstimate solve_total_odds(const LambdaSample& s, double tol, int max_iter) {
    s.validate();
    if (!(tol > 0.0))
        throw InvalidInput("tol must be positive");
    if (max_iter < 1)
        throw InvalidInput("max_iter must be >= 1");

    OddsEstimate est;
    est.diagnostics = diagnose(s);
    est.status = est.diagnostics.status;

    switch (est.status) {
    case SolutionCase::degenerate:
        est.p1 = std::numeric_limits<double>::quiet_NaN();
        est.residual = std::numeric_limits<double>::quiet_NaN();
        return est;
    case SolutionCase::boundary_zero:
        est.p1 = 0.0;
        est.residual = std::abs(f_eval(0.0, s) - 1.0);
        return est;
    case SolutionCase::boundary_one:
        est.p1 = 1.0;
        est.residual = std::abs(f_eval(1.0, s) - 1.0);
        return est;
    case SolutionCase::interior:
        break;
    }

    // F - 1 is positive on [0, root) and negative on (root, 1); keep that
    // sign invariant on [a, b] while halving.
    double a = 0.0, b = 1.0;
    int it = 0;
    while (it < max_iter && b - a > kWidthTol) {
        const double m = 0.5 * (a + b);
        if (f_eval(m, s) - 1.0 > 0.0)
            a = m;
        else
            b = m;
        ++it;
    }

    double p = 0.5 * (a + b);
    double residual = std::abs(f_eval(p, s) - 1.0);
    // Newton polish, counted against the same iteration budget.
    for (int k = 0; k < 4 && it < max_iter; ++k, ++it) {
        const double slope = f_prime(p, s);
        if (slope == 0.0)
            break;
        const double candidate = p - (f_eval(p, s) - 1.0) / slope;
        if (!(candidate > 0.0 && candidate < 1.0))
            break;
        const double cand_residual = std::abs(f_eval(candidate, s) - 1.0);
        if (cand_residual < residual) {
            p = candidate;
            residual = cand_residual;
        } else {
            break;
        }
    }

    if (residual > tol)
        throw NoConvergence("total-odds residual " + std::to_string(residual) +
                            " above tol after " + std::to_string(it) + " iterations");

    est.p1 = p;
    est.residual = residual;
    est.iterations = it;
    return est;
}

double solve_scale(const LambdaSample& s, double p1_target, double tol, int max_iter) {
    s.validate();
    if (!(p1_target > 0.0 && p1_target < 1.0))
        throw InvalidInput("p1_target must lie strictly inside (0,1)");
    if (!(tol > 0.0))
        throw InvalidInput("tol must be positive");

    double lam_min = std::numeric_limits<double>::infinity();
    double lam_max = 0.0;
    double mean_lambda = 0.0, mean_inv_lambda = 0.0;
    for (std::size_t i = 0; i < s.lambdas.size(); ++i) {
        mean_lambda += s.weights[i] * s.lambdas[i];
        mean_inv_lambda += s.weights[i] / s.lambdas[i];
        if (s.weights[i] > 0.0) {
            lam_min = std::min(lam_min, s.lambdas[i]);
            lam_max = std::max(lam_max, s.lambdas[i]);
        }
    }
    if (lam_max - lam_min <= 1e-12 * lam_max)
        throw DegenerateLambda("lambda is constant on the target support");

    const auto g = [&](double c) {
        double acc = 0.0;
        const double one_minus_p = 1.0 - p1_target;
        for (std::size_t i = 0; i < s.lambdas.size(); ++i)
            acc += s.weights[i] / (p1_target + one_minus_p * c * s.lambdas[i]);
        return acc - 1.0;
    };
    const auto g_prime = [&](double c) {
        double acc = 0.0;
        const double one_minus_p = 1.0 - p1_target;
        for (std::size_t i = 0; i < s.lambdas.size(); ++i) {
            const double denom = p1_target + one_minus_p * c * s.lambdas[i];
            acc -= s.weights[i] * one_minus_p * s.lambdas[i] / (denom * denom);
        }
        return acc;
    };

    // The solution lies in (1/E[lambda], E[1/lambda]); widen a hair so the
    // bracket survives rounding. g is strictly decreasing in c.
    double lo = (1.0 / mean_lambda) * (1.0 - 1e-9);
    double hi = mean_inv_lambda * (1.0 + 1e-9);
    int it = 0;
    while (it < max_iter && hi - lo > 1e-14 * hi) {
        const double m = 0.5 * (lo + hi);
        if (g(m) > 0.0)
            lo = m;
        else
            hi = m;
        ++it;
    }

    double c = 0.5 * (lo + hi);
    double residual = std::abs(g(c));
    for (int k = 0; k < 4; ++k) {
        const double slope = g_prime(c);
        if (slope == 0.0)
            break;
        const double candidate = c - g(c) / slope;
        if (!(candidate > 0.0))
            break;
        const double cand_residual = std::abs(g(candidate));
        if (cand_residual < residual) {
            c = candidate;
            residual = cand_residual;
        } else {
            break;
        }
    }

    if (residual > tol)
        throw NoConvergence("scale residual " + std::to_string(residual) +
                            " above tol after " + std::to_string(it) + " iterations");
    return c;
}

} // namespace oddsquant

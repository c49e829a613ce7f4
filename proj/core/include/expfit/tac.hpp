#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expfit/dataset.hpp"

namespace expfit {

/// Coordinatewise product of equal-length vectors.
std::vector<double> hadamard(std::span<const double> a, std::span<const double> b);

/// One nonlinear search axis: closed interval [lo, hi] sampled at `points`
/// equally spaced nodes per refinement level.
struct GridAxis {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    int points = 10;
};

struct GridSpec {
    std::vector<GridAxis> axes;
};

/// Model that is linear given its nonlinear parameters: for each nonlinear
/// parameter vector theta, `basis` fills one design column per linear
/// coefficient (each of length y.size()) from the regressor vectors.
struct SeparablePattern {
    std::vector<std::string> nonlinear_names;
    std::vector<std::string> linear_names;
    std::function<void(std::span<const double> theta,
                       const std::vector<std::vector<double>>& regressors,
                       std::vector<std::vector<double>>& columns)>
        basis;
};

struct SeparableOptions {
    double shrink = 4.0;   ///< interval contraction factor per level
    double tol = 1e-7;     ///< stop when every axis width < tol*(1+|center|)
    int max_levels = 64;
};

struct SeparableFit {
    std::vector<double> nonlinear; ///< winning theta, one per axis
    std::vector<double> linear;    ///< least-squares coefficients at theta
    double rss = 0.0;
    double mse = 0.0;
    int levels = 0;
    long nodes_evaluated = 0;
    /// Grid nodes discarded for a rank-deficient or non-finite design.
    long rank_deficient_nodes = 0;
    std::vector<double> rss_trace; ///< winner RSS per level, non-increasing
};

/// Alternating grid search for separable least squares: every level
/// evaluates all grid nodes (exact linear least squares per node via
/// orthogonal factorization), keeps the minimum-RSS node, then shrinks
/// each axis interval about the winner (clamped to the original box) and
/// re-grids with the winner retained, so the RSS trace never increases.
/// Rank-deficient or non-finite designs cannot win; if every node is
/// discarded the fit throws NumericError.
SeparableFit fit_separable(const SeparablePattern& pattern,
                           const std::vector<std::vector<double>>& regressors,
                           std::span<const double> y, const GridSpec& grid,
                           const SeparableOptions& options = {});

// --- demand-curve pattern ------------------------------------------------

/// Exponentiated-demand parameters: log10 Q(C) = log10(Q0) + k*(e^{-alpha*Q0*C} - 1).
struct DemandParams {
    double Q0 = 0.0;
    double k = 0.0;
    double alpha = 0.0;
};

/// Internal shape of the same curve on the log scale: y(C) = a*e^{dC} + b.
struct DemandInternal {
    double a = 0.0;
    double d = 0.0;
    double b = 0.0;
};

/// (Q0, k, alpha) -> (a, d, b): a = k, d = -alpha*Q0, b = log10(Q0) - k.
/// alpha = 0 maps to d = 0, which is degenerate for fitting (the two basis
/// columns coincide).
DemandInternal demand_to_internal(const DemandParams& p);

/// Inverse map: k = a, Q0 = 10^{a+b}, alpha = -d/Q0.
DemandParams demand_from_internal(const DemandInternal& m);

/// Consumption protocol: prices C_i = i*c_step for i = 0..n-1, responses
/// Q_i = 10^{y_i} with y_i the log-scale curve value plus Gaussian noise
/// of the given standard deviation.
Dataset simulate_demand(const DemandParams& p, std::size_t n, double c_step,
                        double noise_sd, std::uint64_t seed);

struct DemandFit {
    DemandParams params;
    DemandInternal internal;
    double rss = 0.0; ///< residual sum of squares on the log10 scale
    double mse = 0.0;
    SeparableFit details;
};

/// Fit the demand curve to (C, Q) rows, Q > 0 required; the search runs on
/// y = log10(Q) with the single nonlinear parameter d (default grid
/// d in [-2, -1e-4], 10 points).
DemandFit fit_demand(const Dataset& data, const std::optional<GridSpec>& grid = {},
                     const SeparableOptions& options = {});

// --- exponential autoregressive pattern ----------------------------------

/// Second-order amplitude-dependent autoregression:
///   x_t = c0 + (c1 + pi1*e^{-gamma*(x_{t-2}-z1)^2})*x_{t-1}
///            + (c2 + pi2*e^{-gamma*(x_{t-2}-z2)^2})*x_{t-2} + eps_t.
struct ExpArParams {
    double c0 = 0.0, c1 = 0.0, pi1 = 0.0;
    double c2 = 0.0, pi2 = 0.0;
    double gamma = 1.0, z1 = 0.0, z2 = 0.0;
};

/// Generate `count` values of the series from seeds (x_1, x_2) = (x1, x2);
/// the first two emitted values are the seeds themselves. noise_sd = 0
/// gives the deterministic skeleton.
std::vector<double> expar_generate(const ExpArParams& p, double x1, double x2,
                                   std::size_t count, double noise_sd,
                                   std::uint64_t seed);

struct ExpArFit {
    ExpArParams params;
    double rss = 0.0;
    double mse = 0.0; ///< rss / number of fitted rows
    SeparableFit details;
};

/// Fit the pattern to a plain series (length >= 8): rows t = 3..n regress
/// on lags 1 and 2; nonlinear (gamma, z1, z2) by grid search (defaults
/// gamma in [0.5, 2], z1 in [1, 4], z2 in [2, 5], 10 points each), linear
/// (c0, c1, pi1, c2, pi2) by least squares.
ExpArFit expar_fit(std::span<const double> series,
                   const std::optional<GridSpec>& grid = {},
                   const SeparableOptions& options = {});

} // namespace expfit

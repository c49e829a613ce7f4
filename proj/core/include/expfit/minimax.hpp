#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "expfit/dataset.hpp"
#include "expfit/model.hpp"

namespace expfit {

/// Proof object for max-norm optimality: indices (strictly increasing,
/// >= 3 of them, 0-based, in t-order) at which the residual T_i - f(t_i)
/// alternates in sign starting with `delta`, each within tolerance
/// 1e-9*(1+error) of +-error, where error = max_i |T_i - f(t_i)|.
struct AlternationCertificate {
    std::vector<std::size_t> indices;
    int delta = +1;
    double error = 0.0;
};

/// Best offset for a fixed shape: minimizes max_i |T_i - (a*e^{k t_i} + b)|
/// over b alone. Returns (b, error) = (midrange of v, half-spread of v)
/// for v_i = T_i - a*e^{k t_i}. a = 0 and k = 0 are accepted (degenerate
/// shapes); the usual |k*t| overflow guard applies.
std::pair<double, double> best_b(double a, double k, const Dataset& data);

/// Best max-norm line for the data (n >= 3). Exhaustive three-point
/// exchange for n <= 64, rotating-support reduction on the convex hulls
/// for larger n; both produce the exact optimum.
std::pair<ExponentialModel, AlternationCertificate> fit_line_minimax(const Dataset& data);

/// Best max-norm model a*e^{kt}+b for a fixed rate k != 0 (n >= 3).
/// Solved by the substitution u = e^{kt}, which maps the problem to a
/// line fit on (u, T). Certificate indices refer to the original t-order.
std::pair<ExponentialModel, AlternationCertificate> fit_fixed_k(double k, const Dataset& data);

/// Uniform error band: upper/lower = model values +- r on the data grid,
/// where r = max_i |T_i - f(t_i)|. Every sample lies inside the band and
/// the extremal ones lie on its boundary.
struct Band {
    std::vector<double> upper;
    std::vector<double> lower;
};
Band band(const ExponentialModel& model, const Dataset& data);

/// Band around an explicit value vector (used for limit-case reports).
Band band(std::span<const double> values, const Dataset& data);

namespace detail {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double error = 0.0;
};

// Exact minimax line on (x, y) with x strictly increasing, n >= 3.
// Scans all index triples; the de la Vallee Poussin bound makes the
// levelled triple of maximal level the global optimum.
LineFit minimax_line_exhaustive(std::span<const double> x, std::span<const double> y);

// Same optimum via the minimum-vertical-width direction between the upper
// and lower convex hulls; O(n log n), used for n > 64.
LineFit minimax_line_hull(std::span<const double> x, std::span<const double> y);

LineFit minimax_line(std::span<const double> x, std::span<const double> y);

// residuals[i] = y[i] - f(x[i]) and its max magnitude.
std::vector<double> residuals(const ExponentialModel& model, const Dataset& data);
double max_abs(std::span<const double> v);

// Extremal-residual structure at tolerance 1e-9*(1+error): one entry per
// maximal run of equal-signed extremal indices, carrying the first index
// of the run and its sign. The maximal-length alternating certificate is
// exactly the sequence of run heads (lexicographically smallest such set).
struct SignBlock {
    std::size_t first = 0;
    std::size_t last = 0;
    int sign = +1;
};
std::vector<SignBlock> extremal_blocks(std::span<const double> res, double error);

// Certificate from residuals; min_indices pads the degenerate error ~ 0
// case (everything extremal) with the leading indices.
AlternationCertificate make_certificate(std::span<const double> res, double error,
                                        std::size_t min_indices = 3);

} // namespace detail

} // namespace expfit

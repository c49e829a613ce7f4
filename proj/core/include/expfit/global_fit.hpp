#pragma once

#include <optional>

#include "expfit/dataset.hpp"
#include "expfit/report.hpp"

namespace expfit {

/// Optional clamp on the rate search of fit().
struct FitOptions {
    std::optional<double> k_min; ///< lower bound on searched rates
    std::optional<double> k_max; ///< upper bound on searched rates
    double tol = 1e-10;          ///< relative bracket width target
};

/// Uniform error of the best model at a fixed rate: fit_fixed_k(k).error.
/// k == 0 is routed to the best line.
double error_at(double k, const Dataset& data);

/// Full best-uniform-approximation pipeline (n >= 3): classify, solve the
/// closed-form taxonomies directly, and for interior data minimize the
/// fixed-rate error over k (geometric bracketing scan, then golden-section
/// refinement using function values only) followed by an exact polish on
/// the active extremal quartet. The certificate always carries at least
/// 3 alternating indices, and 4 for interior fits with n >= 4.
FitReport fit(const Dataset& data, const FitOptions& options = {});

} // namespace expfit

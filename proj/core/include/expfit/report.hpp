#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "expfit/classify.hpp"
#include "expfit/minimax.hpp"
#include "expfit/model.hpp"

namespace expfit {

/// Result of a max-norm fit. `model` holds the optimal model for the
/// attained taxonomies and the limit vector for the two limit cases (the
/// infimum of the error, not attained by any finite model).
struct FitReport {
    Taxonomy taxonomy;
    std::variant<ExponentialModel, LimitVector> model;
    double error = 0.0;
    AlternationCertificate certificate;

    /// Active extremal quartet, when one was identified (interior fits).
    std::optional<std::array<std::size_t, 4>> quartet;

    /// Diagnostics of the rate search (zero/NaN for closed-form cases).
    long evals = 0;           ///< fixed-rate error evaluations performed
    double k_bracket = 0.0;   ///< final bracket width of the rate search
    double k_search = std::numeric_limits<double>::quiet_NaN();
    double k_quartet = std::numeric_limits<double>::quiet_NaN();
    bool bracket_warning = false; ///< search fell back to a closed form
    std::vector<std::pair<double, double>> trace; ///< sampled (k, error), ascending k

    bool has_model() const { return std::holds_alternative<ExponentialModel>(model); }
    const ExponentialModel& model_value() const { return std::get<ExponentialModel>(model); }
    const LimitVector& limit_value() const { return std::get<LimitVector>(model); }
};

} // namespace expfit

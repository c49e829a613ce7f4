#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "expfit/dataset.hpp"
#include "expfit/minimax.hpp"

namespace expfit {

/// Four-way solvability taxonomy of the uniform approximation problem by
/// a*e^{kt}+b, plus the degenerate constant case.
enum class Tag {
    InteriorExponential, ///< a best exponential exists at an interior rate
    ConstantBest,        ///< a constant is best; the error cannot be beaten at any rate
    LimitNegInf,         ///< error decreases toward the k -> -inf limit; no minimizer
    LimitPosInf,         ///< error decreases toward the k -> +inf limit; no minimizer
    LineBest,            ///< the best line beats every exponential; approached as k -> 0
};

const char* to_string(Tag tag);

/// Frame change under which the canonical analysis (a > 0, k < 0) applies.
/// Applied as: negate_T first if negate_T is set, then reflect_t if set
/// (the two commute).
struct Orientation {
    bool reflect_t = false;
    bool negate_T = false;
};

struct Taxonomy {
    Tag tag = Tag::ConstantBest;
    Orientation orientation;
    /// Indices (0-based, original t-order) witnessing the tag:
    /// InteriorExponential / LimitNegInf / LimitPosInf: the extremal triple
    /// (i, j, m) of the oriented best line, mapped back; ConstantBest: the
    /// max-min-max (or min-max-min) sandwich (i1, i2, i3); LineBest: four
    /// alternating extremal indices of the best line.
    std::vector<std::size_t> witness;
};

/// Decide the taxonomy (n >= 3). Deterministic: exact index conditions are
/// tested before tolerance-based ones, and orientations are scanned in the
/// fixed order identity, reflect_t, negate_T, both.
Taxonomy classify(const Dataset& data);

/// Pointwise limit of the best fixed-rate models as k -> -inf, together
/// with its uniform error. Requires the canonical orientation T_0 = max(T)
/// (else InputError). With M = max(T_1..T_{n-1}), m = min(T_1..T_{n-1}):
/// values = (T_0 - (M-m)/2, (M+m)/2, ..., (M+m)/2), error = (M-m)/2.
struct LimitVector {
    std::vector<double> values;
    double error = 0.0;
};
LimitVector limit_vector_neg_inf(const Dataset& data);

/// Abscissa-gap ratio (e^{k t1} - e^{k t2}) / (e^{k t2} - e^{k t3}) for
/// t1 < t2 < t3. Strictly decreasing in k from +inf (k -> -inf) to 0
/// (k -> +inf); k == 0 returns the limit ratio (t1-t2)/(t2-t3).
double psi(double k, double t1, double t2, double t3);

namespace detail {

// Sandwich test for ConstantBest: the global max is attained at two
// indices with a global min strictly between them, or the mirror image.
// Returns the witness (i1, i2, i3) when present.
std::optional<std::vector<std::size_t>> constant_sandwich(std::span<const double> T);

// Index condition driving the k -> -inf limit case, in the given frame:
// T_0 = max(T) and the last index attaining max(T_1..T_{n-1}) lies after
// the first index attaining min(T_1..T_{n-1}).
bool neg_inf_condition(std::span<const double> T);

// Admissibility in the given frame: best-line slope < 0 and the extremal
// residual runs form exactly the pattern (+, -, +). Returns the witness
// triple (last of the first run, first of the middle run, first of the
// last run) together with the line fit when admissible.
struct Admissible {
    std::vector<std::size_t> witness;
    LineFit line;
};
std::optional<Admissible> admissible(const Dataset& data);

Dataset oriented(const Dataset& data, const Orientation& o);

// Map an index in the oriented frame back to the original frame.
std::size_t unorient_index(std::size_t i, std::size_t n, const Orientation& o);

} // namespace detail

} // namespace expfit

#include "expfit/classify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "expfit/errors.hpp"

namespace expfit {

const char* to_string(Tag tag) {
    switch (tag) {
    case Tag::InteriorExponential: return "interior_exponential";
    case Tag::ConstantBest: return "constant_best";
    case Tag::LimitNegInf: return "limit_neg_inf";
    case Tag::LimitPosInf: return "limit_pos_inf";
    case Tag::LineBest: return "line_best";
    }
    return "unknown";
}

namespace detail {

std::optional<std::vector<std::size_t>> constant_sandwich(std::span<const double> T) {
    const std::size_t n = T.size();
    const double M = *std::max_element(T.begin(), T.end());
    const double m = *std::min_element(T.begin(), T.end());
    if (M == m) return std::vector<std::size_t>{0, 1, 2};

    const auto find_pattern = [&](double outer, double inner)
        -> std::optional<std::vector<std::size_t>> {
        std::size_t first = n, last = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (T[i] == outer) {
                if (first == n) first = i;
                last = i;
            }
        }
        if (first == n || first == last) return std::nullopt;
        for (std::size_t i = first + 1; i < last; ++i)
            if (T[i] == inner) return std::vector<std::size_t>{first, i, last};
        return std::nullopt;
    };

    if (auto w = find_pattern(M, m)) return w; // max - min - max
    return find_pattern(m, M);                 // min - max - min
}

bool neg_inf_condition(std::span<const double> T) {
    const std::size_t n = T.size();
    if (n < 3) return false;
    for (std::size_t i = 1; i < n; ++i)
        if (T[i] > T[0]) return false;

    double M2 = -std::numeric_limits<double>::infinity();
    double m2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < n; ++i) {
        M2 = std::max(M2, T[i]);
        m2 = std::min(m2, T[i]);
    }
    std::size_t last_max = 0, first_min = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (T[i] == M2) last_max = i;
        if (T[i] == m2 && first_min == 0) first_min = i;
    }
    return last_max > first_min;
}

std::optional<Admissible> admissible(const Dataset& data) {
    const auto lf = minimax_line(data.t(), data.T());
    if (!(lf.slope < 0.0) || lf.error <= 0.0) return std::nullopt;

    std::vector<double> res(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        res[i] = data.T()[i] - (lf.slope * data.t()[i] + lf.intercept);
    const auto blocks = extremal_blocks(res, lf.error);
    if (blocks.size() != 3 || blocks[0].sign != +1) return std::nullopt;

    Admissible out;
    out.witness = {blocks[0].last, blocks[1].first, blocks[2].first};
    out.line = lf;
    return out;
}

Dataset oriented(const Dataset& data, const Orientation& o) {
    Dataset d = data;
    if (o.negate_T) d = d.negate_T();
    if (o.reflect_t) d = d.reflect_t();
    return d;
}

std::size_t unorient_index(std::size_t i, std::size_t n, const Orientation& o) {
    return o.reflect_t ? n - 1 - i : i;
}

namespace {

constexpr std::array<Orientation, 4> kOrientations{{
    {false, false}, {true, false}, {false, true}, {true, true}}};

std::vector<std::size_t> unorient_witness(std::vector<std::size_t> w, std::size_t n,
                                          const Orientation& o) {
    for (auto& i : w) i = unorient_index(i, n, o);
    std::sort(w.begin(), w.end());
    return w;
}

std::vector<std::size_t> spade_witness(std::span<const double> T) {
    double M2 = -std::numeric_limits<double>::infinity();
    double m2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < T.size(); ++i) {
        M2 = std::max(M2, T[i]);
        m2 = std::min(m2, T[i]);
    }
    std::size_t last_max = 0, first_min = 0;
    for (std::size_t i = 1; i < T.size(); ++i) {
        if (T[i] == M2) last_max = i;
        if (T[i] == m2 && first_min == 0) first_min = i;
    }
    return {0, first_min, last_max};
}

} // namespace

} // namespace detail

Taxonomy classify(const Dataset& data) {
    using namespace detail;
    if (data.size() < 3)
        throw InputError("classify: at least 3 points required");
    const std::size_t n = data.size();

    // Exact index conditions first: a repeated extreme sandwiching the
    // opposite extreme pins the constant case regardless of tolerances.
    if (auto w = constant_sandwich(data.T()))
        return {Tag::ConstantBest, {}, *w};

    // Exactly collinear data: the line attains error ~ 0, which no true
    // exponential can reach.
    const auto lf0 = minimax_line(data.t(), data.T());
    double scale = 0.0;
    for (double v : data.T()) scale = std::max(scale, std::abs(v));
    if (lf0.error <= 1e-13 * (1.0 + scale)) {
        std::vector<std::size_t> w;
        for (std::size_t i = 0; i < std::min<std::size_t>(4, n); ++i) w.push_back(i);
        return {Tag::LineBest, {}, w};
    }

    // Orientation scan: in the first frame where the best line is
    // admissible, the limit index condition decides between an interior
    // optimum and a one-sided limit.
    for (const auto& o : kOrientations) {
        const Dataset d = oriented(data, o);
        if (auto adm = admissible(d)) {
            if (neg_inf_condition(d.T())) {
                const Tag tag = o.reflect_t ? Tag::LimitPosInf : Tag::LimitNegInf;
                return {tag, o, unorient_witness(spade_witness(d.T()), n, o)};
            }
            return {Tag::InteriorExponential, o, unorient_witness(adm->witness, n, o)};
        }
    }

    // The limit index condition may hold without admissibility.
    for (const auto& o : kOrientations) {
        const Dataset d = oriented(data, o);
        if (neg_inf_condition(d.T())) {
            const Tag tag = o.reflect_t ? Tag::LimitPosInf : Tag::LimitNegInf;
            return {tag, o, unorient_witness(spade_witness(d.T()), n, o)};
        }
    }

    // Four alternating extremal residuals of the best line: no exponential
    // can match the line's error.
    {
        std::vector<double> res(n);
        for (std::size_t i = 0; i < n; ++i)
            res[i] = data.T()[i] - (lf0.slope * data.t()[i] + lf0.intercept);
        const auto blocks = extremal_blocks(res, lf0.error);
        if (blocks.size() >= 4) {
            std::vector<std::size_t> w;
            for (std::size_t b = 0; b < 4; ++b) w.push_back(blocks[b].first);
            return {Tag::LineBest, {}, w};
        }
    }

    // Unreachable for exact-taxonomy data; kept for totality. Compare the
    // closed-form errors and return the smallest deterministically.
    std::vector<std::size_t> lead{0, 1, 2};
    double best_err = std::numeric_limits<double>::infinity();
    Taxonomy best{Tag::LineBest, {}, lead};
    const double M = *std::max_element(data.T().begin(), data.T().end());
    const double m = *std::min_element(data.T().begin(), data.T().end());
    if (0.5 * (M - m) < best_err) {
        best_err = 0.5 * (M - m);
        best = {Tag::ConstantBest, {}, lead};
    }
    if (lf0.error < best_err) {
        best_err = lf0.error;
        best = {Tag::LineBest, {}, lead};
    }
    for (const auto& o : kOrientations) {
        const Dataset d = oriented(data, o);
        bool is_max = true;
        for (std::size_t i = 1; i < n; ++i)
            if (d.T()[i] > d.T()[0]) { is_max = false; break; }
        if (!is_max) continue;
        const auto lv = limit_vector_neg_inf(d);
        if (lv.error < best_err) {
            best_err = lv.error;
            best = {o.reflect_t ? Tag::LimitPosInf : Tag::LimitNegInf, o, lead};
        }
    }
    return best;
}

LimitVector limit_vector_neg_inf(const Dataset& data) {
    const std::size_t n = data.size();
    if (n < 3)
        throw InputError("limit_vector_neg_inf: at least 3 points required");
    for (std::size_t i = 1; i < n; ++i)
        if (data.T()[i] > data.T()[0])
            throw InputError("limit_vector_neg_inf: requires the canonical orientation T_0 = max(T)");

    double M = -std::numeric_limits<double>::infinity();
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < n; ++i) {
        M = std::max(M, data.T()[i]);
        m = std::min(m, data.T()[i]);
    }
    LimitVector lv;
    lv.error = 0.5 * (M - m);
    lv.values.assign(n, 0.5 * (M + m));
    lv.values[0] = data.T()[0] - lv.error;
    return lv;
}

double psi(double k, double t1, double t2, double t3) {
    if (!(t1 < t2 && t2 < t3))
        throw InputError("psi: requires t1 < t2 < t3");
    if (k == 0.0) return (t1 - t2) / (t2 - t3); // limit ratio as k -> 0
    return std::expm1(k * (t1 - t2)) / (-std::expm1(k * (t3 - t2)));
}

} // namespace expfit

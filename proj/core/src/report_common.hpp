// Internal report builders shared by the quartet and global fitters.
#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "expfit/classify.hpp"
#include "expfit/minimax.hpp"
#include "expfit/report.hpp"

namespace expfit::internal {

inline FitReport constant_report(const Dataset& data, std::vector<std::size_t> witness) {
    const double M = *std::max_element(data.T().begin(), data.T().end());
    const double m = *std::min_element(data.T().begin(), data.T().end());
    FitReport rep;
    rep.taxonomy = {Tag::ConstantBest, {}, std::move(witness)};
    const auto model = ExponentialModel::constant(0.5 * (M + m));
    rep.model = model;
    const auto res = detail::residuals(model, data);
    rep.error = detail::max_abs(res);
    rep.certificate = detail::make_certificate(res, rep.error);
    return rep;
}

inline FitReport line_report(const Dataset& data, std::vector<std::size_t> witness = {}) {
    auto [model, cert] = fit_line_minimax(data);
    FitReport rep;
    rep.taxonomy = {Tag::LineBest, {}, witness.empty() ? cert.indices : std::move(witness)};
    rep.model = model;
    rep.error = cert.error;
    rep.certificate = std::move(cert);
    return rep;
}

// Limit report for the orientation o under which the k -> -inf index
// condition holds on the oriented data.
inline FitReport limit_report(const Dataset& data, const Orientation& o) {
    const Dataset d = detail::oriented(data, o);
    LimitVector lv = limit_vector_neg_inf(d);
    if (o.reflect_t) std::reverse(lv.values.begin(), lv.values.end());
    if (o.negate_T)
        for (auto& v : lv.values) v = -v;

    const std::size_t n = data.size();
    double M2 = -std::numeric_limits<double>::infinity();
    double m2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < n; ++i) {
        M2 = std::max(M2, d.T()[i]);
        m2 = std::min(m2, d.T()[i]);
    }
    std::size_t last_max = 0, first_min = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (d.T()[i] == M2) last_max = i;
        if (d.T()[i] == m2 && first_min == 0) first_min = i;
    }
    std::vector<std::size_t> witness{0, first_min, last_max};
    for (auto& i : witness) i = detail::unorient_index(i, n, o);
    std::sort(witness.begin(), witness.end());

    FitReport rep;
    rep.taxonomy = {o.reflect_t ? Tag::LimitPosInf : Tag::LimitNegInf, o, std::move(witness)};
    std::vector<double> res(n);
    for (std::size_t i = 0; i < n; ++i) res[i] = data.T()[i] - lv.values[i];
    rep.error = detail::max_abs(res);
    rep.certificate = detail::make_certificate(res, rep.error);
    rep.model = std::move(lv);
    return rep;
}

inline ExponentialModel unorient_model(ExponentialModel m, const Orientation& o) {
    if (o.reflect_t) m.k = -m.k;
    if (o.negate_T) {
        m.a = -m.a;
        m.b = -m.b;
    }
    return m;
}

} // namespace expfit::internal

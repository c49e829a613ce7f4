#include "expfit/global_fit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "expfit/errors.hpp"
#include "expfit/quartet.hpp"
#include "report_common.hpp"

namespace expfit {

double error_at(double k, const Dataset& data) {
    if (k == 0.0) {
        const auto lf = detail::minimax_line(data.t(), data.T());
        return lf.error;
    }
    return fit_fixed_k(k, data).second.error;
}

namespace {

// Memoizing fixed-rate error evaluator over the oriented data; the search
// works on k < 0 only.
class ErrorCache {
public:
    explicit ErrorCache(const Dataset& data) : data_(data) {}

    double operator()(double k) {
        auto it = cache_.find(k);
        if (it != cache_.end()) return it->second;
        const double e = error_at(k, data_);
        cache_.emplace(k, e);
        ++evals_;
        return e;
    }

    long evals() const { return evals_; }
    const std::map<double, double>& samples() const { return cache_; }

private:
    const Dataset& data_;
    std::map<double, double> cache_;
    long evals_ = 0;
};

struct SearchResult {
    double k_best = 0.0;
    double bracket = 0.0;
    bool warning = false;
};

// Geometric bracketing scan followed by golden-section refinement on the
// quasiconvex fixed-rate error. lo_limit <= k0 <= hi_limit < 0.
SearchResult search_rate(ErrorCache& E, double k0, double lo_limit, double hi_limit,
                         double tol) {
    const double gr = 0.6180339887498949;

    // Powers of two away from k0 in both directions until the error rises
    // on both sides of the running best or a limit is reached.
    std::vector<double> ks;
    ks.push_back(k0);
    SearchResult out;

    const auto value = [&](double k) { return E(k); };

    // Expand toward -inf.
    {
        double prev = value(k0);
        double k = k0;
        while (true) {
            double next = k * 2.0;
            if (next < lo_limit) {
                if (ks.back() != lo_limit && lo_limit < k) {
                    ks.push_back(lo_limit);
                    if (value(lo_limit) < prev) out.warning = true;
                }
                break;
            }
            ks.push_back(next);
            const double e = value(next);
            if (e >= prev) break;
            prev = e;
            k = next;
        }
    }
    // Expand toward 0-.
    {
        double prev = value(k0);
        double k = k0;
        while (true) {
            double next = k * 0.5;
            if (next > hi_limit) {
                if (ks.back() != hi_limit && hi_limit > k) {
                    ks.push_back(hi_limit);
                    if (value(hi_limit) < prev) out.warning = true;
                }
                break;
            }
            ks.push_back(next);
            const double e = value(next);
            if (e >= prev) break;
            prev = e;
            k = next;
        }
    }

    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    std::size_t best = 0;
    for (std::size_t i = 1; i < ks.size(); ++i)
        if (value(ks[i]) < value(ks[best])) best = i;

    double lo = best > 0 ? ks[best - 1] : ks[best];
    double hi = best + 1 < ks.size() ? ks[best + 1] : ks[best];
    if (best == 0 || best + 1 == ks.size()) out.warning = true;

    // Golden section, function values only; ties shrink toward -inf side
    // deterministically.
    if (hi > lo) {
        double c = hi - gr * (hi - lo);
        double d = lo + gr * (hi - lo);
        double fc = value(c), fd = value(d);
        double flo = value(lo), fhi = value(hi);
        for (int it = 0; it < 300; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (hi - lo <= tol * (1.0 + std::abs(mid))) break;
            const double fmin = std::min(std::min(fc, fd), std::min(flo, fhi));
            const double fmax = std::max(std::max(fc, fd), std::max(flo, fhi));
            if (fmax - fmin <= 1e-12 * (1.0 + fmin)) break;
            if (fc <= fd) {
                hi = d;
                fhi = fd;
                d = c;
                fd = fc;
                c = hi - gr * (hi - lo);
                fc = value(c);
            } else {
                lo = c;
                flo = fc;
                c = d;
                fc = fd;
                d = lo + gr * (hi - lo);
                fd = value(d);
            }
        }
    }
    out.bracket = hi - lo;

    // Best sampled rate overall (deterministic tie-break toward smaller k).
    double kb = ks[best], eb = value(ks[best]);
    for (const auto& [k, e] : E.samples()) {
        if (e < eb || (e == eb && k < kb)) {
            kb = k;
            eb = e;
        }
    }
    out.k_best = kb;
    return out;
}

// Assemble candidate extremal quartets from the certificate blocks of the
// best fixed-rate fit, most promising first.
std::vector<std::array<std::size_t, 4>> quartet_candidates(
    std::span<const double> res, double error) {
    const auto blocks = detail::extremal_blocks(res, error);
    std::vector<std::array<std::size_t, 4>> out;
    if (blocks.size() >= 4) {
        for (std::size_t b = 0; b + 3 < blocks.size(); ++b)
            out.push_back({blocks[b].first, blocks[b + 1].first,
                           blocks[b + 2].first, blocks[b + 3].first});
        return out;
    }
    if (blocks.size() != 3) return out;

    const std::size_t i = blocks[0].first, j = blocks[1].first, m = blocks[2].first;
    const int delta = blocks[0].sign;
    const double want = -delta * error;

    // Fourth index outside the triple whose residual is closest to the
    // opposite extreme, preferring the right side (canonical pattern).
    std::vector<std::pair<double, std::size_t>> right, left;
    for (std::size_t l = m + 1; l < res.size(); ++l)
        right.push_back({std::abs(res[l] - want), l});
    for (std::size_t l = 0; l < i; ++l)
        left.push_back({std::abs(res[l] - want), l});
    std::sort(right.begin(), right.end());
    std::sort(left.begin(), left.end());

    const std::size_t take = 3;
    for (std::size_t r = 0; r < std::max(right.size(), left.size()) && r < take; ++r) {
        if (r < right.size()) out.push_back({i, j, m, right[r].second});
        if (r < left.size()) out.push_back({left[r].second, i, j, m});
    }
    return out;
}

} // namespace

FitReport fit(const Dataset& data, const FitOptions& options) {
    if (data.size() < 3)
        throw InputError("fit: at least 3 points required");
    const std::size_t n = data.size();

    const Taxonomy tax = classify(data);
    switch (tax.tag) {
    case Tag::ConstantBest:
        return internal::constant_report(data, tax.witness);
    case Tag::LineBest:
        return internal::line_report(data, tax.witness);
    case Tag::LimitNegInf:
    case Tag::LimitPosInf:
        return internal::limit_report(data, tax.orientation);
    case Tag::InteriorExponential:
        break;
    }

    const Orientation o = tax.orientation;
    const Dataset d = detail::oriented(data, o);

    // Search limits in the oriented frame (k < 0 there). User clamps are
    // stated in the original frame; t-reflection negates rates.
    double t_absmax = 0.0;
    for (double ti : d.t()) t_absmax = std::max(t_absmax, std::abs(ti));
    const double range = d.t().back() - d.t().front();
    double lo_limit = -700.0 / std::max(t_absmax, 1e-300);
    double hi_limit = -1e-12 / range;
    if (options.k_min && options.k_max && *options.k_min > *options.k_max)
        throw InputError("fit: k_min > k_max");
    const auto clamp_user = [&](double v) {
        return o.reflect_t ? -v : v;
    };
    if (options.k_min) {
        const double c = clamp_user(*options.k_min);
        if (o.reflect_t) hi_limit = std::min(hi_limit, c);
        else lo_limit = std::max(lo_limit, c);
    }
    if (options.k_max) {
        const double c = clamp_user(*options.k_max);
        if (o.reflect_t) lo_limit = std::max(lo_limit, c);
        else hi_limit = std::min(hi_limit, c);
    }
    if (!(lo_limit < hi_limit))
        throw InputError("fit: rate clamps leave an empty interior search range");

    // Scan seed: the reciprocal data span, the natural rate scale.
    ErrorCache E(d);
    const double k_seed = std::clamp(-1.0 / range, lo_limit, hi_limit);
    const SearchResult sr = search_rate(E, k_seed, lo_limit, hi_limit, options.tol);

    auto [model_s, cert_s] = fit_fixed_k(sr.k_best, d);
    double err_s = cert_s.error;

    FitReport rep;
    rep.taxonomy = tax;
    rep.evals = E.evals();
    rep.k_bracket = sr.bracket;
    rep.bracket_warning = sr.warning;
    rep.k_search = o.reflect_t ? -sr.k_best : sr.k_best;

    ExponentialModel chosen = model_s;

    // Exact polish on the active extremal quartet: accept the closed-form
    // model when it levels the quartet and does not worsen the full error.
    if (n >= 4) {
        const auto res_s = detail::residuals(model_s, d);
        for (const auto& q : quartet_candidates(res_s, err_s)) {
            std::vector<double> qt(4), qT(4);
            for (int a = 0; a < 4; ++a) {
                qt[a] = d.t()[q[a]];
                qT[a] = d.T()[q[a]];
            }
            FitReport qrep;
            try {
                qrep = fit_quartet(Dataset(std::move(qt), std::move(qT)));
            } catch (const Error&) {
                continue;
            }
            if (qrep.taxonomy.tag != Tag::InteriorExponential || !qrep.has_model())
                continue;
            const auto& qm = qrep.model_value();
            if (qm.kind != ModelKind::Exponential || !(qm.k < 0.0)) continue;
            if (qm.k < lo_limit || qm.k > hi_limit) continue; // honour rate clamps

            double full = 0.0;
            bool ok = true;
            try {
                for (std::size_t i = 0; i < n; ++i)
                    full = std::max(full, std::abs(d.T()[i] - qm(d.t()[i])));
            } catch (const Error&) {
                ok = false;
            }
            if (!ok) continue;
            const double atol = 1e-9 * (1.0 + err_s);
            if (full <= err_s + atol && std::abs(full - qrep.error) <= 1e-9 * (1.0 + full)) {
                chosen = qm;
                std::array<std::size_t, 4> orig{};
                for (int a = 0; a < 4; ++a) orig[a] = detail::unorient_index(q[a], n, o);
                std::sort(orig.begin(), orig.end());
                rep.quartet = orig;
                rep.k_quartet = o.reflect_t ? -qm.k : qm.k;
                break;
            }
        }
    }

    const auto model = internal::unorient_model(chosen, o);
    rep.model = model;
    const auto res = detail::residuals(model, data);
    rep.error = detail::max_abs(res);
    rep.certificate = detail::make_certificate(res, rep.error, n >= 4 ? 4 : 3);

    for (const auto& [k, e] : E.samples())
        rep.trace.push_back({o.reflect_t ? -k : k, e});
    std::sort(rep.trace.begin(), rep.trace.end());
    return rep;
}

} // namespace expfit

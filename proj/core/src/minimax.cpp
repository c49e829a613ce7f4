#include "expfit/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "expfit/errors.hpp"

namespace expfit {

namespace detail {

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::vector<double> residuals(const ExponentialModel& model, const Dataset& data) {
    std::vector<double> r(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) r[i] = data.T()[i] - model(data.t()[i]);
    return r;
}

namespace {

double certificate_tol(double error) { return 1e-9 * (1.0 + error); }

LineFit finish_line(std::span<const double> x, std::span<const double> y,
                    double slope, double intercept) {
    double e = 0.0;
    for (std::size_t l = 0; l < x.size(); ++l)
        e = std::max(e, std::abs(y[l] - slope * x[l] - intercept));
    return {slope, intercept, e};
}

} // namespace

LineFit minimax_line_exhaustive(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 3) throw InputError("minimax line: at least 3 points required");

    // The levelled line of any index triple alternates with level |h|,
    // which lower-bounds the optimal error; the maximizing triple attains it.
    double best_h = -1.0, best_slope = 0.0, best_intercept = 0.0;
    for (std::size_t i = 0; i + 2 < n; ++i) {
        for (std::size_t j = i + 1; j + 1 < n; ++j) {
            for (std::size_t m = j + 1; m < n; ++m) {
                const double c = (y[i] - y[m]) / (x[i] - x[m]);
                const double d = 0.5 * ((y[i] - c * x[i]) + (y[j] - c * x[j]));
                const double h = std::abs(y[i] - c * x[i] - d);
                if (h > best_h) {
                    best_h = h;
                    best_slope = c;
                    best_intercept = d;
                }
            }
        }
    }
    return finish_line(x, y, best_slope, best_intercept);
}

namespace {

double cross(double ox, double oy, double ax, double ay, double bx, double by) {
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
}

// Monotone-chain hull over points already sorted by strictly increasing x.
// keep_sign = +1 builds the lower hull (left turns), -1 the upper hull.
std::vector<std::size_t> half_hull(std::span<const double> x, std::span<const double> y,
                                   int keep_sign) {
    std::vector<std::size_t> h;
    for (std::size_t i = 0; i < x.size(); ++i) {
        while (h.size() >= 2) {
            const std::size_t a = h[h.size() - 2], b = h[h.size() - 1];
            if (keep_sign * cross(x[a], y[a], x[b], y[b], x[i], y[i]) > 0.0) break;
            h.pop_back();
        }
        h.push_back(i);
    }
    return h;
}

double edge_slope(std::span<const double> x, std::span<const double> y,
                  std::size_t a, std::size_t b) {
    return (y[b] - y[a]) / (x[b] - x[a]);
}

} // namespace

LineFit minimax_line_hull(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 3) throw InputError("minimax line: at least 3 points required");

    const auto lower = half_hull(x, y, +1);
    const auto upper = half_hull(x, y, -1);

    // The uniform error of the best line of slope c is half the vertical
    // width g(c) = max(y - c x) - min(y - c x). g is convex piecewise
    // linear; its breakpoints are the hull edge slopes, so the minimum is
    // attained at one of them. As c increases the maximizing vertex walks
    // left along the (concave) upper hull and the minimizing vertex walks
    // right along the (convex) lower hull.
    std::vector<double> slopes;
    slopes.reserve(upper.size() + lower.size());
    for (std::size_t p = 1; p < upper.size(); ++p)
        slopes.push_back(edge_slope(x, y, upper[p - 1], upper[p]));
    for (std::size_t p = 1; p < lower.size(); ++p)
        slopes.push_back(edge_slope(x, y, lower[p - 1], lower[p]));
    std::sort(slopes.begin(), slopes.end());

    std::size_t pu = upper.size() - 1; // argmax vertex, rightmost at c = -inf
    std::size_t pl = 0;                // argmin vertex, leftmost at c = -inf
    double best_g = std::numeric_limits<double>::infinity();
    double best_c = 0.0, best_hi = 0.0, best_lo = 0.0;
    for (const double c : slopes) {
        while (pu > 0 && edge_slope(x, y, upper[pu - 1], upper[pu]) <= c) --pu;
        while (pl + 1 < lower.size() && edge_slope(x, y, lower[pl], lower[pl + 1]) <= c) ++pl;
        const double hi = y[upper[pu]] - c * x[upper[pu]];
        const double lo = y[lower[pl]] - c * x[lower[pl]];
        if (hi - lo < best_g) {
            best_g = hi - lo;
            best_c = c;
            best_hi = hi;
            best_lo = lo;
        }
    }
    return finish_line(x, y, best_c, 0.5 * (best_hi + best_lo));
}

LineFit minimax_line(std::span<const double> x, std::span<const double> y) {
    return x.size() <= 64 ? minimax_line_exhaustive(x, y) : minimax_line_hull(x, y);
}

std::vector<SignBlock> extremal_blocks(std::span<const double> res, double error) {
    const double tol = certificate_tol(error);
    std::vector<SignBlock> blocks;
    for (std::size_t i = 0; i < res.size(); ++i) {
        if (std::abs(res[i]) < error - tol) continue;
        const int sign = res[i] > 0.0 ? +1 : -1;
        if (!blocks.empty() && blocks.back().sign == sign) {
            blocks.back().last = i;
        } else {
            blocks.push_back({i, i, sign});
        }
    }
    return blocks;
}

AlternationCertificate make_certificate(std::span<const double> res, double error,
                                        std::size_t min_indices) {
    AlternationCertificate cert;
    cert.error = error;
    if (error <= certificate_tol(error)) {
        // Everything is extremal at this scale; report the leading indices.
        const std::size_t count = std::min(min_indices, res.size());
        for (std::size_t i = 0; i < count; ++i) cert.indices.push_back(i);
        cert.delta = +1;
        return cert;
    }
    const auto blocks = extremal_blocks(res, error);
    for (const auto& b : blocks) cert.indices.push_back(b.first);
    cert.delta = blocks.empty() ? +1 : blocks.front().sign;
    return cert;
}

} // namespace detail

std::pair<double, double> best_b(double a, double k, const Dataset& data) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double arg = k * data.t()[i];
        if (std::abs(arg) > 700.0)
            throw NumericError("best_b: exp(k*t) out of range; rescale t toward the origin");
        const double v = data.T()[i] - a * std::exp(arg);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {0.5 * (hi + lo), 0.5 * (hi - lo)};
}

std::pair<ExponentialModel, AlternationCertificate> fit_line_minimax(const Dataset& data) {
    if (data.size() < 3)
        throw InputError("fit_line_minimax: at least 3 points required");
    const auto lf = detail::minimax_line(data.t(), data.T());
    const auto model = ExponentialModel::line(lf.slope, lf.intercept);
    const auto res = detail::residuals(model, data);
    const double e = detail::max_abs(res);
    return {model, detail::make_certificate(res, e)};
}

std::pair<ExponentialModel, AlternationCertificate> fit_fixed_k(double k, const Dataset& data) {
    if (data.size() < 3)
        throw InputError("fit_fixed_k: at least 3 points required");
    if (k == 0.0)
        throw InputError("fit_fixed_k: k = 0; use fit_line_minimax");

    const std::size_t n = data.size();
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double arg = k * data.t()[i];
        if (std::abs(arg) > 700.0)
            throw NumericError("fit_fixed_k: exp(k*t) out of range at k*t = " +
                               std::to_string(arg) + "; rescale t toward the origin");
        u[i] = std::exp(arg);
    }

    // u = e^{kt} is strictly monotone in t; order it ascending for the
    // line fit, which must see strictly increasing abscissae.
    std::vector<double> xs(n), ys(n);
    if (k > 0.0) {
        xs = u;
        ys.assign(data.T().begin(), data.T().end());
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = u[n - 1 - i];
            ys[i] = data.T()[n - 1 - i];
        }
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(xs[i] > xs[i - 1]))
            throw NumericError("fit_fixed_k: |k| too small to separate exp(k*t) values");
    }

    const auto lf = detail::minimax_line(xs, ys);
    const auto model = lf.slope == 0.0 ? ExponentialModel::constant(lf.intercept)
                                       : ExponentialModel::exponential(lf.slope, k, lf.intercept);
    const auto res = detail::residuals(model, data);
    const double e = detail::max_abs(res);
    return {model, detail::make_certificate(res, e)};
}

Band band(const ExponentialModel& model, const Dataset& data) {
    const auto values = evaluate(model, data.t());
    return band(values, data);
}

Band band(std::span<const double> values, const Dataset& data) {
    if (values.size() != data.size())
        throw InputError("band: value vector length must match the dataset");
    double r = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i)
        r = std::max(r, std::abs(data.T()[i] - values[i]));
    Band out;
    out.upper.resize(values.size());
    out.lower.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.upper[i] = values[i] + r;
        out.lower[i] = values[i] - r;
    }
    return out;
}

} // namespace expfit

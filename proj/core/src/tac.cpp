#include "expfit/tac.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "expfit/errors.hpp"
#include "expfit/rng.hpp"

namespace expfit {

std::vector<double> hadamard(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw InputError("hadamard: vectors must have equal length");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

namespace {

std::vector<double> axis_nodes(double lo, double hi, int points, const double* keep) {
    std::vector<double> nodes;
    if (points < 2 || lo == hi) {
        nodes.push_back(0.5 * (lo + hi));
    } else {
        for (int i = 0; i < points; ++i)
            nodes.push_back(lo + (hi - lo) * static_cast<double>(i) / (points - 1));
    }
    if (keep) nodes.push_back(*keep);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

} // namespace

SeparableFit fit_separable(const SeparablePattern& pattern,
                           const std::vector<std::vector<double>>& regressors,
                           std::span<const double> y, const GridSpec& grid,
                           const SeparableOptions& options) {
    if (!pattern.basis)
        throw InputError("fit_separable: pattern has no basis function");
    if (grid.axes.empty() || grid.axes.size() != pattern.nonlinear_names.size())
        throw InputError("fit_separable: one grid axis per nonlinear parameter required");
    const std::size_t n = y.size();
    const std::size_t p = pattern.linear_names.size();
    if (p == 0 || n < p)
        throw InputError("fit_separable: more rows than linear coefficients required");
    for (const auto& r : regressors)
        if (r.size() != n)
            throw InputError("fit_separable: regressor length must match y");
    for (const auto& ax : grid.axes) {
        if (!(ax.lo <= ax.hi) || ax.points < 2)
            throw InputError("fit_separable: malformed axis '" + ax.name + "'");
    }
    if (!(options.tol > 0.0))
        throw InputError("fit_separable: tol must be positive");
    if (!(options.shrink > 1.0))
        throw InputError("fit_separable: shrink factor must exceed 1");
    if (options.max_levels < 1)
        throw InputError("fit_separable: max_levels must be positive");

    const std::size_t na = grid.axes.size();
    std::vector<double> lo(na), hi(na);
    for (std::size_t a = 0; a < na; ++a) {
        lo[a] = grid.axes[a].lo;
        hi[a] = grid.axes[a].hi;
    }

    Eigen::VectorXd yv(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) yv(static_cast<Eigen::Index>(i)) = y[i];

    SeparableFit fit;
    fit.rss = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> columns;
    std::vector<double> theta(na);
    Eigen::MatrixXd A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));

    bool have_winner = false;
    for (int level = 0; level < options.max_levels; ++level) {
        std::vector<std::vector<double>> nodes(na);
        for (std::size_t a = 0; a < na; ++a)
            nodes[a] = axis_nodes(lo[a], hi[a], grid.axes[a].points,
                                  have_winner ? &fit.nonlinear[a] : nullptr);

        // Odometer over the node lattice, last axis fastest.
        std::vector<std::size_t> idx(na, 0);
        bool done = false;
        while (!done) {
            for (std::size_t a = 0; a < na; ++a) theta[a] = nodes[a][idx[a]];

            columns.clear();
            pattern.basis(theta, regressors, columns);
            if (columns.size() != p)
                throw InputError("fit_separable: basis produced wrong column count");
            bool valid = true;
            for (std::size_t c = 0; c < p && valid; ++c) {
                if (columns[c].size() != n) {
                    throw InputError("fit_separable: basis column length mismatch");
                }
                for (double v : columns[c]) {
                    if (!std::isfinite(v)) {
                        valid = false;
                        break;
                    }
                }
            }
            ++fit.nodes_evaluated;
            if (valid) {
                for (std::size_t c = 0; c < p; ++c)
                    for (std::size_t i = 0; i < n; ++i)
                        A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                            columns[c][i];
                Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
                if (qr.rank() < static_cast<Eigen::Index>(p)) {
                    ++fit.rank_deficient_nodes;
                } else {
                    const Eigen::VectorXd x = qr.solve(yv);
                    const double rss = (A * x - yv).squaredNorm();
                    if (rss < fit.rss) {
                        fit.rss = rss;
                        fit.nonlinear = theta;
                        fit.linear.assign(x.data(), x.data() + x.size());
                        have_winner = true;
                    }
                }
            } else {
                ++fit.rank_deficient_nodes;
            }

            done = true;
            for (std::size_t a = na; a-- > 0;) {
                if (++idx[a] < nodes[a].size()) {
                    done = false;
                    break;
                }
                idx[a] = 0;
            }
        }

        if (!have_winner)
            throw NumericError("fit_separable: every grid node was rank-deficient or non-finite");
        fit.rss_trace.push_back(fit.rss);
        fit.levels = level + 1;

        bool converged = true;
        for (std::size_t a = 0; a < na; ++a) {
            if (hi[a] - lo[a] >= options.tol * (1.0 + std::abs(fit.nonlinear[a]))) {
                converged = false;
                break;
            }
        }
        if (converged) break;

        // Contract each axis about the winner, clamped to the original box.
        for (std::size_t a = 0; a < na; ++a) {
            const double half = 0.5 * (hi[a] - lo[a]) / options.shrink;
            const double w = fit.nonlinear[a];
            lo[a] = std::max(grid.axes[a].lo, w - half);
            hi[a] = std::min(grid.axes[a].hi, w + half);
        }
    }

    fit.mse = fit.rss / static_cast<double>(n);
    return fit;
}

// --- demand-curve pattern --------------------------------------------------

DemandInternal demand_to_internal(const DemandParams& p) {
    if (!(p.Q0 > 0.0))
        throw InputError("demand: Q0 must be positive");
    return {p.k, -p.alpha * p.Q0, std::log10(p.Q0) - p.k};
}

DemandParams demand_from_internal(const DemandInternal& m) {
    const double Q0 = std::pow(10.0, m.a + m.b);
    if (!(Q0 > 0.0) || !std::isfinite(Q0))
        throw NumericError("demand: recovered Q0 is not a positive finite value");
    return {Q0, m.a, -m.d / Q0};
}

Dataset simulate_demand(const DemandParams& p, std::size_t n, double c_step,
                        double noise_sd, std::uint64_t seed) {
    if (n < 2 || !(c_step > 0.0))
        throw InputError("simulate_demand: n >= 2 and c_step > 0 required");
    const DemandInternal m = demand_to_internal(p);
    Rng rng(seed);
    std::vector<double> C(n), Q(n);
    for (std::size_t i = 0; i < n; ++i) {
        C[i] = static_cast<double>(i) * c_step;
        const double y = m.a * std::exp(m.d * C[i]) + m.b + noise_sd * rng.normal();
        Q[i] = std::pow(10.0, y);
    }
    return Dataset(std::move(C), std::move(Q));
}

DemandFit fit_demand(const Dataset& data, const std::optional<GridSpec>& grid,
                     const SeparableOptions& options) {
    const std::size_t n = data.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(data.T()[i] > 0.0))
            throw InputError("fit_demand: consumption values must be positive");
        y[i] = std::log10(data.T()[i]);
    }

    SeparablePattern pattern;
    pattern.nonlinear_names = {"d"};
    pattern.linear_names = {"a", "b"};
    pattern.basis = [](std::span<const double> theta,
                       const std::vector<std::vector<double>>& regs,
                       std::vector<std::vector<double>>& cols) {
        const double d = theta[0];
        const auto& C = regs[0];
        cols.resize(2);
        cols[0].resize(C.size());
        cols[1].assign(C.size(), 1.0);
        for (std::size_t i = 0; i < C.size(); ++i) {
            const double arg = d * C[i];
            cols[0][i] = std::abs(arg) > 700.0 ? std::numeric_limits<double>::quiet_NaN()
                                               : std::exp(arg);
        }
    };

    GridSpec g = grid.value_or(GridSpec{{{"d", -2.0, -1e-4, 10}}});
    const SeparableFit sf = fit_separable(pattern, {std::vector<double>(data.t())}, y, g, options);

    DemandFit out;
    out.internal = {sf.linear[0], sf.nonlinear[0], sf.linear[1]};
    out.params = demand_from_internal(out.internal);
    out.rss = sf.rss;
    out.mse = sf.mse;
    out.details = sf;
    return out;
}

// --- exponential autoregressive pattern -------------------------------------

std::vector<double> expar_generate(const ExpArParams& p, double x1, double x2,
                                   std::size_t count, double noise_sd,
                                   std::uint64_t seed) {
    if (count < 2)
        throw InputError("expar_generate: count >= 2 required (the seeds)");
    Rng rng(seed);
    std::vector<double> x(count);
    x[0] = x1;
    x[1] = x2;
    for (std::size_t t = 2; t < count; ++t) {
        const double lag1 = x[t - 1], lag2 = x[t - 2];
        const double g1 = std::exp(-p.gamma * (lag2 - p.z1) * (lag2 - p.z1));
        const double g2 = std::exp(-p.gamma * (lag2 - p.z2) * (lag2 - p.z2));
        x[t] = p.c0 + (p.c1 + p.pi1 * g1) * lag1 + (p.c2 + p.pi2 * g2) * lag2 +
               noise_sd * rng.normal();
        if (!std::isfinite(x[t]))
            throw NumericError("expar_generate: series diverged at index " + std::to_string(t));
    }
    return x;
}

ExpArFit expar_fit(std::span<const double> series, const std::optional<GridSpec>& grid,
                   const SeparableOptions& options) {
    const std::size_t n = series.size();
    if (n < 8)
        throw InputError("expar_fit: series length >= 8 required");
    const std::size_t rows = n - 2;
    std::vector<double> y(rows), lag1(rows), lag2(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        y[i] = series[i + 2];
        lag1[i] = series[i + 1];
        lag2[i] = series[i];
    }

    SeparablePattern pattern;
    pattern.nonlinear_names = {"gamma", "z1", "z2"};
    pattern.linear_names = {"c0", "c1", "pi1", "c2", "pi2"};
    pattern.basis = [](std::span<const double> theta,
                       const std::vector<std::vector<double>>& regs,
                       std::vector<std::vector<double>>& cols) {
        const double gamma = theta[0], z1 = theta[1], z2 = theta[2];
        const auto& l1 = regs[0];
        const auto& l2 = regs[1];
        const std::size_t m = l1.size();
        cols.assign(5, std::vector<double>(m));
        for (std::size_t i = 0; i < m; ++i) {
            cols[0][i] = 1.0;
            cols[1][i] = l1[i];
            cols[2][i] = l1[i] * std::exp(-gamma * (l2[i] - z1) * (l2[i] - z1));
            cols[3][i] = l2[i];
            cols[4][i] = l2[i] * std::exp(-gamma * (l2[i] - z2) * (l2[i] - z2));
        }
    };

    GridSpec g = grid.value_or(GridSpec{{{"gamma", 0.5, 2.0, 10},
                                         {"z1", 1.0, 4.0, 10},
                                         {"z2", 2.0, 5.0, 10}}});
    const SeparableFit sf = fit_separable(pattern, {lag1, lag2}, y, g, options);

    ExpArFit out;
    out.params.c0 = sf.linear[0];
    out.params.c1 = sf.linear[1];
    out.params.pi1 = sf.linear[2];
    out.params.c2 = sf.linear[3];
    out.params.pi2 = sf.linear[4];
    out.params.gamma = sf.nonlinear[0];
    out.params.z1 = sf.nonlinear[1];
    out.params.z2 = sf.nonlinear[2];
    out.rss = sf.rss;
    out.mse = sf.mse;
    out.details = sf;
    return out;
}

} // namespace expfit

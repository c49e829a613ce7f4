#include "expfit/quartet.hpp"

#include <array>
#include <cmath>
#include <string>

#include "expfit/errors.hpp"
#include "report_common.hpp"

namespace expfit {

double RootProblem::operator()(double z) const {
    return d13 * std::pow(z, s3) - d24 * std::pow(z, s2) - d13 * std::pow(z, s1) + d24;
}

double RootProblem::derivative_at_one() const {
    return d13 * (s3 - s1) - d24 * s2;
}

RootProblem make_root_problem(const Dataset& quartet) {
    if (quartet.size() != 4)
        throw InputError("root problem: exactly 4 points required");
    const auto& t = quartet.t();
    const auto& T = quartet.T();
    const double S13 = (T[0] - T[2]) / (t[2] - t[0]);
    const double S24 = (T[1] - T[3]) / (t[3] - t[1]);
    if (!(S13 > S24 && S24 > 0.0))
        throw InputError("root problem: canonical slope ordering S13 > S24 > 0 required");
    RootProblem p;
    p.s1 = t[1] - t[0];
    p.s2 = t[2] - t[0];
    p.s3 = t[3] - t[0];
    p.d13 = T[0] - T[2];
    p.d24 = T[1] - T[3];
    return p;
}

double solve_rate(const RootProblem& problem) {
    const double scale = std::abs(problem.d13) + std::abs(problem.d24);
    if (!(problem(0.0) > 0.0))
        throw NumericError("solve_rate: q(0) <= 0; degenerate quartet");

    // q(1) = 0 and the canonical ordering makes q'(1) > 0, so q is
    // negative just left of 1. Back off from 1 until the sign change is
    // visible; equal slopes (double root at 1) never produce one.
    double lo = 0.0, flo = problem(0.0);
    double hi = 0.0, fhi = 0.0;
    bool bracketed = false;
    double eta = 1e-3;
    for (int i = 0; i <= 40; ++i, eta *= 0.5) {
        hi = 1.0 - eta;
        fhi = problem(hi);
        if (fhi < 0.0) {
            bracketed = true;
            break;
        }
    }
    if (!bracketed)
        throw NumericError("solve_rate: no sign change in (0, 1); "
                           "equal slopes or violated precondition");

    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = problem(mid);
        if (fmid == 0.0) return std::log(mid);
        if (fmid > 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
    }

    // Secant polish, alternated with bisection so the bracket provably
    // collapses; the best-|q| point inside the bracket is the root.
    double best_z = std::abs(flo) < std::abs(fhi) ? lo : hi;
    double best_f = std::min(std::abs(flo), std::abs(fhi));
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        double z = 0.5 * (lo + hi);
        if ((it & 1) == 0 && fhi != flo) {
            const double s = hi - fhi * (hi - lo) / (fhi - flo);
            if (s > lo && s < hi) z = s;
        }
        const double f = problem(z);
        if (std::abs(f) < best_f) {
            best_f = std::abs(f);
            best_z = z;
        }
        if (f == 0.0) {
            best_z = z;
            break;
        }
        if (f > 0.0) {
            lo = z;
            flo = f;
        } else {
            hi = z;
            fhi = f;
        }
        if (best_f <= 1e-13 * scale && hi - lo <= 1e-14) break;
    }
    return std::log(best_z);
}

FitReport fit_quartet(const Dataset& quartet) {
    if (quartet.size() != 4)
        throw InputError("fit_quartet: exactly 4 points required");
    const auto& t = quartet.t();
    const auto& T = quartet.T();

    if (auto w = detail::constant_sandwich(T))
        return internal::constant_report(quartet, *w);

    const double S13 = (T[0] - T[2]) / (t[2] - t[0]);
    const double S24 = (T[1] - T[3]) / (t[3] - t[1]);

    if (S13 == 0.0 || S24 == 0.0 || (S13 > 0.0) != (S24 > 0.0)) {
        // Zero or opposite chord slopes: no interior optimum; one of the
        // oriented limit index conditions must hold.
        for (const Orientation& o : {Orientation{false, false}, Orientation{true, false},
                                     Orientation{false, true}, Orientation{true, true}}) {
            if (detail::neg_inf_condition(detail::oriented(quartet, o).T()))
                return internal::limit_report(quartet, o);
        }
        return internal::line_report(quartet); // unreachable for exact patterns
    }

    if (S13 == S24)
        return internal::line_report(quartet);

    Orientation o;
    if (S13 > 0.0)
        o = (S13 > S24) ? Orientation{false, false} : Orientation{true, true};
    else
        o = (S13 < S24) ? Orientation{false, true} : Orientation{true, false};

    const Dataset d = detail::oriented(quartet, o);
    double k = 0.0;
    try {
        k = solve_rate(make_root_problem(d));
    } catch (const NumericError&) {
        // Root indistinguishable from the double root at z = 1: the data
        // is numerically a line.
        FitReport rep = internal::line_report(quartet);
        rep.bracket_warning = true;
        return rep;
    }

    const auto& td = d.t();
    const auto& Td = d.T();
    for (double ti : td) {
        if (std::abs(k * ti) > 700.0)
            throw NumericError("fit_quartet: exp(k*t) out of range at k*t = " +
                               std::to_string(k * ti) + "; rescale t toward the origin");
    }
    const double e0 = std::exp(k * td[0]);
    const double e1 = std::exp(k * td[1]);
    const double e2 = std::exp(k * td[2]);
    const double a = (Td[0] - Td[2]) / (e0 - e2);
    const double b = 0.5 * (Td[0] - a * e0 + Td[1] - a * e1);
    const auto model = internal::unorient_model(ExponentialModel::exponential(a, k, b), o);

    FitReport rep;
    rep.taxonomy = {Tag::InteriorExponential, o, {0, 1, 2, 3}};
    rep.model = model;
    const auto res = detail::residuals(model, quartet);
    rep.error = detail::max_abs(res);
    rep.certificate = detail::make_certificate(res, rep.error, 4);
    rep.quartet = std::array<std::size_t, 4>{0, 1, 2, 3};
    rep.k_quartet = model.k;
    return rep;
}

} // namespace expfit

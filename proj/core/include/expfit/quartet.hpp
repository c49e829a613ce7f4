#pragma once

#include "expfit/dataset.hpp"
#include "expfit/report.hpp"

namespace expfit {

/// Root problem whose solution in z = e^k is the optimal rate of a
/// four-point fit in the canonical frame (T_0-T_2 and T_1-T_3 slopes both
/// positive and strictly ordered). With s_i = t_i - t_0, d13 = T_0 - T_2,
/// d24 = T_1 - T_3:
///
///   q(z) = d13*z^{s3} - d24*z^{s2} - d13*z^{s1} + d24
///
/// q(0) = d24 > 0, q(1) = 0, and the canonical slope ordering places the
/// unique second positive root in (0, 1).
struct RootProblem {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    double d13 = 0.0, d24 = 0.0;

    double operator()(double z) const;
    /// Derivative of the z-polynomial at z = 1; > 0 iff the second root
    /// lies in (0, 1).
    double derivative_at_one() const;
};

/// Build the root problem for a canonically oriented quartet. Throws
/// InputError unless n == 4 and (T_0-T_2)/(t_2-t_0) > (T_1-T_3)/(t_3-t_1) > 0.
RootProblem make_root_problem(const Dataset& quartet);

/// Solve for the rate k = log(z*) of the root in (0, 1): the sign change
/// is bracketed at [0, 1-eta] (eta halved from 1e-3 at most 40 times),
/// isolated by bisection to width 1e-6, then polished by safeguarded
/// secant / inverse-quadratic steps to width <= 1e-14 and residual
/// |q| <= 1e-13*(|d13|+|d24|). Throws NumericError when no sign change
/// exists (equal slopes: double root at z = 1).
double solve_rate(const RootProblem& problem);

/// Exact best max-norm model for a four-point dataset. Interior
/// configurations are reduced to the canonical frame by the t-reflection /
/// T-negation symmetries and solved through the root problem; equal-slope,
/// constant-pattern and limit configurations produce the corresponding
/// LineBest / ConstantBest / Limit reports.
FitReport fit_quartet(const Dataset& quartet);

} // namespace expfit

#pragma once

#include <span>
#include <vector>

namespace expfit {

enum class ModelKind { Exponential, Line, Constant };

/// Three-parameter model family closed under the limits of a*e^{kt}+b.
///
///   Exponential: f(t) = a*e^{kt} + b   with a != 0, k != 0
///   Line:        f(t) = a*t + b        (a is the slope, may be 0)
///   Constant:    f(t) = b
struct ExponentialModel {
    ModelKind kind = ModelKind::Constant;
    double a = 0.0;
    double k = 0.0;
    double b = 0.0;

    static ExponentialModel exponential(double a, double k, double b);
    static ExponentialModel line(double slope, double intercept);
    static ExponentialModel constant(double value);

    /// Pointwise evaluation. Throws NumericError if |k*t| > 700 (the
    /// exponential would overflow; rescale t toward the origin first).
    double operator()(double t) const;
};

/// Evaluate the model over a grid. Same overflow guard as operator().
std::vector<double> evaluate(const ExponentialModel& model, std::span<const double> t);

/// The unique model a*e^{kt}+b through (t1,T1) and (t3,T3) at fixed rate k.
/// k == 0 returns the interpolating line. Requires t1 != t3.
ExponentialModel exponential_through(double k, double t1, double T1, double t3, double T3);

} // namespace expfit

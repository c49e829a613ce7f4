#include "expfit/model.hpp"

#include <cmath>
#include <string>

#include "expfit/errors.hpp"

namespace expfit {

namespace {

// Largest |k*t| admitted before e^{kt} overflows or underflows to an
// unusable range. Data further out must be rescaled by the caller.
constexpr double kExpArgLimit = 700.0;

double checked_exp(double k, double t) {
    const double arg = k * t;
    if (std::abs(arg) > kExpArgLimit)
        throw NumericError("exp(k*t) out of range at k*t = " + std::to_string(arg) +
                           "; rescale t toward the origin");
    return std::exp(arg);
}

} // namespace

ExponentialModel ExponentialModel::exponential(double a, double k, double b) {
    if (a == 0.0 || k == 0.0)
        throw InputError("exponential model requires a != 0 and k != 0");
    return {ModelKind::Exponential, a, k, b};
}

ExponentialModel ExponentialModel::line(double slope, double intercept) {
    return {ModelKind::Line, slope, 0.0, intercept};
}

ExponentialModel ExponentialModel::constant(double value) {
    return {ModelKind::Constant, 0.0, 0.0, value};
}

double ExponentialModel::operator()(double t) const {
    switch (kind) {
    case ModelKind::Exponential:
        return a * checked_exp(k, t) + b;
    case ModelKind::Line:
        return a * t + b;
    case ModelKind::Constant:
    default:
        return b;
    }
}

std::vector<double> evaluate(const ExponentialModel& model, std::span<const double> t) {
    std::vector<double> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = model(t[i]);
    return out;
}

ExponentialModel exponential_through(double k, double t1, double T1, double t3, double T3) {
    if (t1 == t3)
        throw InputError("exponential_through: distinct abscissae required");
    if (k == 0.0) {
        const double slope = (T3 - T1) / (t3 - t1);
        return ExponentialModel::line(slope, T1 - slope * t1);
    }
    const double e1 = checked_exp(k, t1);
    const double e3 = checked_exp(k, t3);
    const double a = (T1 - T3) / (e1 - e3);
    if (a == 0.0)
        return ExponentialModel::constant(T1);
    return ExponentialModel::exponential(a, k, T1 - a * e1);
}

} // namespace expfit

#include <doctest.h>

#include <cmath>
#include <vector>

#include "expfit/dataset.hpp"
#include "expfit/errors.hpp"
#include "expfit/quartet.hpp"
#include "expfit/rng.hpp"

using expfit::Dataset;
using expfit::InputError;
using expfit::ModelKind;
using expfit::Rng;
using expfit::Tag;

namespace {

// Exact exponential samples plus a levelled alternating wiggle: the wiggle
// cancels in both cross-differences, so the closed form must recover the
// generating parameters to round-off.
Dataset levelled_quartet(double a, double k, double b, double r,
                         const std::vector<double>& t, int first_sign = +1) {
    std::vector<double> T(4);
    for (std::size_t i = 0; i < 4; ++i) {
        const double s = (i % 2 == 0) ? first_sign : -first_sign;
        T[i] = a * std::exp(k * t[i]) + b + s * r;
    }
    return Dataset(t, T);
}

} // namespace

TEST_CASE("closed form recovers a hand-checked quartet exactly") {
    Dataset data = levelled_quartet(2.0, -0.7, 0.5, 0.1, {0.0, 1.0, 2.0, 3.0});
    auto rep = expfit::fit_quartet(data);
    CHECK(rep.taxonomy.tag == Tag::InteriorExponential);
    REQUIRE(rep.has_model());
    const auto& m = rep.model_value();
    REQUIRE(m.kind == ModelKind::Exponential);
    CHECK(m.a == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(m.k == doctest::Approx(-0.7).epsilon(1e-12));
    CHECK(m.b == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.error == doctest::Approx(0.1).epsilon(1e-11));
    REQUIRE(rep.certificate.indices.size() == 4);
    CHECK(rep.certificate.delta == +1);
    REQUIRE(rep.quartet.has_value());
    CHECK(*rep.quartet == std::array<std::size_t, 4>{0, 1, 2, 3});
}

TEST_CASE("the opposite starting sign flips only the certificate") {
    Dataset data = levelled_quartet(2.0, -0.7, 0.5, 0.1, {0.0, 1.0, 2.0, 3.0}, -1);
    auto rep = expfit::fit_quartet(data);
    REQUIRE(rep.has_model());
    CHECK(rep.model_value().k == doctest::Approx(-0.7).epsilon(1e-12));
    CHECK(rep.error == doctest::Approx(0.1).epsilon(1e-11));
    CHECK(rep.certificate.delta == -1);
}

TEST_CASE("all four frames reduce to the same canonical solve") {
    Dataset base = levelled_quartet(1.4, -0.9, -0.2, 0.05, {0.0, 0.8, 1.7, 3.1});
    auto rep = expfit::fit_quartet(base);
    REQUIRE(rep.has_model());
    const auto m = rep.model_value();

    auto rep_r = expfit::fit_quartet(base.reflect_t());
    REQUIRE(rep_r.has_model());
    CHECK(rep_r.model_value().a == doctest::Approx(m.a).epsilon(1e-10));
    CHECK(rep_r.model_value().k == doctest::Approx(-m.k).epsilon(1e-10));
    CHECK(rep_r.model_value().b == doctest::Approx(m.b).epsilon(1e-10));
    CHECK(rep_r.error == doctest::Approx(rep.error).epsilon(1e-10));

    auto rep_n = expfit::fit_quartet(base.negate_T());
    REQUIRE(rep_n.has_model());
    CHECK(rep_n.model_value().a == doctest::Approx(-m.a).epsilon(1e-10));
    CHECK(rep_n.model_value().k == doctest::Approx(m.k).epsilon(1e-10));
    CHECK(rep_n.model_value().b == doctest::Approx(-m.b).epsilon(1e-10));

    auto rep_b = expfit::fit_quartet(base.reflect_t().negate_T());
    REQUIRE(rep_b.has_model());
    CHECK(rep_b.model_value().a == doctest::Approx(-m.a).epsilon(1e-10));
    CHECK(rep_b.model_value().k == doctest::Approx(-m.k).epsilon(1e-10));
    CHECK(rep_b.model_value().b == doctest::Approx(-m.b).epsilon(1e-10));
}

TEST_CASE("growing exponentials route through the reflected frame") {
    // a e^{kt} + b with k > 0: increasing convex.
    std::vector<double> t{0.0, 1.0, 2.0, 3.0};
    std::vector<double> T(4);
    for (std::size_t i = 0; i < 4; ++i)
        T[i] = 0.8 * std::exp(0.6 * t[i]) - 1.0 + ((i % 2 == 0) ? 0.02 : -0.02);
    auto rep = expfit::fit_quartet(Dataset(t, T));
    REQUIRE(rep.has_model());
    CHECK(rep.model_value().a == doctest::Approx(0.8).epsilon(1e-10));
    CHECK(rep.model_value().k == doctest::Approx(0.6).epsilon(1e-10));
    CHECK(rep.model_value().b == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(rep.taxonomy.orientation.reflect_t);
}

TEST_CASE("equal cross-slopes make the line unbeatable") {
    // T_i = c t_i + d + alternating r has equal (0,2) and (1,3) slopes.
    std::vector<double> t{0.0, 1.0, 2.0, 3.0};
    std::vector<double> T(4);
    for (std::size_t i = 0; i < 4; ++i)
        T[i] = -0.5 * t[i] + 2.0 + ((i % 2 == 0) ? 0.1 : -0.1);
    auto rep = expfit::fit_quartet(Dataset(t, T));
    CHECK(rep.taxonomy.tag == Tag::LineBest);
    REQUIRE(rep.has_model());
    CHECK(rep.model_value().kind == ModelKind::Line);
    CHECK(rep.model_value().a == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(rep.model_value().b == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(rep.error == doctest::Approx(0.1).epsilon(1e-10));
}

TEST_CASE("opposite-sign cross-slopes fall back to sandwich or limit") {
    // Paradigm rows from the classifier tests, as quartets.
    auto lim = expfit::fit_quartet(Dataset({1.0, 2.0, 3.0, 4.0}, {3.0, 0.0, 1.0, 2.0}));
    CHECK(lim.taxonomy.tag == Tag::LimitNegInf);
    REQUIRE(!lim.has_model());
    CHECK(lim.limit_value().values[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(lim.error == doctest::Approx(1.0).epsilon(1e-14));

    auto cst = expfit::fit_quartet(Dataset({1.0, 2.0, 3.0, 4.0}, {1.0, 0.0, 2.0, 0.0}));
    CHECK(cst.taxonomy.tag == Tag::ConstantBest);
    REQUIRE(cst.has_model());
    CHECK(cst.model_value().kind == ModelKind::Constant);
    CHECK(cst.model_value().b == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cst.error == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("quartet solver rejects other sizes") {
    CHECK_THROWS_AS(expfit::fit_quartet(Dataset({0.0, 1.0, 2.0}, {3.0, 2.0, 1.0})), InputError);
    CHECK_THROWS_AS(
        expfit::fit_quartet(Dataset({0.0, 1.0, 2.0, 3.0, 4.0}, {5.0, 4.0, 3.0, 2.0, 1.0})),
        InputError);
}

TEST_CASE("random levelled quartets round-trip through the closed form") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = 0.1 + 9.9 * rng.uniform();
        const double k = -3.0 + 2.95 * rng.uniform();
        const double b = -5.0 + 10.0 * rng.uniform();
        const double r = a / 10.0 * (0.05 + 0.95 * rng.uniform());
        std::vector<double> t(4);
        double cur = -2.0 + 4.0 * rng.uniform();
        for (int i = 0; i < 4; ++i) {
            t[i] = cur;
            cur += 0.2 + 1.8 * rng.uniform();
        }
        Dataset data = levelled_quartet(a, k, b, r, t, (trial % 2 == 0) ? +1 : -1);
        auto rep = expfit::fit_quartet(data);
        REQUIRE(rep.has_model());
        REQUIRE(rep.model_value().kind == ModelKind::Exponential);
        CHECK(rep.model_value().a == doctest::Approx(a).epsilon(1e-7));
        CHECK(rep.model_value().k == doctest::Approx(k).epsilon(1e-7));
        CHECK(rep.model_value().b == doctest::Approx(b).epsilon(2e-7));
        CHECK(std::abs(rep.error - r) <= 1e-9 * (1.0 + r));
    }
}

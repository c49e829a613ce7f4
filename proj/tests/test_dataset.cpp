#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "expfit/dataset.hpp"
#include "expfit/errors.hpp"
#include "expfit/rng.hpp"

using expfit::Dataset;
using expfit::InputError;

TEST_CASE("construction sorts rows by abscissa and keeps pairs together") {
    Dataset d({2.0, 0.0, 1.0}, {30.0, 10.0, 20.0});
    CHECK(d.size() == 3);
    CHECK(d.t() == std::vector<double>{0.0, 1.0, 2.0});
    CHECK(d.T() == std::vector<double>{10.0, 20.0, 30.0});
}

TEST_CASE("construction rejects bad input") {
    CHECK_THROWS_AS(Dataset({1.0}, {2.0}), InputError);
    CHECK_THROWS_AS(Dataset({1.0, 2.0}, {3.0}), InputError);
    CHECK_THROWS_AS(Dataset({1.0, 1.0}, {2.0, 3.0}), InputError);
    CHECK_THROWS_AS(Dataset({1.0, 2.0}, {1.0, std::numeric_limits<double>::quiet_NaN()}),
                    InputError);
    CHECK_THROWS_AS(Dataset({1.0, std::numeric_limits<double>::infinity()}, {1.0, 2.0}),
                    InputError);
}

TEST_CASE("reflection mirrors abscissae and is an involution") {
    Dataset d({0.0, 1.0, 3.0}, {5.0, 2.0, 1.0});
    Dataset r = d.reflect_t();
    CHECK(r.t() == std::vector<double>{-3.0, -1.0, 0.0});
    CHECK(r.T() == std::vector<double>{1.0, 2.0, 5.0});
    Dataset rr = r.reflect_t();
    CHECK(rr.t() == d.t());
    CHECK(rr.T() == d.T());
}

TEST_CASE("negation flips ordinates and commutes with reflection") {
    Dataset d({0.0, 1.0, 3.0}, {5.0, 2.0, 1.0});
    Dataset n = d.negate_T();
    CHECK(n.t() == d.t());
    CHECK(n.T() == std::vector<double>{-5.0, -2.0, -1.0});
    Dataset a = d.reflect_t().negate_T();
    Dataset b = d.negate_T().reflect_t();
    CHECK(a.t() == b.t());
    CHECK(a.T() == b.T());
}

TEST_CASE("load accepts commas, whitespace, blank lines and one header row") {
    std::istringstream in("t, T\n\n0, 5\n1\t2.5\n  \n2 1.25\n");
    Dataset d = Dataset::load(in);
    CHECK(d.size() == 3);
    CHECK(d.t() == std::vector<double>{0.0, 1.0, 2.0});
    CHECK(d.T() == std::vector<double>{5.0, 2.5, 1.25});
}

TEST_CASE("load rejects a second non-numeric row and short files") {
    std::istringstream bad("header\n0,1\nwhat,now\n1,2\n");
    CHECK_THROWS_AS(Dataset::load(bad), InputError);
    std::istringstream rows("0,1\n");
    CHECK_THROWS_AS(Dataset::load(rows), InputError);
    std::istringstream empty("");
    CHECK_THROWS_AS(Dataset::load(empty), InputError);
    std::istringstream cols("0,1,2\n1,2,3\n");
    CHECK_THROWS_AS(Dataset::load(cols), InputError);
}

TEST_CASE("load_file reports missing files as input errors") {
    CHECK_THROWS_AS(Dataset::load_file("/definitely/not/here.csv"), InputError);
}

TEST_CASE("serialize round-trips random doubles exactly") {
    expfit::Rng rng(7);
    std::vector<double> t(17), T(17);
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = static_cast<double>(i) + 0.25 * rng.uniform();
        T[i] = 1e3 * (rng.uniform() - 0.5) + 1e-7 * rng.uniform();
    }
    Dataset d(t, T);
    std::ostringstream out;
    d.serialize(out);
    std::istringstream in(out.str());
    Dataset back = Dataset::load(in);
    REQUIRE(back.size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(back.t()[i] == d.t()[i]);
        CHECK(back.T()[i] == d.T()[i]);
    }
}

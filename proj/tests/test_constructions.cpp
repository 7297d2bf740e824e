#include <doctest.h>

#include <cmath>

#include "qsphere/constructions.hpp"
#include "qsphere/error.hpp"

using namespace qsphere;

namespace {

std::uint64_t naive_incidences(const ConstructionResult& c) {
    std::uint64_t n = 0;
    for (const Point& x : c.points.points()) {
        for (const Sphere& s : c.spheres.spheres()) n += c.spheres.form().difference(x, s.center) == s.radius;
    }
    return n;
}

bool meets_simple_bound_exactly(const ConstructionResult& c, std::uint64_t incidences) {
    const auto& f = c.spheres.form().field();
    const std::uint64_t qd = checked_power(f.q(), c.spheres.form().dim());
    return incidences * incidences == qd * c.points.size() * c.spheres.size();
}

}  // namespace

TEST_CASE("single point construction") {
    for (const auto& [q, d, kind, I] : std::vector<std::tuple<std::uint64_t, int, FormKind, std::uint64_t>>{
             {3, 2, FormKind::Q1, 9}, {3, 3, FormKind::Q3, 27}, {5, 2, FormKind::Q2, 25}, {5, 3, FormKind::Q4, 125}}) {
        const Field f = make_field_of_order(q);
        const QuadraticForm form(kind, d, f);
        Point x(static_cast<std::size_t>(d), f.from_int(2));
        const ConstructionResult c = build_single_point(form, x);
        CHECK(c.points.size() == 1);
        CHECK(c.spheres.size() == checked_power(q, d));
        CHECK(naive_incidences(c) == I);
        CHECK(meets_simple_bound_exactly(c, I));
        const ConstructionEvaluation e = evaluate_construction(c);
        CHECK(e.incidences == I);
        CHECK(e.incidences_meet_bound);
        CHECK(e.bound.ratio == doctest::Approx(static_cast<double>(q - 1) / q));
        CHECK(e.warning.empty());
    }
}

TEST_CASE("isotropic construction") {
    for (const auto& [q, d, n, I] : std::vector<std::tuple<std::uint64_t, int, std::uint64_t, std::uint64_t>>{
             {3, 2, 3, 9}, {3, 4, 9, 81}, {5, 4, 25, 625}, {5, 2, 5, 25}}) {
        const Field f = make_field_of_order(q);
        const ConstructionResult c = build_isotropic(f, d);
        CHECK(c.points.size() == n);
        CHECK(c.spheres.size() == n);
        CHECK(naive_incidences(c) == I);
        CHECK(meets_simple_bound_exactly(c, I));
        const ConstructionEvaluation e = evaluate_construction(c);
        CHECK(e.incidences == I);
        CHECK_FALSE(e.expectation_mismatch);
        CHECK(e.bound.ratio == doctest::Approx(static_cast<double>(q - 1) / q));
        // The point set spans a totally isotropic subspace: all pairwise distances vanish.
        for (const Point& a : c.points.points()) {
            for (const Point& b : c.points.points()) CHECK(c.spheres.form().difference(a, b) == f.zero());
        }
    }
    CHECK_THROWS_AS(build_isotropic(make_field(3), 3), Error);
}

TEST_CASE("odd critical construction") {
    const Field f5 = make_field(5);
    const ConstructionResult c = build_odd_critical(f5, 3, FormKind::Q3);
    CHECK(c.points.size() == 25);
    CHECK(c.spheres.size() == 50);
    REQUIRE(c.claimed_incidences.has_value());
    CHECK(*c.claimed_incidences == 600);  // q^{d+1} - q^{(d+1)/2}
    const std::uint64_t oracle = naive_incidences(c);
    CHECK(oracle == 500);
    const ConstructionEvaluation e = evaluate_construction(c);
    CHECK(e.incidences == oracle);
    CHECK(e.claim_mismatch);
    CHECK(e.warning.find("600") != std::string::npos);
    CHECK(e.warning.find("500") != std::string::npos);
    CHECK(e.bound.holds);
    CHECK(e.incidence_ratio == doctest::Approx(500.0 / std::sqrt(125.0 * 25 * 50)));
    // Every sphere radius lies in the critical class.
    for (const Sphere& s : c.spheres.spheres()) CHECK(sign_class(c.spheres.form(), s.radius) == 1);
    CHECK_THROWS_AS(build_odd_critical(f5, 4, FormKind::Q3), Error);

    const ConstructionResult c4 = build_odd_critical(make_field(3), 3, FormKind::Q4);
    CHECK(c4.points.size() == 9);
    CHECK(c4.spheres.size() == 9);
    CHECK(evaluate_construction(c4).incidences == naive_incidences(c4));
}

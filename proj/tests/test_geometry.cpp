#include <doctest.h>

#include <algorithm>
#include <set>

#include "qsphere/error.hpp"
#include "qsphere/geometry.hpp"
#include "qsphere/random.hpp"

using namespace qsphere;

namespace {

Point pt(const Field& f, std::initializer_list<int> xs) {
    Point out;
    for (const int x : xs) out.push_back(f.from_int(x));
    return out;
}

Point zero_point(const Field& f, int d) { return Point(static_cast<std::size_t>(d), f.zero()); }

const std::vector<FormKind> kAllKinds{FormKind::Q1, FormKind::Q2, FormKind::Q3, FormKind::Q4, FormKind::Norm};

// Counting the intersection of two spheres point by point, without the library enumerators.
std::uint64_t naive_intersection(const QuadraticForm& form, const Point& c1, FieldElement r1, const Point& c2,
                                 FieldElement r2) {
    const PointSpace space(form.field(), form.dim());
    std::uint64_t n = 0;
    for (std::uint64_t i = 0; i < space.size(); ++i) {
        const Point x = space.point(i);
        if (form.difference(x, c1) == r1 && form.difference(x, c2) == r2) ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("point space enumeration") {
    const Field f3 = make_field(3);
    const PointSpace space(f3, 3);
    CHECK(space.size() == 27);
    Point x = zero_point(f3, 3);
    std::uint64_t i = 0;
    do {
        CHECK(space.index(x) == i);
        CHECK(space.point(i) == x);
        ++i;
    } while (space.next(x));
    CHECK(i == 27);
    CHECK_THROWS_AS(PointSpace(f3, 20, 1000), Error);
}

TEST_CASE("membership and brute sphere examples") {
    const Field f3 = make_field(3);
    const QuadraticForm q3(FormKind::Q3, 3, f3);
    CHECK(sphere_contains(Sphere(q3, pt(f3, {1, 2, 0}), f3.zero()), pt(f3, {1, 2, 0})));
    CHECK(sphere_contains(Sphere(q3, zero_point(f3, 3), f3.one()), pt(f3, {1, 1, 0})));
    CHECK_FALSE(sphere_contains(Sphere(q3, zero_point(f3, 3), f3.one()), pt(f3, {0, 0, 0})));

    const QuadraticForm q1(FormKind::Q1, 2, f3);
    auto pts = sphere_points_brute(Sphere(q1, zero_point(f3, 2), f3.one()));
    std::sort(pts.begin(), pts.end());
    CHECK(pts == std::vector<Point>{pt(f3, {1, 1}), pt(f3, {2, 2})});
    CHECK(sphere_points_brute(Sphere(q1, zero_point(f3, 2), f3.zero())).size() == 5);
    CHECK(sphere_points_brute(Sphere(q3, zero_point(f3, 3), f3.one())).size() == 6);
}

TEST_CASE("sphere size formula examples") {
    const Field f3 = make_field(3);
    CHECK(sphere_size_formula(FormKind::Q3, 3, f3, f3.one()) == 6);
    CHECK(sphere_size_formula(FormKind::Q3, 3, f3, f3.zero()) == 9);
    CHECK(sphere_size_formula(FormKind::Q1, 2, f3, f3.zero()) == 5);
}

TEST_CASE("sphere sizes match enumeration for every kind and radius") {
    for (const std::uint64_t q : {3ULL, 5ULL, 7ULL, 9ULL}) {
        const Field f = make_field_of_order(q);
        for (int d = 2; d <= 5; ++d) {
            if (checked_power(q, d) > 20000) continue;
            for (const FormKind kind : kAllKinds) {
                if (!kind_supports_dimension(kind, d)) continue;
                const QuadraticForm form(kind, d, f);
                const auto sizes = level_set_sizes(form);
                std::uint64_t total = 0;
                for (const auto r : f.elements()) {
                    CAPTURE(q);
                    CAPTURE(d);
                    CAPTURE(r.index);
                    CHECK(static_cast<std::int64_t>(sizes[r.index]) == sphere_size_formula(form, r));
                    total += sizes[r.index];
                }
                CHECK(total == checked_power(q, d));
            }
        }
    }
}

TEST_CASE("discriminant identities") {
    for (const std::uint64_t q : odd_prime_powers(27)) {
        const Field f = make_field_of_order(q);
        const FieldElement four = f.from_int(4);
        for (const auto t : f.elements()) {
            for (const auto r : f.elements()) {
                CHECK(discriminant_D(f, t, r, r) == f.mul(t, f.sub(t, f.mul(four, r))));
                CHECK(discriminant_D(f, f.zero(), t, r) == f.square(f.sub(t, r)));
                CHECK(discriminant_D(f, f.mul(four, r), r, r) == f.zero());
                for (const auto r2 : f.elements()) CHECK(discriminant_D(f, t, r, r2) == discriminant_D(f, t, r2, r));
            }
        }
    }
}

TEST_CASE("intersection table examples") {
    const Field f3 = make_field(3);
    CHECK(intersection_size_formula(FormKind::Q1, 4, f3, f3.one(), f3.one(), f3.zero()) == 6);
    CHECK(intersection_size_formula(FormKind::Q1, 4, f3, f3.zero(), f3.zero(), f3.zero()) == 15);
    // q^{d-2} + (-1)^i eta(-t) q^{(d-3)/2} with i = 3: t=1 gives 3 + 1, t=2 gives 3 - 1.
    CHECK(intersection_size_formula(FormKind::Q3, 3, f3, f3.zero(), f3.zero(), f3.from_int(1)) == 4);
    CHECK(intersection_size_formula(FormKind::Q3, 3, f3, f3.zero(), f3.zero(), f3.from_int(2)) == 2);
    CHECK(classify_intersection(f3, f3.from_int(1), f3.zero(), f3.zero()).row == TableRow::DiscriminantSquare);
    CHECK_THROWS_AS(intersection_size_formula(FormKind::Q1, 2, f3, f3.one(), f3.one(), f3.zero()), Error);

    const QuadraticForm q1(FormKind::Q1, 4, f3);
    const Point c2 = find_center_at_distance(q1, f3.zero());
    CHECK(c2 != zero_point(f3, 4));
    CHECK(q1(c2) == f3.zero());
    const Sphere s1(q1, zero_point(f3, 4), f3.one()), s2(q1, c2, f3.one());
    CHECK(intersection_size_brute(s1, s2) == 6);
    CHECK(intersection_size(s1, s2) == 6);
    CHECK_THROWS_AS(intersection_size_brute(s1, s1), Error);
    CHECK_THROWS_AS(intersection_size(s1, s1), Error);
    // Concentric spheres with different radii share no point.
    const Sphere s3(q1, zero_point(f3, 4), f3.from_int(2));
    CHECK(intersection_size(s1, s3) == 0);
    CHECK(intersection_size_brute(s1, s3) == 0);
}

TEST_CASE("intersection formulas match point-by-point counting") {
    // Random centers rather than the canonical witness used by the harness.
    Rng rng(2024);
    for (const auto& [q, d] : std::vector<std::pair<std::uint64_t, int>>{{3, 3}, {5, 3}, {3, 4}, {9, 3}, {3, 5}}) {
        const Field f = make_field_of_order(q);
        const PointSpace space(f, d);
        for (const FormKind kind : kAllKinds) {
            if (!kind_supports_dimension(kind, d)) continue;
            const QuadraticForm form(kind, d, f);
            for (int trial = 0; trial < 40; ++trial) {
                const Point c1 = space.point(rng.below(space.size()));
                const Point c2 = space.point(rng.below(space.size()));
                const FieldElement r1{static_cast<std::uint32_t>(rng.below(q))};
                const FieldElement r2{static_cast<std::uint32_t>(rng.below(q))};
                if (c1 == c2 && r1 == r2) continue;
                const auto expected = static_cast<std::int64_t>(naive_intersection(form, c1, r1, c2, r2));
                CHECK(intersection_size(Sphere(form, c1, r1), Sphere(form, c2, r2)) == expected);
                if (c1 != c2) {
                    CHECK(intersection_size_formula(kind, d, f, r1, r2, form.difference(c1, c2)) == expected);
                }
            }
        }
    }
}

TEST_CASE("fiber profiles") {
    for (const std::uint64_t q : {3ULL, 5ULL, 7ULL, 9ULL, 11ULL, 13ULL}) {
        const Field f = make_field_of_order(q);
        for (const auto t : f.elements()) {
            for (const auto r1 : f.elements()) {
                for (const auto r2 : f.elements()) {
                    // Recompute f(x) = t x^2 - (r1 - r2 + t) x + r1 directly.
                    FiberProfile oracle;
                    const FieldElement b = f.add(f.sub(r1, r2), t);
                    for (const auto x : f.elements()) {
                        const FieldElement fx = f.add(f.sub(f.mul(t, f.square(x)), f.mul(b, x)), r1);
                        ++oracle.counts[static_cast<std::size_t>(f.eta(f.neg(fx)) + 1)];
                    }
                    const FiberProfile profile = fiber_profile(f, r1, r2, t);
                    CHECK(profile == oracle);
                    const auto cls = classify_intersection(f, t, r1, r2);
                    const int eta_t = f.eta(f.neg(t));
                    switch (cls.row) {
                        case TableRow::ZeroDistanceEqualRadii:
                            CHECK(profile.count(f.eta(f.neg(r1))) == q);
                            break;
                        case TableRow::DiscriminantZero:
                            CHECK(profile.count(eta_t) == q - 1);
                            CHECK(profile.count(0) == 1);
                            break;
                        case TableRow::DiscriminantSquare:
                            CHECK(profile.count(0) == 2);
                            CHECK(profile.count(eta_t) == (q - 3) / 2);
                            CHECK(profile.count(-eta_t) == (q - 1) / 2);
                            break;
                        default: break;
                    }
                }
            }
        }
    }
}

TEST_CASE("sign class") {
    const Field f3 = make_field(3);
    CHECK(sign_class(QuadraticForm(FormKind::Q3, 3, f3), f3.one()) == -1);
    CHECK(sign_class(QuadraticForm(FormKind::Q4, 3, f3), f3.one()) == 1);
    CHECK(sign_class(QuadraticForm(FormKind::Q3, 3, f3), f3.zero()) == 0);
    CHECK(sign_class(QuadraticForm(FormKind::Q4, 5, f3), f3.zero()) == 0);
    CHECK_THROWS_AS(sign_class(QuadraticForm(FormKind::Q1, 2, f3), f3.one()), Error);
}

TEST_CASE("bisector counts") {
    const Field f3 = make_field(3), f5 = make_field(5);
    CHECK(bisector_count_brute(QuadraticForm(FormKind::Q1, 2, f3), pt(f3, {0, 0}), pt(f3, {1, 0})) == 3);
    CHECK(bisector_count_brute(QuadraticForm(FormKind::Q2, 2, f5), pt(f5, {0, 0}), pt(f5, {2, 3})) == 5);
    const QuadraticForm q3(FormKind::Q3, 3, f3);
    const BisectorSweep sweep = bisector_sweep_exhaustive(q3);
    CHECK(sweep.pairs == 27 * 26 / 2);
    CHECK(sweep.mismatches == 0);
    CHECK_THROWS_AS(bisector_count_brute(q3, pt(f3, {1, 1, 1}), pt(f3, {1, 1, 1})), Error);
}

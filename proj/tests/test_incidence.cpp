#include <doctest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "qsphere/constructions.hpp"
#include "qsphere/error.hpp"
#include "qsphere/incidence.hpp"
#include "qsphere/random.hpp"

using namespace qsphere;
using Decimal = boost::multiprecision::cpp_dec_float_50;

namespace {

Point pt(const Field& f, std::initializer_list<int> xs) {
    Point out;
    for (const int x : xs) out.push_back(f.from_int(x));
    return out;
}

std::uint64_t naive_incidences(const PointSet& points, const SphereSet& spheres) {
    std::uint64_t n = 0;
    for (const Point& x : points.points()) {
        for (const Sphere& s : spheres.spheres()) n += spheres.form().difference(x, s.center) == s.radius;
    }
    return n;
}

Decimal dec(const Rational& r) { return Decimal(numerator(r)) / Decimal(denominator(r)); }

// Right-hand sides evaluated in 50-digit floating point, independent of the exact decision code.
Decimal float_rhs(TheoremId id, std::uint64_t q, int d, double P, double S, double R) {
    using boost::multiprecision::pow;
    using boost::multiprecision::sqrt;
    const Decimal Q(q), p(P), s(S);
    switch (id) {
        case TheoremId::IR_1_1: return 2 * sqrt(pow(Q, d - 1) * p * s);
        case TheoremId::MULTI_1_2: return 2 * sqrt(pow(Q, d - 1) * Decimal(R) * p * s);
        case TheoremId::SIMPLE_1_3: return sqrt(pow(Q, d) * p * s);
        case TheoremId::ODD_RESTRICTED_1_12:
            return pow(Q, Decimal(d - 1) / 2) * sqrt(p * s) + sqrt(Decimal(3)) * pow(Q, Decimal(d - 3) / 4) * sqrt(p) * s;
        case TheoremId::ZERO_ODD_4_3: return sqrt((1 + sqrt(Decimal(2))) * pow(Q, d - 1) * p * s);
        case TheoremId::NEW_IR_4_5: return 3 * pow(Q, Decimal(d - 1) / 2) * sqrt(p * s);
        default: return 0;
    }
}

std::vector<FieldElement> nonzero_elements(const Field& f) {
    std::vector<FieldElement> out;
    for (const auto x : f.elements()) {
        if (x != f.zero()) out.push_back(x);
    }
    return out;
}

}  // namespace

TEST_CASE("incidence counting and deviation") {
    const Field f3 = make_field(3);
    const QuadraticForm q1(FormKind::Q1, 2, f3);
    const ConstructionResult single = build_single_point(q1, pt(f3, {0, 0}));
    CHECK(count_incidences(PointSet(2), single.spheres) == 0);
    CHECK(deviation(PointSet(2), single.spheres) == 0);
    CHECK(count_incidences(single.points, single.spheres) == 9);
    CHECK(deviation(single.points, single.spheres) == 6);
    const ConstructionResult iso = build_isotropic(f3, 4);
    CHECK(deviation(iso.points, iso.spheres) == 54);

    // All points of one sphere.
    const QuadraticForm q3(FormKind::Q3, 3, f3);
    SphereSet one(q3);
    one.insert(pt(f3, {1, 0, 2}), f3.one());
    PointSet on(3, sphere_points_brute(one.spheres().front()));
    CHECK(static_cast<std::int64_t>(count_incidences(on, one)) == sphere_size_formula(q3, f3.one()));

    Rng rng(11);
    const PointSpace space(f3, 3);
    for (int trial = 0; trial < 50; ++trial) {
        const PointSet P = random_point_set(rng, space, rng.below(28));
        const SphereSet S = random_sphere_set(rng, q3, space, f3.elements(), 1 + rng.below(40));
        CHECK(count_incidences(P, S) == naive_incidences(P, S));
        const Rational expect = Rational(static_cast<long long>(naive_incidences(P, S))) -
                                Rational(static_cast<long long>(P.size() * S.size()), 3);
        CHECK(deviation(P, S) == abs(expect));
    }
    CHECK(to_exact_string(Rational(7, 3)) == "7/3");
    CHECK(to_exact_string(Rational(-4)) == "-4");
}

TEST_CASE("point and sphere sets reject duplicates") {
    const Field f5 = make_field(5);
    PointSet P(2);
    CHECK(P.insert(pt(f5, {1, 2})));
    CHECK_FALSE(P.insert(pt(f5, {1, 2})));
    CHECK(P.contains(pt(f5, {1, 2})));
    SphereSet S(QuadraticForm(FormKind::Q2, 2, f5));
    CHECK(S.insert(pt(f5, {0, 0}), f5.one()));
    CHECK_FALSE(S.insert(pt(f5, {0, 0}), f5.one()));
    CHECK(S.insert(pt(f5, {0, 0}), f5.zero()));
    CHECK(S.radii().size() == 2);
}

TEST_CASE("graph inequality") {
    BipartiteGraph k22{2, 2, {1, 1, 1, 1}};
    const std::vector<std::size_t> all{0, 1};
    const BoundReport r = check_thomason(k22, Rational(1), all);
    CHECK(r.lhs == 0);
    CHECK(r.rhs == "8");
    CHECK(r.holds);
    BipartiteGraph empty{3, 3, std::vector<std::uint8_t>(9, 0)};
    CHECK_THROWS_AS(check_thomason(empty, Rational(1, 3), all), Error);
    CHECK_THROWS_AS(check_thomason(k22, Rational(1, 3), all), Error);  // below 1/|L|

    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const BipartiteGraph g = random_bipartite_graph(rng, 5, 6);
        const std::uint64_t E = g.edge_count();
        if (E < g.right) continue;
        std::vector<std::size_t> subset;
        for (std::size_t u = 0; u < g.right; ++u) {
            if (rng.coin()) subset.push_back(u);
        }
        for (const Rational& p : {Rational(1, 5), Rational(E, 30)}) {
            // Literal double sum over ordered pairs v1 != v2.
            Rational pair_sum = 0;
            for (std::size_t u = 0; u < g.right; ++u) {
                for (std::size_t v1 = 0; v1 < g.left; ++v1) {
                    for (std::size_t v2 = 0; v2 < g.left; ++v2) {
                        if (v1 != v2) pair_sum += Rational(g.edge(v1, u) && g.edge(v2, u) ? 1 : 0) - p * p;
                    }
                }
            }
            Rational e_lr = 0;
            for (const auto u : subset) {
                for (std::size_t v = 0; v < g.left; ++v) e_lr += g.edge(v, u);
            }
            const Rational gap = e_lr - p * 5 * static_cast<long long>(subset.size());
            const Rational rhs = Rational(static_cast<long long>(subset.size())) * (pair_sum + Rational(E));
            const BoundReport rep = check_thomason(g, p, subset);
            CHECK(rep.lhs == gap * gap);
            CHECK(rep.rhs == to_exact_string(rhs));
            CHECK(rep.holds);
        }
    }
}

TEST_CASE("weighted bound against pairwise intersection oracle") {
    const Field f5 = make_field(5);
    const QuadraticForm q3(FormKind::Q3, 3, f5);
    const PointSpace space(f5, 3);
    Rng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        const FieldElement r = trial % 3 == 0 ? f5.zero() : f5.from_int(1 + static_cast<int>(rng.below(4)));
        const std::int64_t N = sphere_size_formula(q3, r) - 25;
        const PointSet P = random_point_set(rng, space, rng.below(60));
        const SphereSet S = random_sphere_set(rng, q3, space, {r}, 1 + rng.below(12));
        Rational pair_sum = 0;
        const Rational p = Rational(1, 5) + Rational(N, 125);
        for (const Sphere& a : S.spheres()) {
            for (const Sphere& b : S.spheres()) {
                if (a == b) continue;
                pair_sum += Rational(static_cast<long long>(intersection_size_brute(a, b))) - 125 * p * p;
            }
        }
        const Rational n = static_cast<long long>(P.size()), m = static_cast<long long>(S.size());
        const Rational gap = Rational(static_cast<long long>(naive_incidences(P, S))) - p * n * m;
        const Rational rhs = n * pair_sum + n * m * (25 + N);
        const BoundReport rep = check_general_weighted(P, S, N);
        CHECK(rep.lhs == gap * gap);
        CHECK(rep.rhs == to_exact_string(rhs));
        CHECK(rep.holds);
        if (S.size() == 1) CHECK(rhs == n * (25 + N));
    }
    SphereSet mixed(q3);
    mixed.insert(pt(f5, {0, 0, 0}), f5.zero());
    mixed.insert(pt(f5, {0, 0, 0}), f5.one());
    CHECK_THROWS_AS(check_general_weighted(PointSet(3), mixed, 0), Error);
}

TEST_CASE("bound decisions agree with high-precision evaluation") {
    const std::vector<TheoremId> ids{TheoremId::IR_1_1,         TheoremId::MULTI_1_2,    TheoremId::SIMPLE_1_3,
                                     TheoremId::ODD_RESTRICTED_1_12, TheoremId::ZERO_ODD_4_3, TheoremId::NEW_IR_4_5};
    Rng rng(1234);
    int compared = 0;
    for (const auto& [q, d] : std::vector<std::pair<std::uint64_t, int>>{{3, 2}, {5, 2}, {3, 3}, {5, 3}, {3, 4}, {3, 5}}) {
        const Field f = make_field_of_order(q);
        const PointSpace space(f, d);
        for (const FormKind kind : {FormKind::Q1, FormKind::Q2, FormKind::Q3, FormKind::Q4, FormKind::Norm}) {
            if (!kind_supports_dimension(kind, d)) continue;
            const QuadraticForm form(kind, d, f);
            for (const TheoremId id : ids) {
                for (int trial = 0; trial < 30; ++trial) {
                    std::vector<FieldElement> radii;
                    switch (id) {
                        case TheoremId::IR_1_1:
                        case TheoremId::NEW_IR_4_5: radii = {f.from_int(1 + static_cast<int>(rng.below(q - 1)))}; break;
                        case TheoremId::MULTI_1_2: radii = nonzero_elements(f); break;
                        case TheoremId::ZERO_ODD_4_3: radii = {f.zero()}; break;
                        case TheoremId::ODD_RESTRICTED_1_12:
                            if (d % 2 == 0) continue;
                            for (const auto x : nonzero_elements(f)) {
                                if (sign_class(form, x) == -1) radii.push_back(x);
                            }
                            break;
                        default: radii = f.elements(); break;
                    }
                    const SphereSet S = random_sphere_set(rng, form, space, radii, 1 + rng.below(30));
                    const PointSet P = random_point_set(rng, space, rng.below(std::min<std::uint64_t>(space.size(), 60)));
                    const BoundReport rep = check_bound(id, P, S);
                    if (!rep.hypotheses_met) continue;
                    const Decimal rhs = float_rhs(id, q, d, static_cast<double>(P.size()), static_cast<double>(S.size()),
                                                  static_cast<double>(S.radii().size()));
                    const Decimal lhs = dec(rep.lhs);
                    ++compared;
                    const bool strict = id == TheoremId::ZERO_ODD_4_3 || id == TheoremId::NEW_IR_4_5;
                    CHECK(rep.holds == (lhs == 0 || (strict ? lhs < rhs : lhs <= rhs)));
                    if (lhs > 0) CHECK(rep.ratio == doctest::Approx(static_cast<double>(lhs / rhs)).epsilon(1e-9));
                    CHECK(rep.holds);
                }
            }
        }
    }
    CHECK(compared > 500);
}

TEST_CASE("theorem examples and hypothesis filtering") {
    for (const std::uint64_t q : {3ULL, 5ULL}) {
        for (const int d : {2, 3}) {
            const Field f = make_field_of_order(q);
            const QuadraticForm form(d == 2 ? FormKind::Q1 : FormKind::Q3, d, f);
            const ConstructionResult c = build_single_point(form, Point(static_cast<std::size_t>(d), f.one()));
            const BoundReport rep = check_bound(TheoremId::SIMPLE_1_3, c.points, c.spheres);
            CHECK(rep.holds);
            CHECK(rep.ratio == doctest::Approx(static_cast<double>(q - 1) / q));
        }
    }
    const Field f5 = make_field(5);
    const QuadraticForm q3(FormKind::Q3, 3, f5);
    SphereSet two_radii(q3);
    two_radii.insert(pt(f5, {0, 0, 0}), f5.one());
    two_radii.insert(pt(f5, {0, 0, 1}), f5.from_int(2));
    const PointSet empty(3);
    CHECK_FALSE(check_bound(TheoremId::IR_1_1, empty, two_radii).hypotheses_met);
    CHECK_FALSE(check_bound(TheoremId::NEW_IR_4_5, empty, two_radii).hypotheses_met);
    CHECK_FALSE(check_bound(TheoremId::ZERO_ODD_4_3, empty, two_radii).hypotheses_met);
    CHECK_FALSE(check_bound(TheoremId::SMALL_S_1_9a, empty, two_radii).hypotheses_met);
    CHECK_FALSE(check_bound(TheoremId::IR_1_1, empty, SphereSet(QuadraticForm(FormKind::Q4, 3, f5))).hypotheses_met);
    const BoundReport simple = check_bound(TheoremId::SIMPLE_1_3, empty, two_radii);
    CHECK(simple.lhs == 0);
    CHECK(simple.holds);
    // eta(-1) = 1 and eta(-2) = -1 in GF(5): the two spheres differ in size.
    CHECK_FALSE(check_bound(TheoremId::GENERAL_2_3, empty, two_radii).hypotheses_met);
    SphereSet same(q3);
    same.insert(pt(f5, {0, 0, 0}), f5.one());
    same.insert(pt(f5, {0, 0, 1}), f5.from_int(4));
    const BoundReport general = check_bound(TheoremId::GENERAL_2_3, empty, same);
    CHECK(general.hypotheses_met);
    CHECK(general.lhs == 0);
    CHECK(general.holds);
    CHECK_THROWS_AS(check_bound(TheoremId::SIMPLE_1_3, PointSet(2), two_radii), Error);
    CHECK(parse_theorem_id("ODD_RESTRICTED_1_12") == TheoremId::ODD_RESTRICTED_1_12);
    CHECK(to_string(TheoremId::SMALL_S_1_9b) == "SMALL_S_1_9b");
}

TEST_CASE("character sum over distances") {
    const Field f5 = make_field(5);
    const QuadraticForm q3(FormKind::Q3, 3, f5);
    CHECK(char_sum_distances(PointSet(3, {pt(f5, {1, 2, 3})}), q3).value == 0);
    // Q3(1,1,0) = 1, a square.
    const CharacterSum two = char_sum_distances(PointSet(3, {pt(f5, {0, 0, 0}), pt(f5, {1, 1, 0})}), q3);
    CHECK(two.value == 2);
    Rng rng(40);
    const PointSpace space(f5, 3);
    for (int trial = 0; trial < 20; ++trial) {
        const PointSet C = random_point_set(rng, space, 40);
        const CharacterSum cs = char_sum_distances(C, q3);
        std::int64_t oracle = 0;
        for (const Point& x : C.points()) {
            for (const Point& y : C.points()) oracle += f5.eta(q3.difference(x, y));
        }
        CHECK(cs.value == oracle);
        CHECK(std::abs(cs.value) <= 1414);
        CHECK(cs.report.holds);
    }
}

TEST_CASE("discriminant lemma") {
    for (const std::uint64_t q : odd_prime_powers(27)) {
        const Field f = make_field_of_order(q);
        const BoundReport r = check_lemma_D_eta(f);
        CHECK(r.lhs == 0);
        CHECK(r.holds);
    }
    const Field f5 = make_field(5);
    for (const auto r : nonzero_elements(f5)) {
        const FieldElement t = f5.mul(f5.from_int(4), r);
        CHECK(discriminant_D(f5, t, r, r) == f5.zero());
        CHECK(f5.eta(t) == f5.eta(r));
    }
}

TEST_CASE("intersection sum decomposition") {
    const Field f3 = make_field(3);
    const QuadraticForm q3(FormKind::Q3, 3, f3);
    SphereSet single(q3);
    single.insert(pt(f3, {0, 0, 0}), f3.one());
    const auto one = intersection_sum_decomposition(single);
    CHECK(one.brute == 0);
    CHECK(one.table == 0);
    SphereSet pair(q3);
    pair.insert(pt(f3, {0, 0, 0}), f3.one());
    pair.insert(find_center_at_distance(q3, f3.zero()), f3.one());
    const auto two = intersection_sum_decomposition(pair);
    // sign class j = -1, q^{(d-1)/2} = 3, two ordered pairs.
    CHECK(two.brute == -6);
    CHECK(two.table == -6);
    CHECK(two.center_identity == -6);

    Rng rng(77);
    for (const auto& [q, d] : std::vector<std::pair<std::uint64_t, int>>{{5, 3}, {3, 3}, {7, 3}, {3, 5}}) {
        const Field f = make_field_of_order(q);
        const PointSpace space(f, d);
        for (const FormKind kind : {FormKind::Q3, FormKind::Q4}) {
            const QuadraticForm form(kind, d, f);
            for (int trial = 0; trial < 10; ++trial) {
                const FieldElement r = f.from_int(1 + static_cast<int>(rng.below(q - 1)));
                const SphereSet S = random_sphere_set(rng, form, space, {r}, 10);
                const auto dec_sum = intersection_sum_decomposition(S);
                std::int64_t oracle = 0;
                for (const Sphere& a : S.spheres()) {
                    for (const Sphere& b : S.spheres()) {
                        if (!(a == b)) oracle += static_cast<std::int64_t>(intersection_size_brute(a, b)) - static_cast<std::int64_t>(checked_power(q, d - 2));
                    }
                }
                CHECK(dec_sum.brute == oracle);
                CHECK(dec_sum.table == oracle);
                CHECK(dec_sum.center_identity == oracle);
            }
        }
    }
    CHECK_THROWS_AS(intersection_sum_decomposition(SphereSet(QuadraticForm(FormKind::Q1, 2, f3))), Error);
    SphereSet mixed(q3);
    mixed.insert(pt(f3, {0, 0, 0}), f3.one());
    mixed.insert(pt(f3, {0, 0, 1}), f3.from_int(2));
    CHECK_THROWS_AS(intersection_sum_decomposition(mixed), Error);
}

TEST_CASE("dilation preserves incidences") {
    const Field f5 = make_field(5);
    const QuadraticForm q2(FormKind::Q2, 2, f5);
    const ConstructionResult c = build_single_point(q2, pt(f5, {1, 3}));
    const auto [P1, S1] = dilate_instance(c.points, c.spheres, f5.one());
    CHECK(P1.points() == c.points.points());
    CHECK(S1.spheres() == c.spheres.spheres());
    for (const auto lambda : nonzero_elements(f5)) {
        const auto [P, S] = dilate_instance(c.points, c.spheres, lambda);
        CHECK(count_incidences(P, S) == 25);
    }
    CHECK_THROWS_AS(dilate_instance(c.points, c.spheres, f5.zero()), Error);
}

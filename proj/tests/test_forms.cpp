#include <doctest.h>

#include <algorithm>

#include "qsphere/error.hpp"
#include "qsphere/forms.hpp"
#include "qsphere/geometry.hpp"

using namespace qsphere;

namespace {

Point pt(const Field& f, std::initializer_list<int> xs) {
    Point out;
    for (const int x : xs) out.push_back(f.from_int(x));
    return out;
}

// Straight-line evaluation over a prime field with integer arithmetic.
long long direct_mod(FormKind kind, const std::vector<long long>& x, long long p, long long eps) {
    const auto d = static_cast<long long>(x.size());
    long long v = 0;
    auto pairs = [&](long long upto) {
        for (long long i = 0; i + 1 < upto; i += 2) v += x[i] * x[i + 1];
    };
    switch (kind) {
        case FormKind::Q1: pairs(d); break;
        case FormKind::Q2: pairs(d - 2); v += x[d - 2] * x[d - 2] - eps * x[d - 1] * x[d - 1]; break;
        case FormKind::Q3: pairs(d - 1); v -= x[d - 1] * x[d - 1]; break;
        case FormKind::Q4: pairs(d - 1); v -= eps * x[d - 1] * x[d - 1]; break;
        case FormKind::Norm:
            for (const long long xi : x) v += xi * xi;
            break;
    }
    return ((v % p) + p) % p;
}

}  // namespace

TEST_CASE("form evaluation examples") {
    const Field f3 = make_field(3), f5 = make_field(5);
    CHECK(QuadraticForm(FormKind::Q1, 4, f3)(pt(f3, {1, 1, 0, 0})) == f3.one());
    CHECK(QuadraticForm(FormKind::Q3, 3, f3)(pt(f3, {0, 0, 1})) == f3.from_int(-1));
    CHECK(QuadraticForm(FormKind::Norm, 2, f5)(pt(f5, {1, 2})) == f5.zero());
    CHECK_THROWS_AS(QuadraticForm(FormKind::Q1, 4, f3)(pt(f3, {1, 1, 0})), Error);
    CHECK_THROWS_AS(QuadraticForm(FormKind::Q1, 3, f3), Error);
    CHECK_THROWS_AS(QuadraticForm(FormKind::Q3, 4, f3), Error);
    CHECK_THROWS_AS(QuadraticForm(FormKind::Q2, 2, f5, f5.from_int(4)), Error);  // 4 is a square
    CHECK(to_string(FormKind::Norm) == "norm");
    CHECK(parse_form_kind("Q3") == FormKind::Q3);
}

TEST_CASE("evaluation matches integer oracle and the matrix") {
    for (const std::uint32_t p : {3U, 5U, 7U}) {
        const Field f = make_field(p);
        for (int d = 2; d <= 5; ++d) {
            for (const FormKind kind : {FormKind::Q1, FormKind::Q2, FormKind::Q3, FormKind::Q4, FormKind::Norm}) {
                if (!kind_supports_dimension(kind, d)) continue;
                const QuadraticForm form(kind, d, f);
                const PointSpace space(f, d);
                if (space.size() > 10000) continue;
                const auto matrix = form.matrix();
                Point x(static_cast<std::size_t>(d), f.zero());
                do {
                    std::vector<long long> xi;
                    for (const auto c : x) xi.push_back(c.index);
                    CHECK(form(x).index == direct_mod(kind, xi, p, form.epsilon().index));
                    CHECK(bilinear_value(f, matrix, x) == form(x));
                } while (space.next(x));
            }
        }
    }
}

TEST_CASE("determinant character") {
    const Field f3 = make_field(3);
    CHECK(form_det_character(QuadraticForm(FormKind::Q3, 3, f3)) == 1);
    CHECK(form_det_character(QuadraticForm(FormKind::Q1, 2, f3)) == -1);
    for (const std::uint64_t q : odd_prime_powers(27)) {
        const Field f = make_field_of_order(q);
        for (int d = 2; d <= 7; ++d) {
            CHECK(form_det_character(QuadraticForm(FormKind::Norm, d, f)) == 1);
            for (const FormKind kind : {FormKind::Q1, FormKind::Q2, FormKind::Q3, FormKind::Q4}) {
                if (!kind_supports_dimension(kind, d)) continue;
                const QuadraticForm form(kind, d, f);
                CAPTURE(q);
                CAPTURE(d);
                const FieldElement det = determinant(f, form.matrix(), d);
                CHECK(det != f.zero());
                CHECK(form_det_character(form) == f.eta(det));
                // (-1)^{d/2} for Q1, negated for Q2; (-1)^{(d+1)/2} for Q3, negated for Q4.
                const int base = f.eta(f.from_int(((d % 2 == 0 ? d / 2 : (d + 1) / 2) % 2 == 0) ? 1 : -1));
                const int expect = (kind == FormKind::Q1 || kind == FormKind::Q3) ? base : -base;
                CHECK(form_det_character(form) == expect);
                CHECK(form_det_character_closed(kind, d, f) == expect);
            }
        }
    }
}

TEST_CASE("determinant of small matrices") {
    const Field f7 = make_field(7);
    const auto m = [&](std::initializer_list<int> xs) {
        std::vector<FieldElement> out;
        for (const int x : xs) out.push_back(f7.from_int(x));
        return out;
    };
    CHECK(determinant(f7, m({2, 3, 1, 4}), 2) == f7.from_int(5));
    CHECK(determinant(f7, m({0, 1, 1, 0}), 2) == f7.from_int(-1));
    CHECK(determinant(f7, m({1, 2, 3, 2, 4, 6, 0, 0, 1}), 3) == f7.zero());
}

TEST_CASE("norm equivalence class matches level-set oracle") {
    CHECK(norm_equivalence_class(2, make_field(3)) == FormKind::Q2);
    CHECK(norm_equivalence_class(4, make_field(3)) == FormKind::Q1);
    CHECK(norm_equivalence_class(3, make_field(5)) == FormKind::Q3);
    // Equivalent forms have equal level-set sizes radius by radius; Q1/Q2 and Q3/Q4 never do.
    for (const std::uint64_t q : {3ULL, 5ULL, 7ULL, 9ULL, 11ULL}) {
        const Field f = make_field_of_order(q);
        for (int d = 2; d <= 5; ++d) {
            if (checked_power(q, d) > 20000) continue;
            CAPTURE(q);
            CAPTURE(d);
            const auto norm_sizes = level_set_sizes(QuadraticForm(FormKind::Norm, d, f));
            std::vector<FormKind> matches;
            for (const FormKind kind : {FormKind::Q1, FormKind::Q2, FormKind::Q3, FormKind::Q4}) {
                if (kind_supports_dimension(kind, d) && level_set_sizes(QuadraticForm(kind, d, f)) == norm_sizes) {
                    matches.push_back(kind);
                }
            }
            REQUIRE(matches.size() == 1);
            CHECK(norm_equivalence_class(d, f) == matches.front());
            CHECK(QuadraticForm(FormKind::Norm, d, f).canonical_kind() == matches.front());
        }
    }
}

TEST_CASE("level sets do not depend on the chosen nonsquare") {
    for (const std::uint64_t q : {3ULL, 5ULL, 7ULL, 9ULL, 13ULL}) {
        const Field f = make_field_of_order(q);
        std::vector<FieldElement> nonsquares;
        for (const auto x : f.elements()) {
            if (f.eta(x) == -1) nonsquares.push_back(x);
        }
        for (int d = 2; d <= 5; ++d) {
            if (checked_power(q, d) > 10000) continue;
            const FormKind kind = d % 2 == 0 ? FormKind::Q2 : FormKind::Q4;
            auto reference = level_set_sizes(QuadraticForm(kind, d, f, nonsquares.front()));
            std::sort(reference.begin(), reference.end());
            for (const auto eps : nonsquares) {
                auto sizes = level_set_sizes(QuadraticForm(kind, d, f, eps));
                std::sort(sizes.begin(), sizes.end());
                CHECK(sizes == reference);
            }
        }
    }
}

#include "qsphere/constructions.hpp"

#include <cmath>

#include "qsphere/error.hpp"

namespace qsphere {

ConstructionResult build_single_point(const QuadraticForm& form, const Point& x) {
    const PointSpace space(form.field(), form.dim());
    PointSet points(form.dim());
    points.insert(x);
    SphereSet spheres(form);
    Point y(static_cast<std::size_t>(form.dim()));
    do {
        spheres.insert(y, form.difference(x, y));
    } while (space.next(y));
    return {"single-point", std::move(points), std::move(spheres), space.size(), std::nullopt,
            "all spheres through one point"};
}

ConstructionResult build_isotropic(const Field& field, int d) {
    if (d % 2 != 0) throw Error(ErrorCode::OddDimension, "isotropic construction needs even d");
    const QuadraticForm form(FormKind::Q1, d, field);
    const PointSpace half(field, d / 2);
    PointSet points(d);
    SphereSet spheres(form);
    Point coords(static_cast<std::size_t>(d / 2));
    do {
        Point x(static_cast<std::size_t>(d), field.zero());
        for (int k = 0; k < d / 2; ++k) x[static_cast<std::size_t>(2 * k)] = coords[static_cast<std::size_t>(k)];
        spheres.insert(x, field.zero());
        points.insert(std::move(x));
    } while (half.next(coords));
    const std::uint64_t expected = points.size() * points.size();
    return {"isotropic", std::move(points), std::move(spheres), expected, std::nullopt,
            "zero-radius spheres centered on a d/2-dimensional isotropic subspace of Q1"};
}

ConstructionResult build_odd_critical(const Field& field, int d, FormKind kind) {
    if (d % 2 == 0) throw Error(ErrorCode::EvenDimension, "odd-critical construction needs odd d");
    if (kind != FormKind::Q3 && kind != FormKind::Q4) {
        throw Error(ErrorCode::ParityMismatch, "odd-critical construction uses Q3 or Q4");
    }
    const QuadraticForm form(kind, d, field);
    const int free = (d - 1) / 2;
    const PointSpace free_space(field, free + 1);
    const int wanted = (form_index(kind) % 2 == 0 ? -1 : 1) * field.eta(field.neg(field.one()));

    std::vector<FieldElement> radii;
    for (const FieldElement r : field.elements()) {
        if (field.eta(r) == wanted) radii.push_back(r);
    }
    PointSet points(d);
    SphereSet spheres(form);
    Point coords(static_cast<std::size_t>(free + 1));
    do {
        Point x(static_cast<std::size_t>(d), field.zero());
        for (int k = 0; k < free; ++k) x[static_cast<std::size_t>(2 * k + 1)] = coords[static_cast<std::size_t>(k)];
        x.back() = coords.back();
        for (const FieldElement r : radii) spheres.insert(x, r);
        points.insert(std::move(x));
    } while (free_space.next(coords));

    const std::uint64_t n = points.size();
    const std::uint64_t claimed = n * (n - 1);
    return {"odd-critical", std::move(points), std::move(spheres), std::nullopt, claimed,
            "claimed count |P|(|P|-1) includes pairs with equal last coordinate, whose distance 0 is not a radius"};
}

ConstructionEvaluation evaluate_construction(const ConstructionResult& c) {
    ConstructionEvaluation out;
    out.incidences = count_incidences(c.points, c.spheres);
    out.bound = check_bound(TheoremId::SIMPLE_1_3, c.points, c.spheres);

    const QuadraticForm& form = c.spheres.form();
    const BigInt bound_square = BigInt(checked_power(form.field().q(), form.dim())) * c.points.size() * c.spheres.size();
    out.incidences_meet_bound = BigInt(out.incidences) * out.incidences == bound_square;
    const double bound_value = std::sqrt(bound_square.convert_to<double>());
    out.incidence_ratio = bound_value > 0 ? static_cast<double>(out.incidences) / bound_value : 0.0;

    if (c.expected_incidences && *c.expected_incidences != out.incidences) {
        out.expectation_mismatch = true;
        out.warning = "ExpectationMismatch: closed form " + std::to_string(*c.expected_incidences) + ", oracle " +
                      std::to_string(out.incidences);
    }
    if (c.claimed_incidences && *c.claimed_incidences != out.incidences) {
        out.claim_mismatch = true;
        if (!out.warning.empty()) out.warning += "; ";
        out.warning += "claimed incidences " + std::to_string(*c.claimed_incidences) + " differ from oracle count " +
                       std::to_string(out.incidences);
    }
    return out;
}

}  // namespace qsphere

#include "qsphere/geometry.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

#include "qsphere/error.hpp"

namespace qsphere {

namespace {

std::int64_t ipow(std::uint64_t q, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= static_cast<std::int64_t>(q);
    return r;
}

int sign_power(int e) { return e % 2 == 0 ? 1 : -1; }

void require_same_form(const Sphere& s1, const Sphere& s2) {
    if (!(s1.form == s2.form)) throw Error(ErrorCode::InvalidArgument, "spheres use different forms");
}

}  // namespace

std::uint64_t default_enumeration_cap() {
    if (const char* env = std::getenv("QSPHERE_ENUM_CAP")) {
        char* end = nullptr;
        const unsigned long long value = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) return value;
    }
    return kDefaultEnumerationCap;
}

std::uint64_t checked_power(std::uint64_t q, int d) noexcept {
    std::uint64_t r = 1;
    for (int i = 0; i < d; ++i) {
        if (r > std::numeric_limits<std::uint64_t>::max() / q) return std::numeric_limits<std::uint64_t>::max();
        r *= q;
    }
    return r;
}

PointSpace::PointSpace(Field field, int d, std::uint64_t cap) : field_(std::move(field)), d_(d) {
    if (d < 1) throw Error(ErrorCode::DimensionTooSmall, "dimension must be positive");
    size_ = checked_power(field_.q(), d);
    if (size_ > cap) {
        throw Error(ErrorCode::TooLarge, "q^d = " + std::to_string(size_) + " exceeds the enumeration cap " +
                                             std::to_string(cap));
    }
}

std::uint64_t PointSpace::index(std::span<const FieldElement> x) const {
    if (x.size() != static_cast<std::size_t>(d_)) throw Error(ErrorCode::DimensionMismatch, "point has wrong dimension");
    std::uint64_t idx = 0;
    for (const FieldElement xi : x) idx = idx * field_.q() + xi.index;
    return idx;
}

Point PointSpace::point(std::uint64_t index) const {
    Point x(static_cast<std::size_t>(d_));
    for (int i = d_ - 1; i >= 0; --i) {
        x[static_cast<std::size_t>(i)] = {static_cast<std::uint32_t>(index % field_.q())};
        index /= field_.q();
    }
    return x;
}

bool PointSpace::next(Point& x) const noexcept {
    for (int i = d_ - 1; i >= 0; --i) {
        auto& c = x[static_cast<std::size_t>(i)].index;
        if (++c < field_.q()) return true;
        c = 0;
    }
    return false;
}

void PointSpace::add(std::span<const FieldElement> x, std::span<const FieldElement> y, Point& out) const noexcept {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = field_.add(x[i], y[i]);
}

void PointSpace::sub(std::span<const FieldElement> x, std::span<const FieldElement> y, Point& out) const noexcept {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = field_.sub(x[i], y[i]);
}

Sphere::Sphere(QuadraticForm f, Point c, FieldElement r) : form(std::move(f)), center(std::move(c)), radius(r) {
    if (center.size() != static_cast<std::size_t>(form.dim())) {
        throw Error(ErrorCode::DimensionMismatch, "center dimension does not match the form");
    }
}

bool Sphere::operator==(const Sphere& other) const noexcept {
    return radius == other.radius && center == other.center && form == other.form;
}

bool sphere_contains(const Sphere& s, std::span<const FieldElement> x) {
    if (x.size() != s.center.size()) throw Error(ErrorCode::DimensionMismatch, "point has wrong dimension");
    return s.form.difference(x, s.center) == s.radius;
}

std::vector<Point> sphere_points_brute(const Sphere& s, std::uint64_t cap) {
    const PointSpace space(s.form.field(), s.form.dim(), cap);
    std::vector<Point> out;
    Point x(static_cast<std::size_t>(s.form.dim()));
    Point diff(x.size());
    do {
        space.sub(x, s.center, diff);
        if (s.form(diff) == s.radius) out.push_back(x);
    } while (space.next(x));
    return out;
}

std::vector<std::uint64_t> level_set_sizes(const QuadraticForm& form, std::uint64_t cap) {
    const PointSpace space(form.field(), form.dim(), cap);
    std::vector<std::uint64_t> sizes(form.field().q(), 0);
    Point x(static_cast<std::size_t>(form.dim()));
    do {
        ++sizes[form(x).index];
    } while (space.next(x));
    return sizes;
}

std::int64_t size_excess(FormKind kind, int d, std::uint64_t q, int chi) {
    const int i = form_index(kind);
    if (i <= 2) {
        if (d < 2 || d % 2 != 0) throw Error(ErrorCode::ParityMismatch, "Q1/Q2 need even dimension");
        if (chi != 0) return sign_power(i) * ipow(q, (d - 2) / 2);
        return sign_power(i + 1) * (ipow(q, d / 2) - ipow(q, (d - 2) / 2));
    }
    if (d < 1 || d % 2 != 1) throw Error(ErrorCode::ParityMismatch, "Q3/Q4 need odd dimension");
    if (chi == 0) return 0;
    return sign_power(i + 1) * chi * ipow(q, (d - 1) / 2);
}

std::int64_t sphere_size_formula(FormKind kind, int d, const Field& field, FieldElement r) {
    if (kind == FormKind::Norm) kind = norm_equivalence_class(d, field);
    if (!kind_supports_dimension(kind, d)) {
        throw Error(ErrorCode::ParityMismatch, std::string(to_string(kind)) + " in dimension " + std::to_string(d));
    }
    return ipow(field.q(), d - 1) + size_excess(kind, d, field.q(), field.eta(field.neg(r)));
}

std::int64_t sphere_size_formula(const QuadraticForm& form, FieldElement r) {
    return sphere_size_formula(form.kind(), form.dim(), form.field(), r);
}

FieldElement discriminant_D(const Field& f, FieldElement t, FieldElement r1, FieldElement r2) {
    const FieldElement squares = f.add(f.add(f.square(t), f.square(r1)), f.square(r2));
    const FieldElement cross = f.add(f.add(f.mul(t, r1), f.mul(t, r2)), f.mul(r1, r2));
    return f.sub(squares, f.add(cross, cross));
}

std::string_view to_string(TableRow row) {
    switch (row) {
        case TableRow::ZeroDistanceZeroRadii: return "t=0,r1=r2=0";
        case TableRow::ZeroDistanceEqualRadii: return "t=0,r1=r2!=0";
        case TableRow::ZeroDistanceDistinctRadii: return "t=0,r1!=r2";
        case TableRow::DiscriminantZero: return "t!=0,D=0";
        case TableRow::DiscriminantSquare: return "t!=0,eta(D)=1";
        case TableRow::DiscriminantNonsquare: return "t!=0,eta(D)=-1";
    }
    return "?";
}

IntersectionClass classify_intersection(const Field& f, FieldElement t, FieldElement r1, FieldElement r2) {
    IntersectionClass c{t, r1, r2, discriminant_D(f, t, r1, r2), TableRow::ZeroDistanceZeroRadii};
    if (t == f.zero()) {
        if (r1 != r2) {
            c.row = TableRow::ZeroDistanceDistinctRadii;
        } else {
            c.row = (r1 == f.zero()) ? TableRow::ZeroDistanceZeroRadii : TableRow::ZeroDistanceEqualRadii;
        }
        return c;
    }
    switch (f.eta(c.D)) {
        case 0: c.row = TableRow::DiscriminantZero; break;
        case 1: c.row = TableRow::DiscriminantSquare; break;
        default: c.row = TableRow::DiscriminantNonsquare; break;
    }
    return c;
}

std::int64_t intersection_excess_formula(FormKind kind, int d, const Field& f, FieldElement r1, FieldElement r2,
                                         FieldElement t) {
    if (kind == FormKind::Norm) kind = norm_equivalence_class(d, f);
    if (d < 3) throw Error(ErrorCode::DimensionTooSmall, "intersection tables need d >= 3");
    if (!kind_supports_dimension(kind, d)) {
        throw Error(ErrorCode::ParityMismatch, std::string(to_string(kind)) + " in dimension " + std::to_string(d));
    }
    const std::uint64_t q = f.q();
    const int i = form_index(kind);
    const TableRow row = classify_intersection(f, t, r1, r2).row;
    if (i <= 2) {
        const std::int64_t h = ipow(q, (d - 2) / 2);
        switch (row) {
            case TableRow::ZeroDistanceZeroRadii: return sign_power(i + 1) * (ipow(q, d / 2) - h);
            case TableRow::ZeroDistanceEqualRadii: return sign_power(i) * h;
            case TableRow::ZeroDistanceDistinctRadii:
            case TableRow::DiscriminantZero: return 0;
            case TableRow::DiscriminantSquare: return sign_power(i + 1) * h;
            case TableRow::DiscriminantNonsquare: return sign_power(i) * h;
        }
    }
    const std::int64_t hi = ipow(q, (d - 1) / 2);
    const std::int64_t lo = ipow(q, (d - 3) / 2);
    const int eta_minus_t = f.eta(f.neg(t));
    switch (row) {
        case TableRow::ZeroDistanceZeroRadii:
        case TableRow::ZeroDistanceDistinctRadii: return 0;
        case TableRow::ZeroDistanceEqualRadii: return sign_power(i + 1) * f.eta(f.neg(r1)) * hi;
        case TableRow::DiscriminantZero: return sign_power(i + 1) * eta_minus_t * (hi - lo);
        case TableRow::DiscriminantSquare:
        case TableRow::DiscriminantNonsquare: return sign_power(i) * eta_minus_t * lo;
    }
    return 0;
}

std::int64_t intersection_size_formula(FormKind kind, int d, const Field& field, FieldElement r1, FieldElement r2,
                                       FieldElement t) {
    return ipow(field.q(), d - 2) + intersection_excess_formula(kind, d, field, r1, r2, t);
}

std::int64_t intersection_size(const Sphere& s1, const Sphere& s2) {
    require_same_form(s1, s2);
    if (s1 == s2) throw Error(ErrorCode::SameSphere, "intersection of a sphere with itself");
    if (s1.center == s2.center) return 0;
    const FieldElement t = s1.form.difference(s1.center, s2.center);
    return intersection_size_formula(s1.form.kind(), s1.form.dim(), s1.form.field(), s1.radius, s2.radius, t);
}

std::uint64_t intersection_size_brute(const Sphere& s1, const Sphere& s2, std::uint64_t cap) {
    require_same_form(s1, s2);
    if (s1 == s2) throw Error(ErrorCode::SameSphere, "intersection of a sphere with itself");
    const QuadraticForm& form = s1.form;
    const PointSpace space(form.field(), form.dim(), cap);
    Point x(static_cast<std::size_t>(form.dim()));
    Point diff(x.size());
    std::uint64_t count = 0;
    do {
        space.sub(x, s1.center, diff);
        if (form(diff) != s1.radius) continue;
        space.sub(x, s2.center, diff);
        if (form(diff) == s2.radius) ++count;
    } while (space.next(x));
    return count;
}

FiberProfile fiber_profile(const Field& f, FieldElement r1, FieldElement r2, FieldElement t) {
    FiberProfile profile;
    const FieldElement linear = f.add(f.sub(r1, r2), t);
    for (const FieldElement x : f.elements()) {
        const FieldElement value = f.add(f.sub(f.mul(t, f.square(x)), f.mul(linear, x)), r1);
        ++profile.counts[static_cast<std::size_t>(f.eta(f.neg(value)) + 1)];
    }
    return profile;
}

std::int64_t excess_from_fiber_profile(FormKind kind, int d, std::uint64_t q, const FiberProfile& profile) {
    if (d < 3) throw Error(ErrorCode::DimensionTooSmall, "fiber reduction needs d >= 3");
    std::int64_t total = 0;
    for (int chi = -1; chi <= 1; ++chi) {
        total += static_cast<std::int64_t>(profile.count(chi)) * size_excess(kind, d - 2, q, chi);
    }
    return total;
}

int sign_class(const QuadraticForm& form, FieldElement r) {
    const FormKind kind = form.canonical_kind();
    if (kind != FormKind::Q3 && kind != FormKind::Q4) {
        throw Error(ErrorCode::ParityMismatch, "sign class is defined for odd-dimensional forms");
    }
    const Field& f = form.field();
    return sign_power(form_index(kind) + 1) * f.eta(f.neg(r));
}

std::uint64_t bisector_count_brute(const QuadraticForm& form, std::span<const FieldElement> x,
                                   std::span<const FieldElement> y, std::uint64_t cap) {
    if (x.size() != static_cast<std::size_t>(form.dim()) || y.size() != x.size()) {
        throw Error(ErrorCode::DimensionMismatch, "point has wrong dimension");
    }
    if (std::equal(x.begin(), x.end(), y.begin())) throw Error(ErrorCode::EqualPoints, "bisector of a point with itself");
    const PointSpace space(form.field(), form.dim(), cap);
    Point z(x.size()), dx(x.size()), dy(x.size());
    std::uint64_t count = 0;
    do {
        space.sub(z, x, dx);
        space.sub(z, y, dy);
        if (form(dx) == form(dy)) ++count;
    } while (space.next(z));
    return count;
}

BisectorSweep bisector_sweep_exhaustive(const QuadraticForm& form, std::uint64_t cap) {
    const PointSpace space(form.field(), form.dim(), cap);
    const std::uint64_t n = space.size();
    if (n > cap / n) throw Error(ErrorCode::TooLarge, "q^{2d} exceeds the enumeration cap");
    // distance[x * n + z] = Q(z - x)
    std::vector<std::uint16_t> distance(n * n);
    Point x(static_cast<std::size_t>(form.dim()));
    Point diff(x.size());
    for (std::uint64_t xi = 0; xi < n; ++xi, space.next(x)) {
        Point z(x.size());
        for (std::uint64_t zi = 0; zi < n; ++zi, space.next(z)) {
            space.sub(z, x, diff);
            distance[xi * n + zi] = static_cast<std::uint16_t>(form(diff).index);
        }
    }
    const std::uint64_t expected = checked_power(form.field().q(), form.dim() - 1);
    BisectorSweep sweep;
    for (std::uint64_t a = 0; a < n; ++a) {
        const std::uint16_t* row_a = distance.data() + a * n;
        for (std::uint64_t b = a + 1; b < n; ++b) {
            const std::uint16_t* row_b = distance.data() + b * n;
            std::uint64_t count = 0;
            for (std::uint64_t z = 0; z < n; ++z) count += (row_a[z] == row_b[z]);
            ++sweep.pairs;
            if (count != expected) ++sweep.mismatches;
        }
    }
    return sweep;
}

Point find_center_at_distance(const QuadraticForm& form, FieldElement t, std::uint64_t cap) {
    const PointSpace space(form.field(), form.dim(), cap);
    Point c(static_cast<std::size_t>(form.dim()));
    while (space.next(c)) {
        if (form(c) == t) return c;
    }
    throw Error(ErrorCode::InvalidArgument, "no nonzero point at the requested distance");
}

}  // namespace qsphere

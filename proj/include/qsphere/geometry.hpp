#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "qsphere/forms.hpp"

namespace qsphere {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// The enumeration cap: QSPHERE_ENUM_CAP when set to a positive integer, else 10^7.
std::uint64_t default_enumeration_cap();

/// Saturating q^d.
std::uint64_t checked_power(std::uint64_t q, int d) noexcept;

/// F_q^d with points indexed lexicographically, x_1 most significant.
class PointSpace {
public:
    PointSpace(Field field, int d, std::uint64_t cap = default_enumeration_cap());

    const Field& field() const noexcept { return field_; }
    int dim() const noexcept { return d_; }
    std::uint64_t size() const noexcept { return size_; }

    std::uint64_t index(std::span<const FieldElement> x) const;
    Point point(std::uint64_t index) const;

    /// Advances x to the next point in enumeration order; false after the last point.
    bool next(Point& x) const noexcept;

    /// x + y and x - y, written to out.
    void add(std::span<const FieldElement> x, std::span<const FieldElement> y, Point& out) const noexcept;
    void sub(std::span<const FieldElement> x, std::span<const FieldElement> y, Point& out) const noexcept;

private:
    Field field_;
    int d_;
    std::uint64_t size_;
};

struct Sphere {
    QuadraticForm form;
    Point center;
    FieldElement radius;

    Sphere(QuadraticForm form, Point center, FieldElement radius);

    bool operator==(const Sphere& other) const noexcept;
};

bool sphere_contains(const Sphere& s, std::span<const FieldElement> x);

/// Every point of s in enumeration order. Throws TooLarge past the cap.
std::vector<Point> sphere_points_brute(const Sphere& s, std::uint64_t cap = default_enumeration_cap());

/// |{x : Q(x) = r}| for every r, indexed by radius; the brute size of every sphere.
std::vector<std::uint64_t> level_set_sizes(const QuadraticForm& form, std::uint64_t cap = default_enumeration_cap());

/// N(Q_i^d, chi) with chi = eta(-r): the deviation of a sphere's size from q^{d-1}.
/// Accepts d >= 1 for Q3/Q4 and d >= 2 for Q1/Q2 (the lower-dimensional forms
/// appear when intersections are reduced by two dimensions).
std::int64_t size_excess(FormKind kind, int d, std::uint64_t q, int chi);

/// q^{d-1} + N(Q, eta(-r)); Norm delegates through norm_equivalence_class.
std::int64_t sphere_size_formula(FormKind kind, int d, const Field& field, FieldElement r);
std::int64_t sphere_size_formula(const QuadraticForm& form, FieldElement r);

FieldElement discriminant_D(const Field& field, FieldElement t, FieldElement r1, FieldElement r2);

/// Rows of the intersection tables, in table order.
enum class TableRow : int {
    ZeroDistanceZeroRadii = 0,   // t = 0, r1 = r2 = 0
    ZeroDistanceEqualRadii = 1,  // t = 0, r1 = r2 != 0
    ZeroDistanceDistinctRadii = 2,  // t = 0, r1 != r2
    DiscriminantZero = 3,        // t != 0, D = 0
    DiscriminantSquare = 4,      // t != 0, eta(D) = 1
    DiscriminantNonsquare = 5,   // t != 0, eta(D) = -1
};
inline constexpr int kTableRows = 6;

std::string_view to_string(TableRow row);

struct IntersectionClass {
    FieldElement t;
    FieldElement r1;
    FieldElement r2;
    FieldElement D;
    TableRow row;
};

IntersectionClass classify_intersection(const Field& field, FieldElement t, FieldElement r1, FieldElement r2);

/// N_2(Q_i^d, r1, r2, t) from the tables. Requires d >= 3.
std::int64_t intersection_excess_formula(FormKind kind, int d, const Field& field, FieldElement r1, FieldElement r2,
                                         FieldElement t);

/// q^{d-2} + N_2 for two spheres with distinct centers at distance t.
/// Throws DimensionTooSmall for d = 2 and ParityMismatch for a kind/dimension clash.
std::int64_t intersection_size_formula(FormKind kind, int d, const Field& field, FieldElement r1, FieldElement r2,
                                       FieldElement t);

/// |s1 ∩ s2| from the closed forms; concentric distinct spheres are disjoint.
std::int64_t intersection_size(const Sphere& s1, const Sphere& s2);

/// |s1 ∩ s2| by exhaustive enumeration. Throws SameSphere or TooLarge.
std::uint64_t intersection_size_brute(const Sphere& s1, const Sphere& s2,
                                      std::uint64_t cap = default_enumeration_cap());

/// Multiset {eta(-f(x)) : x in F_q} for f(x) = t x^2 - (r1 - r2 + t) x + r1,
/// stored as counts indexed by value + 1.
struct FiberProfile {
    std::array<std::uint64_t, 3> counts{};

    std::uint64_t count(int chi) const { return counts[static_cast<std::size_t>(chi + 1)]; }
    bool operator==(const FiberProfile&) const = default;
};

FiberProfile fiber_profile(const Field& field, FieldElement r1, FieldElement r2, FieldElement t);

/// sum over the profile of N(Q_i^{d-2}, chi); equals N_2(Q_i^d, r1, r2, t).
std::int64_t excess_from_fiber_profile(FormKind kind, int d, std::uint64_t q, const FiberProfile& profile);

/// (-1)^{i+1} eta(-r) for an odd-dimensional form (Norm via its equivalent kind).
int sign_class(const QuadraticForm& form, FieldElement r);

/// #{z : Q(z - x) = Q(z - y)}: the number of spheres through both x and y.
std::uint64_t bisector_count_brute(const QuadraticForm& form, std::span<const FieldElement> x,
                                   std::span<const FieldElement> y, std::uint64_t cap = default_enumeration_cap());

struct BisectorSweep {
    std::uint64_t pairs = 0;
    std::uint64_t mismatches = 0;
};

/// Bisector counts for every unordered pair of distinct points, compared to q^{d-1}.
/// Stores Q(z - x) for all (x, z), so q^{2d} must fit the cap.
BisectorSweep bisector_sweep_exhaustive(const QuadraticForm& form, std::uint64_t cap = default_enumeration_cap());

/// The first point c != 0 in enumeration order with Q(c) = t.
Point find_center_at_distance(const QuadraticForm& form, FieldElement t, std::uint64_t cap = default_enumeration_cap());

}  // namespace qsphere

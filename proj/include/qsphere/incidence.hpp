#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qsphere/geometry.hpp"

namespace qsphere {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact rendering: an integer, or "num/den" in lowest terms.
std::string to_exact_string(const Rational& value);
double to_double(const Rational& value);

/// A duplicate-free set of points of one dimension, kept in insertion order.
class PointSet {
public:
    explicit PointSet(int d) : d_(d) {}
    PointSet(int d, std::vector<Point> points);

    /// Adds x unless present; returns whether it was added.
    bool insert(Point x);
    bool contains(std::span<const FieldElement> x) const;

    int dim() const noexcept { return d_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const std::vector<Point>& points() const noexcept { return points_; }

private:
    int d_;
    std::vector<Point> points_;
    std::set<Point> index_;
};

/// A duplicate-free set of spheres over one common form.
class SphereSet {
public:
    explicit SphereSet(QuadraticForm form) : form_(std::move(form)) {}

    bool insert(Point center, FieldElement radius);
    bool insert(const Sphere& s);

    const QuadraticForm& form() const noexcept { return form_; }
    std::size_t size() const noexcept { return spheres_.size(); }
    bool empty() const noexcept { return spheres_.empty(); }
    const std::vector<Sphere>& spheres() const noexcept { return spheres_; }
    /// Distinct radii in ascending index order.
    std::vector<FieldElement> radii() const;

private:
    QuadraticForm form_;
    std::vector<Sphere> spheres_;
    std::set<std::pair<Point, std::uint32_t>> index_;
};

enum class TheoremId {
    IR_1_1,
    MULTI_1_2,
    SIMPLE_1_3,
    SMALL_S_1_9a,
    SMALL_S_1_9b,
    SMALL_S_1_9c,
    ODD_RESTRICTED_1_12,
    ZERO_ODD_4_3,
    NEW_IR_4_5,
    THOMASON_2_1,
    GENERAL_2_3,
    CHARSUM_4_2,
    D_ETA_4_4,
};

std::string_view to_string(TheoremId id);
TheoremId parse_theorem_id(std::string_view text);

/// Outcome of one inequality check. lhs is exact; rhs is rendered exactly when
/// rational and as a fixed-precision decimal otherwise.
struct BoundReport {
    TheoremId theorem = TheoremId::SIMPLE_1_3;
    std::uint64_t q = 0;
    int d = 0;
    std::string form;
    std::uint64_t n_points = 0;
    std::uint64_t n_spheres = 0;
    Rational lhs;
    std::string rhs;
    double rhs_value = 0.0;
    double ratio = 0.0;
    bool holds = false;
    bool hypotheses_met = true;
    std::uint64_t seed = 0;
    std::string note;
};

/// Brute-force facts about one form, computed once by enumerating F_q^d: the
/// level sets {v : Q(v) = r}, hence every sphere's point set as a translate.
class FormOracle {
public:
    explicit FormOracle(QuadraticForm form, std::uint64_t cap = default_enumeration_cap());

    const QuadraticForm& form() const noexcept { return form_; }
    const PointSpace& space() const noexcept { return space_; }
    std::uint64_t sphere_size(FieldElement r) const { return level_sets_[r.index].size(); }
    const std::vector<Point>& level_set(FieldElement r) const { return level_sets_[r.index]; }

    /// sum over ordered pairs s1 != s2 of |s1 ∩ s2|, by counting how many
    /// spheres cover each point of F_q^d.
    BigInt pair_intersection_sum(const SphereSet& spheres) const;

private:
    QuadraticForm form_;
    PointSpace space_;
    std::vector<std::vector<Point>> level_sets_;
};

std::uint64_t count_incidences(const PointSet& points, const SphereSet& spheres);

/// |I(P,S) - |P||S|/q|, exact.
Rational deviation(const PointSet& points, const SphereSet& spheres);

struct BipartiteGraph {
    std::size_t left = 0;
    std::size_t right = 0;
    std::vector<std::uint8_t> adjacency;  // left x right, row-major

    bool edge(std::size_t v, std::size_t u) const { return adjacency[v * right + u] != 0; }
    std::uint64_t edge_count() const;
};

/// (E(L,R) - p|L||R|)^2 against |R|(sum_u sum_{v1!=v2}(1_{v1~u}1_{v2~u} - p^2) + E(L,U)).
/// Throws PNotInRange unless 1/|L| <= p <= E(L,U)/(|L||U|).
BoundReport check_thomason(const BipartiteGraph& graph, const Rational& p, std::span<const std::size_t> subset);

/// The weighted bound for spheres all of size q^{d-1}+N, with p = 1/q + N/q^d.
/// Sphere sizes are checked by enumeration; throws MixedSphereSizes otherwise.
BoundReport check_general_weighted(const PointSet& points, const SphereSet& spheres, std::int64_t N,
                                   const FormOracle* oracle = nullptr);

struct CheckOptions {
    const FormOracle* oracle = nullptr;  // built on demand when null
    std::uint64_t seed = 0;
};

/// Evaluates one incidence bound. Unmet hypotheses give hypotheses_met = false
/// and holds = false with the reason in note; the check itself is skipped.
BoundReport check_bound(TheoremId theorem, const PointSet& points, const SphereSet& spheres,
                        const CheckOptions& options = {});

struct CharacterSum {
    std::int64_t value = 0;
    BoundReport report;
};

/// sum_{x,y in C} eta(Q(x - y)) and the check |value| <= sqrt(2) q^{(d+1)/2} |C|.
CharacterSum char_sum_distances(const PointSet& centers, const QuadraticForm& form);

/// Exhaustive check that D(t,r1,r2) = 0 with t,r1,r2 != 0 forces equal characters,
/// and that D(., r1, r2) has two roots when eta(r1) = eta(r2) and none otherwise.
/// lhs counts violations; holds iff there are none.
BoundReport check_lemma_D_eta(const Field& field);

struct IntersectionDecomposition {
    /// sum over ordered pairs s1 != s2 of (|s1 ∩ s2| - q^{d-2}), by enumeration.
    std::int64_t brute = 0;
    /// The same sum from the tables, grouped by t = 0, t = 4r and the remaining distances.
    std::int64_t table = 0;
    /// j q^{(d-1)/2} (I(C,S_0) - m + I(C,S_{4r})) + (-1)^i q^{(d-3)/2} sum_{x,y in C} eta(-Q(x-y)).
    std::int64_t center_identity = 0;
};

/// Requires odd d >= 3 and a common nonzero radius (ParityMismatch / MixedRadii).
IntersectionDecomposition intersection_sum_decomposition(const SphereSet& spheres,
                                                         std::uint64_t cap = default_enumeration_cap());

/// Scales points and centers by lambda and radii by lambda^2. Throws ZeroScalar.
std::pair<PointSet, SphereSet> dilate_instance(const PointSet& points, const SphereSet& spheres, FieldElement lambda);

}  // namespace qsphere

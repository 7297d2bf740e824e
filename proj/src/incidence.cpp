#include "qsphere/incidence.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "qsphere/error.hpp"

namespace qsphere {

namespace {

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

std::int64_t ipow(std::uint64_t q, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= static_cast<std::int64_t>(q);
    return r;
}

Rational rpow(std::uint64_t q, int e) {
    Rational r = 1;
    if (e >= 0) {
        for (int i = 0; i < e; ++i) r *= q;
    } else {
        for (int i = 0; i < -e; ++i) r /= q;
    }
    return r;
}

bool perfect_square(const BigInt& n, BigInt& root) {
    if (n < 0) return false;
    root = boost::multiprecision::sqrt(n);
    return root * root == n;
}

std::string decimal(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

// sqrt(square) rendered exactly when square is a rational square.
std::string render_sqrt(const Rational& square) {
    BigInt num_root, den_root;
    if (perfect_square(numerator(square), num_root) && perfect_square(denominator(square), den_root)) {
        return to_exact_string(Rational(num_root, den_root));
    }
    return decimal(std::sqrt(to_double(square)));
}

double ratio_of(const Rational& lhs, double rhs) {
    if (lhs == 0) return 0.0;
    return rhs > 0.0 ? to_double(lhs) / rhs : std::numeric_limits<double>::infinity();
}

BoundReport base_report(TheoremId id, const PointSet& points, const SphereSet& spheres) {
    BoundReport r;
    r.theorem = id;
    r.q = spheres.form().field().q();
    r.d = spheres.form().dim();
    r.form = std::string(to_string(spheres.form().kind()));
    r.n_points = points.size();
    r.n_spheres = spheres.size();
    return r;
}

// lhs <= c*sqrt(A) (strict when requested and the instance is nonempty), rhs^2 = c^2 A.
void decide_sqrt(BoundReport& r, const Rational& rhs_square, bool strict) {
    r.rhs = render_sqrt(rhs_square);
    r.rhs_value = std::sqrt(to_double(rhs_square));
    const Rational lhs_square = r.lhs * r.lhs;
    if (r.lhs == 0) {
        r.holds = true;
    } else {
        r.holds = strict ? lhs_square < rhs_square : lhs_square <= rhs_square;
    }
    r.ratio = ratio_of(r.lhs, r.rhs_value);
}

void skip(BoundReport& r, std::string reason) {
    r.hypotheses_met = false;
    r.holds = false;
    r.note = std::move(reason);
}

bool all_radii(const SphereSet& spheres, auto predicate) {
    for (const Sphere& s : spheres.spheres()) {
        if (!predicate(s.radius)) return false;
    }
    return true;
}

bool common_radius(const SphereSet& spheres) {
    const auto radii = spheres.radii();
    return radii.size() <= 1;
}

bool norm_compatible(const QuadraticForm& form) {
    return form.kind() == FormKind::Norm || form.kind() == norm_equivalence_class(form.dim(), form.field());
}

}  // namespace

std::string to_exact_string(const Rational& value) {
    if (denominator(value) == 1) return numerator(value).str();
    return numerator(value).str() + "/" + denominator(value).str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

PointSet::PointSet(int d, std::vector<Point> points) : d_(d) {
    for (auto& x : points) {
        if (!insert(std::move(x))) throw Error(ErrorCode::InvalidArgument, "duplicate point in point set");
    }
}

bool PointSet::insert(Point x) {
    if (x.size() != static_cast<std::size_t>(d_)) throw Error(ErrorCode::DimensionMismatch, "point has wrong dimension");
    if (!index_.insert(x).second) return false;
    points_.push_back(std::move(x));
    return true;
}

bool PointSet::contains(std::span<const FieldElement> x) const {
    return index_.contains(Point(x.begin(), x.end()));
}

bool SphereSet::insert(Point center, FieldElement radius) {
    if (center.size() != static_cast<std::size_t>(form_.dim())) {
        throw Error(ErrorCode::DimensionMismatch, "center has wrong dimension");
    }
    if (!index_.emplace(center, radius.index).second) return false;
    spheres_.emplace_back(form_, std::move(center), radius);
    return true;
}

bool SphereSet::insert(const Sphere& s) {
    if (!(s.form == form_)) throw Error(ErrorCode::InvalidArgument, "sphere uses a different form");
    return insert(s.center, s.radius);
}

std::vector<FieldElement> SphereSet::radii() const {
    std::set<FieldElement> distinct;
    for (const Sphere& s : spheres_) distinct.insert(s.radius);
    return {distinct.begin(), distinct.end()};
}

std::string_view to_string(TheoremId id) {
    switch (id) {
        case TheoremId::IR_1_1: return "IR_1_1";
        case TheoremId::MULTI_1_2: return "MULTI_1_2";
        case TheoremId::SIMPLE_1_3: return "SIMPLE_1_3";
        case TheoremId::SMALL_S_1_9a: return "SMALL_S_1_9a";
        case TheoremId::SMALL_S_1_9b: return "SMALL_S_1_9b";
        case TheoremId::SMALL_S_1_9c: return "SMALL_S_1_9c";
        case TheoremId::ODD_RESTRICTED_1_12: return "ODD_RESTRICTED_1_12";
        case TheoremId::ZERO_ODD_4_3: return "ZERO_ODD_4_3";
        case TheoremId::NEW_IR_4_5: return "NEW_IR_4_5";
        case TheoremId::THOMASON_2_1: return "THOMASON_2_1";
        case TheoremId::GENERAL_2_3: return "GENERAL_2_3";
        case TheoremId::CHARSUM_4_2: return "CHARSUM_4_2";
        case TheoremId::D_ETA_4_4: return "D_ETA_4_4";
    }
    return "?";
}

TheoremId parse_theorem_id(std::string_view text) {
    for (int i = 0; i <= static_cast<int>(TheoremId::D_ETA_4_4); ++i) {
        const auto id = static_cast<TheoremId>(i);
        if (to_string(id) == text) return id;
    }
    throw Error(ErrorCode::ParseError, "unknown theorem id '" + std::string(text) + "'");
}

FormOracle::FormOracle(QuadraticForm form, std::uint64_t cap)
    : form_(std::move(form)), space_(form_.field(), form_.dim(), cap), level_sets_(form_.field().q()) {
    Point v(static_cast<std::size_t>(form_.dim()));
    do {
        level_sets_[form_(v).index].push_back(v);
    } while (space_.next(v));
}

BigInt FormOracle::pair_intersection_sum(const SphereSet& spheres) const {
    if (!(spheres.form() == form_)) throw Error(ErrorCode::InvalidArgument, "sphere set uses a different form");
    std::vector<std::uint32_t> cover(space_.size(), 0);
    const Field& f = form_.field();
    const std::uint64_t q = f.q();
    BigInt total_size = 0;
    for (const Sphere& s : spheres.spheres()) {
        const auto& level = level_sets_[s.radius.index];
        total_size += level.size();
        for (const Point& v : level) {
            std::uint64_t idx = 0;
            for (std::size_t i = 0; i < v.size(); ++i) idx = idx * q + f.add(s.center[i], v[i]).index;
            ++cover[idx];
        }
    }
    BigInt squares = 0;
    for (const std::uint32_t c : cover) squares += static_cast<std::uint64_t>(c) * c;
    return squares - total_size;
}

std::uint64_t count_incidences(const PointSet& points, const SphereSet& spheres) {
    if (points.dim() != spheres.form().dim()) throw Error(ErrorCode::DimensionMismatch, "point and sphere dimensions differ");
    const QuadraticForm& form = spheres.form();
    const Field& f = form.field();
    Point diff(static_cast<std::size_t>(form.dim()));
    std::uint64_t count = 0;
    for (const Sphere& s : spheres.spheres()) {
        for (const Point& x : points.points()) {
            for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = f.sub(x[i], s.center[i]);
            if (form(diff) == s.radius) ++count;
        }
    }
    return count;
}

Rational deviation(const PointSet& points, const SphereSet& spheres) {
    const Rational incidences = count_incidences(points, spheres);
    const Rational expected = Rational(BigInt(points.size()) * spheres.size(), spheres.form().field().q());
    return abs(incidences - expected);
}

std::uint64_t BipartiteGraph::edge_count() const {
    std::uint64_t e = 0;
    for (const auto a : adjacency) e += (a != 0);
    return e;
}

BoundReport check_thomason(const BipartiteGraph& graph, const Rational& p, std::span<const std::size_t> subset) {
    const std::uint64_t edges = graph.edge_count();
    if (graph.left == 0 || graph.right == 0) throw Error(ErrorCode::PNotInRange, "empty vertex class");
    const Rational lower(1, graph.left);
    const Rational upper(edges, BigInt(graph.left) * graph.right);
    if (p < lower || p > upper) {
        throw Error(ErrorCode::PNotInRange, "p = " + to_exact_string(p) + " outside [" + to_exact_string(lower) + ", " +
                                                to_exact_string(upper) + "]");
    }
    std::uint64_t edges_to_subset = 0;
    for (const std::size_t u : subset) {
        if (u >= graph.right) throw Error(ErrorCode::InvalidArgument, "subset vertex out of range");
        for (std::size_t v = 0; v < graph.left; ++v) edges_to_subset += graph.edge(v, u);
    }
    BigInt codegree_pairs = 0;  // sum_u deg(u)(deg(u)-1), ordered pairs
    for (std::size_t u = 0; u < graph.right; ++u) {
        std::uint64_t deg = 0;
        for (std::size_t v = 0; v < graph.left; ++v) deg += graph.edge(v, u);
        codegree_pairs += deg * (deg == 0 ? 0 : deg - 1);
    }
    const Rational L = graph.left;
    const Rational U = graph.right;
    const Rational R = subset.size();
    const Rational gap = Rational(edges_to_subset) - p * L * R;

    BoundReport r;
    r.theorem = TheoremId::THOMASON_2_1;
    r.form = "graph";
    r.n_points = graph.left;
    r.n_spheres = subset.size();
    r.lhs = gap * gap;
    const Rational rhs = R * (Rational(codegree_pairs) - U * L * (L - 1) * p * p + Rational(edges));
    r.rhs = to_exact_string(rhs);
    r.rhs_value = to_double(rhs);
    r.holds = r.lhs <= rhs;
    r.ratio = ratio_of(r.lhs, r.rhs_value);
    return r;
}

BoundReport check_general_weighted(const PointSet& points, const SphereSet& spheres, std::int64_t N,
                                   const FormOracle* oracle) {
    std::optional<FormOracle> local;
    if (oracle == nullptr) oracle = &local.emplace(spheres.form());
    const QuadraticForm& form = spheres.form();
    const std::uint64_t q = form.field().q();
    const int d = form.dim();
    const std::int64_t size = ipow(q, d - 1) + N;
    for (const Sphere& s : spheres.spheres()) {
        if (static_cast<std::int64_t>(oracle->sphere_size(s.radius)) != size) {
            throw Error(ErrorCode::MixedSphereSizes, "sphere of radius index " + std::to_string(s.radius.index) +
                                                         " does not have size q^{d-1}+N");
        }
    }
    const Rational p = Rational(1, q) + Rational(N) / rpow(q, d);
    const Rational P = points.size();
    const Rational S = spheres.size();
    const Rational gap = Rational(count_incidences(points, spheres)) - p * P * S;
    const Rational pair_sum = Rational(oracle->pair_intersection_sum(spheres));
    const Rational rhs = P * (pair_sum - S * (S - 1) * rpow(q, d) * p * p) + P * S * Rational(size);

    BoundReport r = base_report(TheoremId::GENERAL_2_3, points, spheres);
    r.lhs = gap * gap;
    r.rhs = to_exact_string(rhs);
    r.rhs_value = to_double(rhs);
    r.holds = r.lhs <= rhs;
    r.ratio = ratio_of(r.lhs, r.rhs_value);
    return r;
}

BoundReport check_bound(TheoremId theorem, const PointSet& points, const SphereSet& spheres,
                        const CheckOptions& options) {
    if (points.dim() != spheres.form().dim()) throw Error(ErrorCode::DimensionMismatch, "point and sphere dimensions differ");
    const QuadraticForm& form = spheres.form();
    const Field& f = form.field();
    const std::uint64_t q = f.q();
    const int d = form.dim();
    const Rational P = points.size();
    const Rational S = spheres.size();
    const FieldElement zero = f.zero();
    const auto nonzero = [&](FieldElement r) { return r != zero; };
    const auto is_zero = [&](FieldElement r) { return r == zero; };

    BoundReport r = base_report(theorem, points, spheres);
    r.seed = options.seed;

    const auto finish_skip = [&](std::string reason) {
        skip(r, std::move(reason));
        return r;
    };

    switch (theorem) {
        case TheoremId::IR_1_1:
            if (!norm_compatible(form)) return finish_skip("form is not the norm form or its equivalent kind");
            if (!all_radii(spheres, nonzero) || !common_radius(spheres)) return finish_skip("radii must be one nonzero value");
            r.lhs = deviation(points, spheres);
            decide_sqrt(r, 4 * rpow(q, d - 1) * P * S, false);
            return r;
        case TheoremId::MULTI_1_2: {
            if (!norm_compatible(form)) return finish_skip("form is not the norm form or its equivalent kind");
            if (!all_radii(spheres, nonzero)) return finish_skip("radii must be nonzero");
            const Rational R = spheres.radii().size();
            r.lhs = deviation(points, spheres);
            decide_sqrt(r, 4 * rpow(q, d - 1) * R * P * S, false);
            return r;
        }
        case TheoremId::SIMPLE_1_3:
            r.lhs = deviation(points, spheres);
            decide_sqrt(r, rpow(q, d) * P * S, false);
            return r;
        case TheoremId::SMALL_S_1_9a:
        case TheoremId::SMALL_S_1_9b:
        case TheoremId::SMALL_S_1_9c: {
            if (d % 2 != 0) return finish_skip("dimension must be even");
            const FormKind kind = form.canonical_kind();
            if (theorem == TheoremId::SMALL_S_1_9a) {
                if (!all_radii(spheres, nonzero)) return finish_skip("radii must be nonzero");
            } else {
                const FormKind wanted = theorem == TheoremId::SMALL_S_1_9b ? FormKind::Q2 : FormKind::Q1;
                if (kind != wanted) return finish_skip("form is not of the required kind");
                if (!all_radii(spheres, is_zero)) return finish_skip("radii must be zero");
            }
            // The (1+o(1)) constant is not checkable; the exact weighted bound is.
            const FieldElement radius = spheres.empty() ? f.one() : spheres.spheres().front().radius;
            const std::int64_t N = sphere_size_formula(form, theorem == TheoremId::SMALL_S_1_9a ? radius : zero) -
                                   ipow(q, d - 1);
            const BoundReport weighted = check_general_weighted(points, spheres, N, options.oracle);
            r.lhs = deviation(points, spheres);
            const Rational pair_coeff = theorem == TheoremId::SMALL_S_1_9c ? rpow(q, d / 2) : rpow(q, d / 2 - 1);
            const Rational rhs_square = P * (rpow(q, d - 1) * S + pair_coeff * S * S);
            r.rhs = render_sqrt(rhs_square);
            r.rhs_value = std::sqrt(to_double(rhs_square));
            r.ratio = ratio_of(r.lhs, r.rhs_value);
            r.holds = weighted.holds;
            r.note = "holds is the exact weighted bound (GENERAL_2_3); ratio is the (1+o(1)) slack";
            return r;
        }
        case TheoremId::ODD_RESTRICTED_1_12: {
            if (d % 2 != 1) return finish_skip("dimension must be odd");
            if (!all_radii(spheres, [&](FieldElement x) { return x != zero && sign_class(form, x) == -1; })) {
                return finish_skip("radii must be nonzero with sign class -1");
            }
            r.lhs = deviation(points, spheres);
            const Rational a_sq = rpow(q, d - 1) * P * S;
            const Rational b_sq = 3 * rpow(q, (d - 3) / 2) * P * S * S;
            r.rhs_value = std::sqrt(to_double(a_sq)) + std::sqrt(to_double(b_sq));
            r.rhs = decimal(r.rhs_value);
            // lhs <= sqrt(A) + sqrt(B)  <=>  lhs^2 - A - B <= 2 sqrt(AB)
            const Rational excess = r.lhs * r.lhs - a_sq - b_sq;
            r.holds = excess <= 0 || excess * excess <= 4 * a_sq * b_sq;
            r.ratio = ratio_of(r.lhs, r.rhs_value);
            return r;
        }
        case TheoremId::ZERO_ODD_4_3: {
            if (d % 2 != 1) return finish_skip("dimension must be odd");
            if (!all_radii(spheres, is_zero)) return finish_skip("radii must be zero");
            r.lhs = deviation(points, spheres);
            const Rational m = rpow(q, d - 1) * P * S;
            r.rhs_value = std::sqrt((1.0 + std::sqrt(2.0)) * to_double(m));
            r.rhs = decimal(r.rhs_value);
            // lhs^2 < (1 + sqrt 2) m  <=>  lhs^2 - m < sqrt(2) m
            const Rational excess = r.lhs * r.lhs - m;
            r.holds = r.lhs == 0 || excess < 0 || excess * excess < 2 * m * m;
            r.ratio = ratio_of(r.lhs, r.rhs_value);
            return r;
        }
        case TheoremId::NEW_IR_4_5:
            if (d % 2 != 1) return finish_skip("dimension must be odd");
            if (!all_radii(spheres, nonzero) || !common_radius(spheres)) return finish_skip("radii must be one nonzero value");
            r.lhs = deviation(points, spheres);
            decide_sqrt(r, 9 * rpow(q, d - 1) * P * S, true);
            return r;
        case TheoremId::GENERAL_2_3: {
            const auto radii = spheres.radii();
            std::optional<FormOracle> local;
            const FormOracle* oracle = options.oracle ? options.oracle : &local.emplace(form);
            std::optional<std::uint64_t> size;
            for (const FieldElement radius : radii) {
                const std::uint64_t s = oracle->sphere_size(radius);
                if (size && *size != s) return finish_skip("spheres do not share one size");
                size = s;
            }
            const std::int64_t N = size ? static_cast<std::int64_t>(*size) - ipow(q, d - 1) : 0;
            BoundReport weighted = check_general_weighted(points, spheres, N, oracle);
            weighted.seed = options.seed;
            return weighted;
        }
        case TheoremId::THOMASON_2_1:
        case TheoremId::CHARSUM_4_2:
        case TheoremId::D_ETA_4_4:
            break;
    }
    throw Error(ErrorCode::InvalidArgument, std::string(to_string(theorem)) + " is not a point-sphere bound");
}

CharacterSum char_sum_distances(const PointSet& centers, const QuadraticForm& form) {
    if (centers.dim() != form.dim()) throw Error(ErrorCode::DimensionMismatch, "center dimension differs from form");
    const Field& f = form.field();
    Point diff(static_cast<std::size_t>(form.dim()));
    std::int64_t value = 0;
    const auto& pts = centers.points();
    for (const Point& x : pts) {
        for (const Point& y : pts) {
            for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = f.sub(x[i], y[i]);
            value += f.eta(form(diff));
        }
    }
    CharacterSum out;
    out.value = value;
    BoundReport& r = out.report;
    r.theorem = TheoremId::CHARSUM_4_2;
    r.q = f.q();
    r.d = form.dim();
    r.form = std::string(to_string(form.kind()));
    r.n_points = pts.size();
    r.lhs = value < 0 ? -value : value;
    const Rational c = pts.size();
    decide_sqrt(r, 2 * rpow(f.q(), form.dim() + 1) * c * c, false);
    return out;
}

BoundReport check_lemma_D_eta(const Field& f) {
    std::uint64_t violations = 0;
    std::uint64_t checked = 0;
    for (std::uint32_t a = 1; a < f.q(); ++a) {
        const FieldElement r1{a};
        for (std::uint32_t b = 1; b < f.q(); ++b) {
            const FieldElement r2{b};
            int roots = 0;
            for (std::uint32_t c = 0; c < f.q(); ++c) {
                const FieldElement t{c};
                if (discriminant_D(f, t, r1, r2) != f.zero()) continue;
                ++roots;
                if (c == 0) continue;
                ++checked;
                if (f.eta(t) != f.eta(r1) || f.eta(r1) != f.eta(r2)) ++violations;
            }
            const int expected_roots = f.eta(r1) == f.eta(r2) ? 2 : 0;
            if (roots != expected_roots) ++violations;
        }
    }
    BoundReport r;
    r.theorem = TheoremId::D_ETA_4_4;
    r.q = f.q();
    r.form = "-";
    r.n_points = checked;
    r.lhs = violations;
    r.rhs = "0";
    r.rhs_value = 0.0;
    r.holds = violations == 0;
    r.ratio = 0.0;
    return r;
}

IntersectionDecomposition intersection_sum_decomposition(const SphereSet& spheres, std::uint64_t cap) {
    const QuadraticForm& form = spheres.form();
    const int d = form.dim();
    if (d % 2 != 1 || d < 3) throw Error(ErrorCode::ParityMismatch, "decomposition needs odd d >= 3");
    IntersectionDecomposition out;
    if (spheres.empty()) return out;
    const Field& f = form.field();
    const auto radii = spheres.radii();
    if (radii.size() != 1 || radii.front() == f.zero()) {
        throw Error(ErrorCode::MixedRadii, "spheres must share one nonzero radius");
    }
    const FieldElement r = radii.front();
    const FieldElement four_r = f.mul(f.from_int(4), r);
    const std::uint64_t q = f.q();
    const std::int64_t m = static_cast<std::int64_t>(spheres.size());
    const std::int64_t hi = ipow(q, (d - 1) / 2);
    const std::int64_t lo = ipow(q, (d - 3) / 2);
    const int j = sign_class(form, r);
    const int i = form_index(form.canonical_kind());
    const int sign_i = i % 2 == 0 ? 1 : -1;

    const FormOracle oracle(form, cap);
    out.brute = static_cast<std::int64_t>(oracle.pair_intersection_sum(spheres)) - m * (m - 1) * ipow(q, d - 2);

    std::int64_t zero_pairs = 0, four_r_pairs = 0, eta_sum = 0;
    Point diff(static_cast<std::size_t>(d));
    const auto& all = spheres.spheres();
    for (std::size_t a = 0; a < all.size(); ++a) {
        for (std::size_t b = 0; b < all.size(); ++b) {
            for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = f.sub(all[a].center[k], all[b].center[k]);
            const FieldElement t = form(diff);
            eta_sum += f.eta(f.neg(t));
            if (t == f.zero()) ++zero_pairs;
            if (t == four_r) ++four_r_pairs;
            if (a == b) continue;
            if (t == f.zero()) {
                out.table += j * hi;
            } else if (t == four_r) {
                out.table += j * (hi - lo);
            } else {
                out.table += sign_i * f.eta(f.neg(t)) * lo;
            }
        }
    }
    out.center_identity = j * hi * (zero_pairs - m + four_r_pairs) + sign_i * lo * eta_sum;
    return out;
}

std::pair<PointSet, SphereSet> dilate_instance(const PointSet& points, const SphereSet& spheres, FieldElement lambda) {
    const Field& f = spheres.form().field();
    if (lambda == f.zero()) throw Error(ErrorCode::ZeroScalar, "dilation by zero");
    const auto scale = [&](const Point& x) {
        Point y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = f.mul(lambda, x[i]);
        return y;
    };
    PointSet scaled_points(points.dim());
    for (const Point& x : points.points()) scaled_points.insert(scale(x));
    SphereSet scaled_spheres(spheres.form());
    const FieldElement lambda_sq = f.square(lambda);
    for (const Sphere& s : spheres.spheres()) scaled_spheres.insert(scale(s.center), f.mul(lambda_sq, s.radius));
    return {std::move(scaled_points), std::move(scaled_spheres)};
}

}  // namespace qsphere

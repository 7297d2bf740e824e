#include "qsphere/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "qsphere/error.hpp"
#include "qsphere/instance_io.hpp"
#include "qsphere/random.hpp"

namespace qsphere {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::array kSweepTheorems = {
    TheoremId::IR_1_1,       TheoremId::MULTI_1_2,           TheoremId::SIMPLE_1_3,   TheoremId::SMALL_S_1_9a,
    TheoremId::SMALL_S_1_9b, TheoremId::SMALL_S_1_9c,        TheoremId::ODD_RESTRICTED_1_12,
    TheoremId::ZERO_ODD_4_3, TheoremId::NEW_IR_4_5,          TheoremId::GENERAL_2_3,  TheoremId::CHARSUM_4_2,
    TheoremId::THOMASON_2_1, TheoremId::D_ETA_4_4,
};

std::string fmt_double(double value) {
    if (std::isinf(value)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

template <class T>
std::string join(const std::vector<T>& values, auto to_text) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += to_text(values[i]);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> echo_config(const RunConfig& c) {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("q", join(c.q_list, [](std::uint64_t v) { return std::to_string(v); }));
    out.emplace_back("d", join(c.d_list, [](int v) { return std::to_string(v); }));
    out.emplace_back("forms", join(c.forms, [](FormKind k) { return std::string(to_string(k)); }));
    out.emplace_back("seed", std::to_string(c.seed));
    out.emplace_back("enum_cap", std::to_string(c.enumeration_cap));
    switch (c.command) {
        case Command::VerifyTables: break;
        case Command::VerifyBounds:
            out.emplace_back("trials", std::to_string(c.trials));
            out.emplace_back("theorems", c.theorems.empty()
                                             ? std::string("all")
                                             : join(c.theorems, [](TheoremId t) { return std::string(to_string(t)); }));
            out.emplace_back("max_points", std::to_string(c.max_points));
            out.emplace_back("max_spheres", std::to_string(c.max_spheres));
            break;
        case Command::Construct:
            out.emplace_back("which", c.which);
            out.emplace_back("construct_form", std::string(to_string(c.construct_kind)));
            break;
        case Command::Search:
            out.emplace_back("steps", std::to_string(c.steps));
            out.emplace_back("search_points", std::to_string(c.search_points));
            out.emplace_back("search_spheres", std::to_string(c.search_spheres));
            out.emplace_back("seed_with_construction", c.seed_with_construction ? "true" : "false");
            break;
    }
    return out;
}

InstanceReport start_report(const RunConfig& config) {
    InstanceReport report;
    report.command = std::string(to_string(config.command));
    report.config = echo_config(config);
    return report;
}

void tally(InstanceReport& report, const BoundReport& r) {
    if (!r.hypotheses_met) {
        ++report.skipped;
        return;
    }
    ++report.checked;
    if (r.holds) {
        ++report.passed;
    } else {
        ++report.failed;
    }
}

void tally_table(InstanceReport& report, const TableRecord& record) {
    ++report.checked;
    if (record.mismatches == 0) {
        ++report.passed;
    } else {
        ++report.failed;
    }
    report.tables.push_back(record);
}

std::vector<FormKind> forms_for_dimension(const RunConfig& config, int d) {
    std::vector<FormKind> out;
    for (const FormKind kind : config.forms) {
        if (kind_supports_dimension(kind, d)) out.push_back(kind);
    }
    return out;
}

// ---------------------------------------------------------------- tables

void verify_tables_for(InstanceReport& report, const QuadraticForm& form, std::uint64_t cap) {
    const Field& f = form.field();
    const int d = form.dim();
    const std::uint64_t q = f.q();
    const std::string kind(to_string(form.kind()));
    const PointSpace space(f, d, cap);

    TableRecord sizes{"sphere_size", kind, q, d, "", 0, 0, ""};
    const Point center = space.point(space.size() / 2);
    std::int64_t partition = 0;
    for (const FieldElement r : f.elements()) {
        const auto brute = static_cast<std::int64_t>(sphere_points_brute(Sphere(form, center, r), cap).size());
        const std::int64_t formula = sphere_size_formula(form, r);
        partition += formula;
        ++sizes.cases;
        if (brute != formula) {
            if (sizes.mismatches++ == 0) {
                sizes.example = "r=" + std::to_string(r.index) + " formula=" + std::to_string(formula) +
                                " oracle=" + std::to_string(brute);
            }
        }
    }
    if (sizes.mismatches == 0) sizes.example = "all " + std::to_string(q) + " radii agree";
    tally_table(report, sizes);
    TableRecord part{"size_partition", kind, q, d, "", 1, 0, "sum=" + std::to_string(partition)};
    if (partition != static_cast<std::int64_t>(space.size())) part.mismatches = 1;
    tally_table(report, part);

    if (d < 3) return;  // the tables start at d = 3; d = 2 intersections are oracle-only

    std::array<TableRecord, kTableRows> rows;
    TableRecord fibers{"fiber_profile", kind, q, d, "", 0, 0, ""};
    RowCoverage coverage{kind, q, d, {}};
    for (int row = 0; row < kTableRows; ++row) {
        rows[static_cast<std::size_t>(row)] =
            TableRecord{"intersection", kind, q, d, std::string(to_string(static_cast<TableRow>(row))), 0, 0, ""};
    }
    std::vector<std::uint64_t> joint(static_cast<std::size_t>(q) * q);
    Point x(static_cast<std::size_t>(d)), diff(x.size());
    for (const FieldElement t : f.elements()) {
        const Point c2 = find_center_at_distance(form, t, cap);
        std::fill(joint.begin(), joint.end(), 0);
        std::fill(x.begin(), x.end(), f.zero());
        do {
            space.sub(x, c2, diff);
            ++joint[static_cast<std::size_t>(form(x).index) * q + form(diff).index];
        } while (space.next(x));
        for (const FieldElement r1 : f.elements()) {
            for (const FieldElement r2 : f.elements()) {
                const IntersectionClass cls = classify_intersection(f, t, r1, r2);
                auto& rec = rows[static_cast<std::size_t>(cls.row)];
                const std::int64_t formula = intersection_size_formula(form.kind(), d, f, r1, r2, t);
                const auto oracle = static_cast<std::int64_t>(joint[static_cast<std::size_t>(r1.index) * q + r2.index]);
                ++rec.cases;
                ++coverage.hits[static_cast<std::size_t>(cls.row)];
                const std::string triple =
                    "r1=" + std::to_string(r1.index) + " r2=" + std::to_string(r2.index) + " t=" + std::to_string(t.index);
                if (formula != oracle) {
                    if (rec.mismatches++ == 0) {
                        rec.example = triple + " formula=" + std::to_string(formula) + " oracle=" + std::to_string(oracle);
                    }
                } else if (rec.example.empty()) {
                    rec.example = triple + " size=" + std::to_string(oracle);
                }
                ++fibers.cases;
                const std::int64_t rebuilt = excess_from_fiber_profile(form.canonical_kind(), d, q, fiber_profile(f, r1, r2, t));
                if (rebuilt != intersection_excess_formula(form.kind(), d, f, r1, r2, t) && fibers.mismatches++ == 0) {
                    fibers.example = triple + " rebuilt=" + std::to_string(rebuilt);
                }
            }
        }
    }
    for (const auto& rec : rows) tally_table(report, rec);
    if (fibers.mismatches == 0) fibers.example = "all triples agree";
    tally_table(report, fibers);
    TableRecord cov{"coverage", kind, q, d, "", kTableRows, 0, ""};
    for (int row = 0; row < kTableRows; ++row) {
        if (coverage.hits[static_cast<std::size_t>(row)] == 0) {
            ++cov.mismatches;
            cov.example += std::string(cov.example.empty() ? "" : "; ") + "row " +
                           std::string(to_string(static_cast<TableRow>(row))) + " never exercised";
        }
    }
    if (cov.mismatches == 0) cov.example = "6/6 rows";
    tally_table(report, cov);
    report.coverage.push_back(coverage);
}

// ---------------------------------------------------------------- bounds

bool theorem_applies(TheoremId theorem, FormKind kind, int d, const Field& f) {
    const FormKind canonical = kind == FormKind::Norm ? norm_equivalence_class(d, f) : kind;
    switch (theorem) {
        case TheoremId::IR_1_1:
        case TheoremId::MULTI_1_2: return kind == FormKind::Norm || kind == norm_equivalence_class(d, f);
        case TheoremId::SMALL_S_1_9a: return d % 2 == 0;
        case TheoremId::SMALL_S_1_9b: return d % 2 == 0 && canonical == FormKind::Q2;
        case TheoremId::SMALL_S_1_9c: return d % 2 == 0 && canonical == FormKind::Q1;
        case TheoremId::ODD_RESTRICTED_1_12:
        case TheoremId::ZERO_ODD_4_3:
        case TheoremId::NEW_IR_4_5: return d % 2 == 1;
        case TheoremId::SIMPLE_1_3:
        case TheoremId::GENERAL_2_3:
        case TheoremId::CHARSUM_4_2: return true;
        case TheoremId::THOMASON_2_1:
        case TheoremId::D_ETA_4_4: return false;
    }
    return false;
}

std::vector<FieldElement> radius_pool(TheoremId theorem, const QuadraticForm& form, Rng& rng) {
    const Field& f = form.field();
    std::vector<FieldElement> nonzero;
    for (std::uint32_t i = 1; i < f.q(); ++i) nonzero.push_back({i});
    switch (theorem) {
        case TheoremId::IR_1_1:
        case TheoremId::NEW_IR_4_5: return {nonzero[rng.below(nonzero.size())]};
        case TheoremId::MULTI_1_2: {
            std::vector<FieldElement> subset;
            for (const FieldElement r : nonzero) {
                if (rng.coin()) subset.push_back(r);
            }
            if (subset.empty()) subset.push_back(nonzero[rng.below(nonzero.size())]);
            return subset;
        }
        case TheoremId::SMALL_S_1_9a: return nonzero;
        case TheoremId::SMALL_S_1_9b:
        case TheoremId::SMALL_S_1_9c:
        case TheoremId::ZERO_ODD_4_3: return {f.zero()};
        case TheoremId::ODD_RESTRICTED_1_12: {
            std::vector<FieldElement> pool;
            for (const FieldElement r : nonzero) {
                if (sign_class(form, r) == -1) pool.push_back(r);
            }
            return pool;
        }
        case TheoremId::GENERAL_2_3: {
            // One size class: zero radius, or nonzero radii sharing eta(-r) (all nonzero radii in even d).
            const std::uint64_t classes = form.dim() % 2 == 0 ? 2 : 3;
            const std::uint64_t pick = rng.below(classes);
            if (pick == 0) return {f.zero()};
            if (form.dim() % 2 == 0) return nonzero;
            const int wanted = pick == 1 ? 1 : -1;
            std::vector<FieldElement> pool;
            for (const FieldElement r : nonzero) {
                if (f.eta(f.neg(r)) == wanted) pool.push_back(r);
            }
            return pool;
        }
        default: return f.elements();
    }
}

PointSet random_points_for(Rng& rng, const PointSpace& space, const QuadraticForm& form, const SphereSet& spheres,
                           std::uint64_t n) {
    // One instance in four concentrates P on the first sphere of S.
    if (!spheres.empty() && rng.below(4) == 0) {
        const Sphere& s = spheres.spheres().front();
        PointSet points(space.dim());
        Point x(static_cast<std::size_t>(space.dim())), diff(x.size());
        do {
            space.sub(x, s.center, diff);
            if (form(diff) == s.radius) points.insert(x);
        } while (points.size() < n && space.next(x));
        return points;
    }
    return random_point_set(rng, space, n);
}

struct SweepState {
    SweepRecord record;
    std::optional<BoundReport> worst;
};

void record_instance(InstanceReport& report, SweepState& state, BoundReport r, bool full) {
    tally(report, r);
    if (!r.hypotheses_met) {
        ++state.record.skipped;
        if (full) report.reports.push_back(std::move(r));
        return;
    }
    ++state.record.instances;
    if (!r.holds) ++state.record.violations;
    const bool new_worst = !state.worst || r.ratio > state.worst->ratio;
    if (new_worst) {
        state.record.max_ratio = r.ratio;
        state.record.max_ratio_seed = r.seed;
    }
    if (full || !r.holds) {
        if (new_worst) state.worst = r;
        report.reports.push_back(std::move(r));
    } else if (new_worst) {
        state.worst = std::move(r);
    }
}

void finish_sweep(InstanceReport& report, SweepState& state, bool full) {
    if (!full && state.worst && state.worst->holds) report.reports.push_back(*state.worst);
    report.sweeps.push_back(state.record);
}

void sweep_thomason(InstanceReport& report, const RunConfig& config) {
    SweepState state;
    state.record.theorem = std::string(to_string(TheoremId::THOMASON_2_1));
    state.record.form = "-";
    for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
        const std::uint64_t seed = derive_seed(config.seed, {static_cast<std::uint64_t>(TheoremId::THOMASON_2_1), trial});
        Rng rng(seed);
        BipartiteGraph g;
        std::uint64_t edges = 0;
        do {
            g = random_bipartite_graph(rng, 1 + rng.below(12), 1 + rng.below(12));
            edges = g.edge_count();
        } while (edges < g.right);  // the admissible p-range is nonempty iff E >= |U|
        std::vector<std::size_t> subset;
        for (std::size_t u = 0; u < g.right; ++u) {
            if (rng.coin()) subset.push_back(u);
        }
        const Rational lower(1, g.left);
        const Rational upper(edges, BigInt(g.left) * g.right);
        const Rational mid = lower + (upper - lower) * Rational(rng.below(1001), 1000);
        for (const Rational& p : {lower, upper, mid}) {
            BoundReport r = check_thomason(g, p, subset);
            r.seed = seed;
            record_instance(report, state, std::move(r), config.full_reports);
        }
    }
    finish_sweep(report, state, config.full_reports);
}

// ---------------------------------------------------------------- search

Rational search_objective(const PointSet& points, const SphereSet& spheres) {
    if (points.empty() || spheres.empty()) return 0;
    const Rational dev = deviation(points, spheres);
    return dev * dev / Rational(BigInt(points.size()) * spheres.size());
}

void search_for(InstanceReport& report, const RunConfig& config, const QuadraticForm& form) {
    const Field& f = form.field();
    const PointSpace space(f, form.dim(), config.enumeration_cap);
    const std::uint64_t q = f.q();
    const std::uint64_t seed =
        derive_seed(config.seed, {0x5eac4ULL, q, static_cast<std::uint64_t>(form.dim()), static_cast<std::uint64_t>(form.kind())});
    Rng rng(seed);

    PointSet points(form.dim());
    SphereSet spheres(form);
    if (config.seed_with_construction) {
        ConstructionResult c = build_single_point(form, Point(static_cast<std::size_t>(form.dim()), f.zero()));
        points = std::move(c.points);
        spheres = std::move(c.spheres);
    } else {
        points = random_point_set(rng, space, std::max<std::uint64_t>(1, config.search_points));
        spheres = random_sphere_set(rng, form, space, f.elements(), std::max<std::uint64_t>(1, config.search_spheres));
    }
    const Rational ceiling = Rational(space.size());  // the simple bound caps the objective at q^d
    Rational best = search_objective(points, spheres);
    std::uint64_t accepted = 0, ceiling_violations = 0;

    for (std::uint64_t step = 0; step < config.steps; ++step) {
        std::vector<Point> pts = points.points();
        std::vector<Sphere> sph = spheres.spheres();
        const bool move_point = rng.coin() && !pts.empty() && pts.size() < space.size();
        if (move_point) {
            Point candidate = space.point(rng.below(space.size()));
            if (points.contains(candidate)) continue;
            pts[rng.below(pts.size())] = std::move(candidate);
        } else {
            if (sph.empty()) continue;
            Point center = space.point(rng.below(space.size()));
            const FieldElement radius{static_cast<std::uint32_t>(rng.below(q))};
            Sphere candidate(form, std::move(center), radius);
            if (std::find(sph.begin(), sph.end(), candidate) != sph.end()) continue;
            sph[rng.below(sph.size())] = std::move(candidate);
        }
        PointSet next_points(form.dim(), std::move(pts));
        SphereSet next_spheres(form);
        for (const Sphere& s : sph) next_spheres.insert(s);
        const Rational value = search_objective(next_points, next_spheres);
        if (value > ceiling) ++ceiling_violations;
        if (value >= best) {
            best = value;
            points = std::move(next_points);
            spheres = std::move(next_spheres);
            ++accepted;
        }
    }
    BoundReport r = check_bound(TheoremId::SIMPLE_1_3, points, spheres);
    r.seed = seed;
    if (ceiling_violations > 0) {
        r.holds = false;
        r.note = std::to_string(ceiling_violations) + " visited instances exceeded the simple bound";
    }
    tally(report, r);
    report.reports.push_back(r);
    const std::string key = std::string(to_string(form.kind())) + "_q" + std::to_string(q) + "_d" + std::to_string(form.dim());
    report.summary.emplace_back("best_ratio_" + key, fmt_double(r.ratio));
    report.summary.emplace_back("accepted_moves_" + key, std::to_string(accepted));
    report.summary.emplace_back("best_sizes_" + key,
                                std::to_string(points.size()) + "x" + std::to_string(spheres.size()));
}

std::string export_path_for(const RunConfig& config, std::size_t combos, const std::string& key) {
    if (config.export_path.empty() || combos <= 1) return config.export_path;
    const std::size_t dot = config.export_path.find_last_of('.');
    if (dot == std::string::npos) return config.export_path + "_" + key;
    return config.export_path.substr(0, dot) + "_" + key + config.export_path.substr(dot);
}

// ---------------------------------------------------------------- emission

ordered_json to_json(const BoundReport& r) {
    ordered_json j;
    j["theorem"] = std::string(to_string(r.theorem));
    j["q"] = r.q;
    j["d"] = r.d;
    j["form"] = r.form;
    j["n_points"] = r.n_points;
    j["n_spheres"] = r.n_spheres;
    j["lhs"] = to_exact_string(r.lhs);
    j["rhs"] = r.rhs;
    j["ratio"] = r.ratio;
    j["holds"] = r.holds;
    j["hypotheses_met"] = r.hypotheses_met;
    j["seed"] = r.seed;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string_view to_string(Command command) {
    switch (command) {
        case Command::VerifyTables: return "verify-tables";
        case Command::VerifyBounds: return "verify-bounds";
        case Command::Construct: return "construct";
        case Command::Search: return "search";
    }
    return "?";
}

std::string_view to_string(OutputFormat format) {
    switch (format) {
        case OutputFormat::Json: return "json";
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Text: return "text";
    }
    return "?";
}

OutputFormat parse_output_format(std::string_view text) {
    if (text == "json") return OutputFormat::Json;
    if (text == "csv") return OutputFormat::Csv;
    if (text == "text") return OutputFormat::Text;
    throw Error(ErrorCode::ParseError, "unknown output format '" + std::string(text) + "'");
}

bool RowCoverage::complete() const {
    return std::all_of(hits.begin(), hits.end(), [](std::uint64_t h) { return h > 0; });
}

void validate_config(const RunConfig& c) {
    const auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
    if (c.trials < 1) fail("trials must be >= 1");
    if (c.q_list.empty() || c.d_list.empty()) fail("q and d lists must be nonempty");
    if (c.forms.empty()) fail("form list must be nonempty");
    for (const std::uint64_t q : c.q_list) {
        make_field_of_order(q);  // throws for non prime powers and even q
        for (const int d : c.d_list) {
            if (d < 2) fail("dimension must be >= 2");
            if (checked_power(q, d) > c.enumeration_cap) {
                fail("q^d = " + std::to_string(checked_power(q, d)) + " exceeds the enumeration cap " +
                     std::to_string(c.enumeration_cap) + " (q=" + std::to_string(q) + ", d=" + std::to_string(d) + ")");
            }
        }
    }
    if (c.command == Command::Construct) {
        if (c.which != "single-point" && c.which != "isotropic" && c.which != "odd-critical") {
            fail("unknown construction '" + c.which + "'");
        }
        for (const int d : c.d_list) {
            if (c.which == "isotropic" && d % 2 != 0) fail("isotropic construction needs even d");
            if (c.which == "odd-critical" && d % 2 != 1) fail("odd-critical construction needs odd d");
        }
        if (c.which == "odd-critical" && c.construct_kind != FormKind::Q3 && c.construct_kind != FormKind::Q4) {
            fail("odd-critical construction uses Q3 or Q4");
        }
    }
}

void InstanceReport::canonicalize() {
    const auto key = [](const BoundReport& r) { return std::tuple(r.theorem, r.q, r.d, r.form, r.seed); };
    std::stable_sort(reports.begin(), reports.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    std::stable_sort(sweeps.begin(), sweeps.end(), [](const SweepRecord& a, const SweepRecord& b) {
        return std::tie(a.theorem, a.q, a.d, a.form) < std::tie(b.theorem, b.q, b.d, b.form);
    });
}

InstanceReport run_verify_tables(const RunConfig& config) {
    validate_config(config);
    InstanceReport report = start_report(config);
    for (const std::uint64_t q : config.q_list) {
        const Field f = make_field_of_order(q);
        for (const int d : config.d_list) {
            for (const FormKind kind : forms_for_dimension(config, d)) {
                verify_tables_for(report, QuadraticForm(kind, d, f), config.enumeration_cap);
            }
        }
    }
    report.canonicalize();
    return report;
}

InstanceReport run_verify_bounds(const RunConfig& config) {
    validate_config(config);
    InstanceReport report = start_report(config);
    std::vector<TheoremId> theorems = config.theorems;
    if (theorems.empty()) theorems.assign(kSweepTheorems.begin(), kSweepTheorems.end());
    const auto wants = [&](TheoremId id) { return std::find(theorems.begin(), theorems.end(), id) != theorems.end(); };

    std::map<std::string, double> max_small_s_ratio;
    for (const std::uint64_t q : config.q_list) {
        const Field f = make_field_of_order(q);
        if (wants(TheoremId::D_ETA_4_4)) {
            SweepState state;
            state.record = SweepRecord{std::string(to_string(TheoremId::D_ETA_4_4)), q, 0, "-"};
            record_instance(report, state, check_lemma_D_eta(f), config.full_reports);
            finish_sweep(report, state, config.full_reports);
        }
        for (const int d : config.d_list) {
            const PointSpace space(f, d, config.enumeration_cap);
            for (const FormKind kind : forms_for_dimension(config, d)) {
                const QuadraticForm form(kind, d, f);
                std::optional<FormOracle> oracle;
                for (const TheoremId theorem : theorems) {
                    if (!theorem_applies(theorem, kind, d, f)) continue;
                    if (!oracle && (theorem == TheoremId::GENERAL_2_3 || theorem == TheoremId::SMALL_S_1_9a ||
                                    theorem == TheoremId::SMALL_S_1_9b || theorem == TheoremId::SMALL_S_1_9c)) {
                        oracle.emplace(form, config.enumeration_cap);
                    }
                    SweepState state;
                    state.record = SweepRecord{std::string(to_string(theorem)), q, d, std::string(to_string(kind))};
                    for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
                        const std::uint64_t seed = derive_seed(
                            config.seed, {static_cast<std::uint64_t>(theorem), q, static_cast<std::uint64_t>(d),
                                          static_cast<std::uint64_t>(kind), trial});
                        Rng rng(seed);
                        const std::uint64_t n = rng.below(std::min(space.size(), config.max_points) + 1);
                        BoundReport r;
                        if (theorem == TheoremId::CHARSUM_4_2) {
                            r = char_sum_distances(random_point_set(rng, space, n), form).report;
                        } else {
                            const auto pool = radius_pool(theorem, form, rng);
                            const std::uint64_t capacity = space.size() * pool.size();
                            const std::uint64_t m = 1 + rng.below(std::min(config.max_spheres, capacity));
                            const SphereSet spheres = random_sphere_set(rng, form, space, pool, m);
                            const PointSet points = random_points_for(rng, space, form, spheres, n);
                            r = check_bound(theorem, points, spheres, {oracle ? &*oracle : nullptr, seed});
                        }
                        r.seed = seed;
                        if (theorem == TheoremId::SMALL_S_1_9a || theorem == TheoremId::SMALL_S_1_9b ||
                            theorem == TheoremId::SMALL_S_1_9c) {
                            auto& best = max_small_s_ratio[std::string(to_string(theorem))];
                            best = std::max(best, r.ratio);
                        }
                        record_instance(report, state, std::move(r), config.full_reports);
                    }
                    finish_sweep(report, state, config.full_reports);
                }
            }
        }
    }
    if (wants(TheoremId::THOMASON_2_1)) sweep_thomason(report, config);
    for (const auto& [theorem, ratio] : max_small_s_ratio) {
        report.summary.emplace_back("max_slack_ratio_" + theorem, fmt_double(ratio));
    }
    report.canonicalize();
    return report;
}

InstanceReport run_construct(const RunConfig& config) {
    validate_config(config);
    InstanceReport report = start_report(config);
    struct Job {
        Field field;
        int d;
        FormKind kind;
    };
    std::vector<Job> jobs;
    for (const std::uint64_t q : config.q_list) {
        const Field f = make_field_of_order(q);
        for (const int d : config.d_list) {
            if (config.which == "single-point") {
                for (const FormKind kind : forms_for_dimension(config, d)) jobs.push_back({f, d, kind});
            } else if (config.which == "isotropic") {
                jobs.push_back({f, d, FormKind::Q1});
            } else {
                jobs.push_back({f, d, config.construct_kind});
            }
        }
    }
    for (const Job& job : jobs) {
        if (checked_power(job.field.q(), job.d) > config.enumeration_cap) {
            throw Error(ErrorCode::InvalidArgument, "construction exceeds the enumeration cap");
        }
        ConstructionResult c = config.which == "single-point"
                                   ? build_single_point(QuadraticForm(job.kind, job.d, job.field),
                                                        Point(static_cast<std::size_t>(job.d), job.field.zero()))
                               : config.which == "isotropic" ? build_isotropic(job.field, job.d)
                                                             : build_odd_critical(job.field, job.d, job.kind);
        const ConstructionEvaluation eval = evaluate_construction(c);
        BoundReport r = eval.bound;
        r.seed = config.seed;
        tally(report, r);
        report.reports.push_back(r);

        const std::string key = c.name + "_" + std::string(to_string(job.kind)) + "_q" + std::to_string(job.field.q()) +
                                "_d" + std::to_string(job.d);
        report.summary.emplace_back("incidences_" + key, std::to_string(eval.incidences));
        if (c.expected_incidences) report.summary.emplace_back("expected_" + key, std::to_string(*c.expected_incidences));
        if (c.claimed_incidences) report.summary.emplace_back("claimed_" + key, std::to_string(*c.claimed_incidences));
        report.summary.emplace_back("deviation_ratio_" + key, fmt_double(r.ratio));
        report.summary.emplace_back("incidence_ratio_" + key, fmt_double(eval.incidence_ratio));
        report.summary.emplace_back("incidences_equal_bound_" + key, eval.incidences_meet_bound ? "true" : "false");
        if (!eval.warning.empty()) report.warnings.push_back(key + ": " + eval.warning);

        const std::string path = export_path_for(config, jobs.size(), key);
        if (!path.empty()) write_instance_file(path, c.points, c.spheres);
    }
    report.canonicalize();
    return report;
}

InstanceReport run_search(const RunConfig& config) {
    validate_config(config);
    InstanceReport report = start_report(config);
    for (const std::uint64_t q : config.q_list) {
        const Field f = make_field_of_order(q);
        for (const int d : config.d_list) {
            for (const FormKind kind : forms_for_dimension(config, d)) search_for(report, config, QuadraticForm(kind, d, f));
        }
    }
    report.canonicalize();
    return report;
}

InstanceReport run_command(const RunConfig& config) {
    switch (config.command) {
        case Command::VerifyTables: return run_verify_tables(config);
        case Command::VerifyBounds: return run_verify_bounds(config);
        case Command::Construct: return run_construct(config);
        case Command::Search: return run_search(config);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown command");
}

std::string emit_report(const InstanceReport& report, OutputFormat format) {
    if (format == OutputFormat::Json) {
        ordered_json j;
        j["reports"] = ordered_json::array();
        for (const auto& r : report.reports) j["reports"].push_back(to_json(r));
        j["checked"] = report.checked;
        j["passed"] = report.passed;
        j["failed"] = report.failed;
        j["skipped"] = report.skipped;
        j["command"] = report.command;
        j["version"] = report.version;
        ordered_json config = ordered_json::object();
        for (const auto& [k, v] : report.config) config[k] = v;
        j["config"] = config;
        if (!report.tables.empty()) {
            j["table_checks"] = ordered_json::array();
            for (const auto& t : report.tables) {
                j["table_checks"].push_back({{"check", t.check}, {"form", t.form}, {"q", t.q}, {"d", t.d}, {"row", t.row},
                                             {"cases", t.cases}, {"mismatches", t.mismatches}, {"example", t.example}});
            }
        }
        if (!report.coverage.empty()) {
            j["row_coverage"] = ordered_json::array();
            for (const auto& c : report.coverage) {
                ordered_json rows = ordered_json::object();
                for (int row = 0; row < kTableRows; ++row) {
                    rows[std::string(to_string(static_cast<TableRow>(row)))] = c.hits[static_cast<std::size_t>(row)];
                }
                j["row_coverage"].push_back({{"form", c.form}, {"q", c.q}, {"d", c.d}, {"complete", c.complete()}, {"rows", rows}});
            }
        }
        if (!report.sweeps.empty()) {
            j["sweeps"] = ordered_json::array();
            for (const auto& s : report.sweeps) {
                j["sweeps"].push_back({{"theorem", s.theorem}, {"q", s.q}, {"d", s.d}, {"form", s.form},
                                       {"instances", s.instances}, {"violations", s.violations}, {"skipped", s.skipped},
                                       {"max_ratio", s.max_ratio}, {"max_ratio_seed", s.max_ratio_seed}});
            }
        }
        if (!report.warnings.empty()) j["warnings"] = report.warnings;
        if (!report.summary.empty()) {
            ordered_json summary = ordered_json::object();
            for (const auto& [k, v] : report.summary) summary[k] = v;
            j["summary"] = summary;
        }
        return j.dump(2) + "\n";
    }

    std::ostringstream out;
    if (format == OutputFormat::Csv) {
        out << "theorem,q,d,form,n_points,n_spheres,lhs,rhs,ratio,holds,hypotheses_met,seed\n";
        for (const auto& r : report.reports) {
            out << to_string(r.theorem) << ',' << r.q << ',' << r.d << ',' << csv_field(r.form) << ',' << r.n_points << ','
                << r.n_spheres << ',' << to_exact_string(r.lhs) << ',' << r.rhs << ',' << fmt_double(r.ratio) << ','
                << (r.holds ? "true" : "false") << ',' << (r.hypotheses_met ? "true" : "false") << ',' << r.seed << '\n';
        }
        if (!report.tables.empty()) {
            out << "\ncheck,form,q,d,row,cases,mismatches,example\n";
            for (const auto& t : report.tables) {
                out << t.check << ',' << t.form << ',' << t.q << ',' << t.d << ',' << csv_field(t.row) << ',' << t.cases << ','
                    << t.mismatches << ',' << csv_field(t.example) << '\n';
            }
        }
        if (!report.sweeps.empty()) {
            out << "\ntheorem,q,d,form,instances,violations,skipped,max_ratio,max_ratio_seed\n";
            for (const auto& s : report.sweeps) {
                out << s.theorem << ',' << s.q << ',' << s.d << ',' << s.form << ',' << s.instances << ',' << s.violations
                    << ',' << s.skipped << ',' << fmt_double(s.max_ratio) << ',' << s.max_ratio_seed << '\n';
            }
        }
        return out.str();
    }

    out << "qsphere " << report.command << " (version " << report.version << ")\n";
    for (const auto& [k, v] : report.config) out << "  " << k << " = " << v << "\n";
    for (const auto& t : report.tables) {
        out << (t.mismatches == 0 ? "PASS " : "FAIL ") << t.check << ' ' << t.form << " q=" << t.q << " d=" << t.d;
        if (!t.row.empty()) out << " row[" << t.row << "]";
        out << " cases=" << t.cases << " mismatches=" << t.mismatches << "  " << t.example << "\n";
    }
    for (const auto& s : report.sweeps) {
        out << (s.violations == 0 ? "PASS " : "FAIL ") << s.theorem << " q=" << s.q << " d=" << s.d << ' ' << s.form
            << " instances=" << s.instances << " violations=" << s.violations << " skipped=" << s.skipped
            << " max_ratio=" << fmt_double(s.max_ratio) << "\n";
    }
    if (report.sweeps.empty()) {
        for (const auto& r : report.reports) {
            out << (!r.hypotheses_met ? "SKIP " : r.holds ? "PASS " : "FAIL ") << to_string(r.theorem) << " q=" << r.q
                << " d=" << r.d << ' ' << r.form << " |P|=" << r.n_points << " |S|=" << r.n_spheres
                << " lhs=" << to_exact_string(r.lhs) << " rhs=" << r.rhs << " ratio=" << fmt_double(r.ratio) << "\n";
        }
    }
    for (const auto& w : report.warnings) out << "WARNING " << w << "\n";
    for (const auto& [k, v] : report.summary) out << "  " << k << ": " << v << "\n";
    out << "checked=" << report.checked << " passed=" << report.passed << " failed=" << report.failed
        << " skipped=" << report.skipped << "\n";
    return out.str();
}

void write_report(const InstanceReport& report, const RunConfig& config, std::ostream& out) {
    const std::string text = emit_report(report, config.format);
    if (config.output_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(config.output_path, std::ios::binary);
    if (!file) throw Error(ErrorCode::IOError, "cannot open '" + config.output_path + "' for writing");
    file << text;
    if (!file) throw Error(ErrorCode::IOError, "failed writing '" + config.output_path + "'");
}

}  // namespace qsphere

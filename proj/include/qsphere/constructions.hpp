#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qsphere/incidence.hpp"

namespace qsphere {

struct ConstructionResult {
    std::string name;
    PointSet points;
    SphereSet spheres;
    /// Closed-form incidence count, when the construction has one; otherwise
    /// the count is taken from the oracle.
    std::optional<std::uint64_t> expected_incidences;
    /// A published count that is reported next to the oracle but not trusted.
    std::optional<std::uint64_t> claimed_incidences;
    std::string notes;
};

/// P = {x} and the q^d spheres through x, one per center.
ConstructionResult build_single_point(const QuadraticForm& form, const Point& x);

/// The isotropic subspace span{e1, e3, ..., e_{d-1}} of Q1 with the zero-radius
/// spheres centered on it. Throws OddDimension.
ConstructionResult build_isotropic(const Field& field, int d);

/// P = {(0,x1,0,x2,...,0,x_{(d-1)/2},y)} for Q3 or Q4, with every sphere centered in P
/// whose radius r satisfies eta(r) = (-1)^{i+1} eta(-1). Throws EvenDimension.
ConstructionResult build_odd_critical(const Field& field, int d, FormKind kind);

struct ConstructionEvaluation {
    std::uint64_t incidences = 0;
    /// Against sqrt(q^d |P| |S|): deviation ratio (in the bound report) and raw incidence ratio.
    BoundReport bound;
    double incidence_ratio = 0.0;
    /// I^2 == q^d |P| |S|.
    bool incidences_meet_bound = false;
    bool expectation_mismatch = false;
    bool claim_mismatch = false;
    std::string warning;
};

/// Recounts incidences, compares them with the recorded expectations and
/// evaluates the deviation against the simple bound. A disagreement with a
/// closed-form expectation sets expectation_mismatch; a disagreement with a
/// published claim only produces a warning.
ConstructionEvaluation evaluate_construction(const ConstructionResult& construction);

}  // namespace qsphere

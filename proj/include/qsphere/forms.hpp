#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "qsphere/field.hpp"

namespace qsphere {

using Point = std::vector<FieldElement>;

/// Canonical non-degenerate forms. Q1/Q2 live in even dimension, Q3/Q4 in
/// odd dimension; Norm is the sum of squares in any dimension >= 2.
///   Q1 = x1x2 + ... + x_{d-1}x_d
///   Q2 = x1x2 + ... + x_{d-3}x_{d-2} + x_{d-1}^2 - eps x_d^2
///   Q3 = x1x2 + ... + x_{d-2}x_{d-1} - x_d^2
///   Q4 = x1x2 + ... + x_{d-2}x_{d-1} - eps x_d^2
enum class FormKind { Q1, Q2, Q3, Q4, Norm };

std::string_view to_string(FormKind kind);
FormKind parse_form_kind(std::string_view text);
/// 1..4 for Q1..Q4; throws for Norm.
int form_index(FormKind kind);
/// Whether `kind` may be used in dimension d.
bool kind_supports_dimension(FormKind kind, int d) noexcept;

class QuadraticForm {
public:
    /// eps defaults to the field's smallest nonsquare.
    QuadraticForm(FormKind kind, int d, Field field);
    QuadraticForm(FormKind kind, int d, Field field, FieldElement epsilon);

    FormKind kind() const noexcept { return kind_; }
    int dim() const noexcept { return d_; }
    const Field& field() const noexcept { return field_; }
    FieldElement epsilon() const noexcept { return epsilon_; }

    /// The equivalent canonical kind: the kind itself, or the class of the norm form.
    FormKind canonical_kind() const;

    FieldElement operator()(std::span<const FieldElement> x) const;
    /// Q(a - b).
    FieldElement difference(std::span<const FieldElement> a, std::span<const FieldElement> b) const;

    /// Symmetric matrix A with Q(x) = x^T A x, row-major d x d.
    std::vector<FieldElement> matrix() const;

    bool operator==(const QuadraticForm& other) const noexcept;

private:
    FormKind kind_;
    int d_;
    Field field_;
    FieldElement epsilon_;
    int hyperbolic_pairs_ = 0;
};

FieldElement eval_form(const QuadraticForm& form, std::span<const FieldElement> x);

/// x^T A x for a row-major n x n matrix.
FieldElement bilinear_value(const Field& field, std::span<const FieldElement> matrix, std::span<const FieldElement> x);

/// Determinant by Gaussian elimination over the field.
FieldElement determinant(const Field& field, std::vector<FieldElement> matrix, int n);

/// eta(det A) computed from the associated matrix.
int form_det_character(const QuadraticForm& form);

/// Closed forms: eta((-1)^{d/2}) for Q1, its negation for Q2, eta((-1)^{(d+1)/2})
/// for Q3, its negation for Q4, and 1 for Norm.
int form_det_character_closed(FormKind kind, int d, const Field& field);

/// The canonical kind the sum-of-squares form is equivalent to in dimension d.
FormKind norm_equivalence_class(int d, const Field& field);

}  // namespace qsphere

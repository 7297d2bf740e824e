#include "qsphere/forms.hpp"

#include <string>

#include "qsphere/error.hpp"

namespace qsphere {

std::string_view to_string(FormKind kind) {
    switch (kind) {
        case FormKind::Q1: return "Q1";
        case FormKind::Q2: return "Q2";
        case FormKind::Q3: return "Q3";
        case FormKind::Q4: return "Q4";
        case FormKind::Norm: return "norm";
    }
    return "?";
}

FormKind parse_form_kind(std::string_view text) {
    if (text == "Q1" || text == "q1") return FormKind::Q1;
    if (text == "Q2" || text == "q2") return FormKind::Q2;
    if (text == "Q3" || text == "q3") return FormKind::Q3;
    if (text == "Q4" || text == "q4") return FormKind::Q4;
    if (text == "norm" || text == "Norm") return FormKind::Norm;
    throw Error(ErrorCode::ParseError, "unknown form kind '" + std::string(text) + "'");
}

int form_index(FormKind kind) {
    switch (kind) {
        case FormKind::Q1: return 1;
        case FormKind::Q2: return 2;
        case FormKind::Q3: return 3;
        case FormKind::Q4: return 4;
        case FormKind::Norm: break;
    }
    throw Error(ErrorCode::InvalidArgument, "norm form has no canonical index");
}

bool kind_supports_dimension(FormKind kind, int d) noexcept {
    if (d < 2) return false;
    switch (kind) {
        case FormKind::Q1:
        case FormKind::Q2: return d % 2 == 0;
        case FormKind::Q3:
        case FormKind::Q4: return d % 2 == 1;
        case FormKind::Norm: return true;
    }
    return false;
}

QuadraticForm::QuadraticForm(FormKind kind, int d, Field field)
    : QuadraticForm(kind, d, field, field.smallest_nonsquare()) {}

QuadraticForm::QuadraticForm(FormKind kind, int d, Field field, FieldElement epsilon)
    : kind_(kind), d_(d), field_(std::move(field)), epsilon_(epsilon) {
    if (d < 2) throw Error(ErrorCode::DimensionTooSmall, "forms need dimension >= 2");
    if (!kind_supports_dimension(kind, d)) {
        throw Error(ErrorCode::ParityMismatch,
                    std::string(to_string(kind)) + " is not defined in dimension " + std::to_string(d));
    }
    if (field_.eta(epsilon_) != -1) throw Error(ErrorCode::InvalidArgument, "epsilon must be a nonsquare");
    switch (kind) {
        case FormKind::Q1: hyperbolic_pairs_ = d / 2; break;
        case FormKind::Q2: hyperbolic_pairs_ = d / 2 - 1; break;
        case FormKind::Q3:
        case FormKind::Q4: hyperbolic_pairs_ = (d - 1) / 2; break;
        case FormKind::Norm: hyperbolic_pairs_ = 0; break;
    }
}

FormKind QuadraticForm::canonical_kind() const {
    return kind_ == FormKind::Norm ? norm_equivalence_class(d_, field_) : kind_;
}

FieldElement QuadraticForm::operator()(std::span<const FieldElement> x) const {
    if (x.size() != static_cast<std::size_t>(d_)) {
        throw Error(ErrorCode::DimensionMismatch, "point has wrong dimension");
    }
    const Field& f = field_;
    FieldElement acc = f.zero();
    if (kind_ == FormKind::Norm) {
        for (const FieldElement xi : x) acc = f.add(acc, f.mul(xi, xi));
        return acc;
    }
    for (int h = 0; h < hyperbolic_pairs_; ++h) {
        acc = f.add(acc, f.mul(x[2 * h], x[2 * h + 1]));
    }
    const FieldElement last = x[static_cast<std::size_t>(d_ - 1)];
    switch (kind_) {
        case FormKind::Q1: break;
        case FormKind::Q2: {
            const FieldElement prev = x[static_cast<std::size_t>(d_ - 2)];
            acc = f.add(acc, f.mul(prev, prev));
            acc = f.sub(acc, f.mul(epsilon_, f.mul(last, last)));
            break;
        }
        case FormKind::Q3: acc = f.sub(acc, f.mul(last, last)); break;
        case FormKind::Q4: acc = f.sub(acc, f.mul(epsilon_, f.mul(last, last))); break;
        case FormKind::Norm: break;
    }
    return acc;
}

FieldElement QuadraticForm::difference(std::span<const FieldElement> a, std::span<const FieldElement> b) const {
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "points differ in dimension");
    Point diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = field_.sub(a[i], b[i]);
    return (*this)(diff);
}

std::vector<FieldElement> QuadraticForm::matrix() const {
    const Field& f = field_;
    const auto n = static_cast<std::size_t>(d_);
    std::vector<FieldElement> a(n * n, f.zero());
    if (kind_ == FormKind::Norm) {
        for (std::size_t i = 0; i < n; ++i) a[i * n + i] = f.one();
        return a;
    }
    const FieldElement half = f.inv(f.from_int(2));
    for (int h = 0; h < hyperbolic_pairs_; ++h) {
        const auto i = static_cast<std::size_t>(2 * h);
        a[i * n + i + 1] = half;
        a[(i + 1) * n + i] = half;
    }
    const std::size_t last = n - 1;
    switch (kind_) {
        case FormKind::Q2:
            a[(last - 1) * n + last - 1] = f.one();
            a[last * n + last] = f.neg(epsilon_);
            break;
        case FormKind::Q3: a[last * n + last] = f.neg(f.one()); break;
        case FormKind::Q4: a[last * n + last] = f.neg(epsilon_); break;
        default: break;
    }
    return a;
}

bool QuadraticForm::operator==(const QuadraticForm& other) const noexcept {
    return kind_ == other.kind_ && d_ == other.d_ && field_ == other.field_ && epsilon_ == other.epsilon_;
}

FieldElement eval_form(const QuadraticForm& form, std::span<const FieldElement> x) { return form(x); }

FieldElement bilinear_value(const Field& f, std::span<const FieldElement> matrix, std::span<const FieldElement> x) {
    const std::size_t n = x.size();
    if (matrix.size() != n * n) throw Error(ErrorCode::DimensionMismatch, "matrix does not match vector");
    FieldElement acc = f.zero();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            acc = f.add(acc, f.mul(matrix[i * n + j], f.mul(x[i], x[j])));
        }
    }
    return acc;
}

FieldElement determinant(const Field& f, std::vector<FieldElement> m, int n) {
    const auto size = static_cast<std::size_t>(n);
    if (m.size() != size * size) throw Error(ErrorCode::DimensionMismatch, "matrix is not n x n");
    FieldElement det = f.one();
    for (std::size_t col = 0; col < size; ++col) {
        std::size_t pivot = col;
        while (pivot < size && m[pivot * size + col] == f.zero()) ++pivot;
        if (pivot == size) return f.zero();
        if (pivot != col) {
            for (std::size_t j = 0; j < size; ++j) std::swap(m[pivot * size + j], m[col * size + j]);
            det = f.neg(det);
        }
        const FieldElement lead = m[col * size + col];
        det = f.mul(det, lead);
        const FieldElement lead_inv = f.inv(lead);
        for (std::size_t row = col + 1; row < size; ++row) {
            const FieldElement factor = f.mul(m[row * size + col], lead_inv);
            if (factor == f.zero()) continue;
            for (std::size_t j = col; j < size; ++j) {
                m[row * size + j] = f.sub(m[row * size + j], f.mul(factor, m[col * size + j]));
            }
        }
    }
    return det;
}

int form_det_character(const QuadraticForm& form) {
    return form.field().eta(determinant(form.field(), form.matrix(), form.dim()));
}

int form_det_character_closed(FormKind kind, int d, const Field& field) {
    const auto minus_one_power = [&](int e) { return field.eta(field.from_int(e % 2 == 0 ? 1 : -1)); };
    switch (kind) {
        case FormKind::Q1: return minus_one_power(d / 2);
        case FormKind::Q2: return -minus_one_power(d / 2);
        case FormKind::Q3: return minus_one_power((d + 1) / 2);
        case FormKind::Q4: return -minus_one_power((d + 1) / 2);
        case FormKind::Norm: return 1;
    }
    return 0;
}

FormKind norm_equivalence_class(int d, const Field& field) {
    if (d < 2) throw Error(ErrorCode::DimensionTooSmall, "dimension must be >= 2");
    const bool q3mod4 = field.q() % 4 == 3;
    if (d % 2 == 0) return (q3mod4 && d % 4 == 2) ? FormKind::Q2 : FormKind::Q1;
    return (q3mod4 && d % 4 == 1) ? FormKind::Q4 : FormKind::Q3;
}

}  // namespace qsphere

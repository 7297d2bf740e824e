#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace qsphere {

/// An element of GF(q), stored as its enumeration index: the coefficient
/// vector (c_0, ..., c_{k-1}) in the basis 1, a, ..., a^{k-1} read as the
/// base-p integer c_0 + c_1 p + ... + c_{k-1} p^{k-1}. Index 0 is zero and
/// index 1 is one; the prime subfield occupies indices 0..p-1.
struct FieldElement {
    std::uint32_t index = 0;

    friend constexpr auto operator<=>(FieldElement, FieldElement) = default;
};

enum class ArithOp { Add, Sub, Mul, Div, Neg, Inv };

/// GF(p^k) for an odd prime p. Copies share the same immutable tables.
class Field {
public:
    static constexpr std::uint64_t kDefaultMaxOrder = 10000;

    std::uint32_t p() const noexcept;
    int k() const noexcept;
    std::uint32_t q() const noexcept;

    /// Monic modulus, coefficients from the constant term upward (length k+1).
    /// For k = 1 this is the polynomial X and is never used.
    const std::vector<std::uint32_t>& modulus() const noexcept;

    FieldElement zero() const noexcept { return {0}; }
    FieldElement one() const noexcept { return {1}; }
    FieldElement element(std::uint64_t index) const;
    /// Image of an integer under Z -> GF(p) -> GF(q).
    FieldElement from_int(std::int64_t value) const noexcept;
    FieldElement from_coeffs(std::span<const std::uint32_t> coeffs) const;
    std::vector<std::uint32_t> coeffs(FieldElement x) const;

    FieldElement add(FieldElement a, FieldElement b) const noexcept;
    FieldElement sub(FieldElement a, FieldElement b) const noexcept;
    FieldElement neg(FieldElement a) const noexcept;
    FieldElement mul(FieldElement a, FieldElement b) const noexcept;
    FieldElement inv(FieldElement a) const;
    FieldElement div(FieldElement a, FieldElement b) const;
    FieldElement pow(FieldElement a, std::uint64_t e) const noexcept;
    FieldElement square(FieldElement a) const noexcept { return mul(a, a); }

    /// Quadratic character: 0 at zero, 1 on nonzero squares, -1 otherwise.
    int eta(FieldElement x) const noexcept;
    /// The character evaluated directly as x^{(q-1)/2}; used to cross-check eta.
    int eta_by_power(FieldElement x) const noexcept;
    /// Membership in the table of squares {y^2 : y in GF(q)}.
    bool is_square(FieldElement x) const noexcept;

    /// All q elements in index order.
    std::vector<FieldElement> elements() const;
    /// First element in index order with eta = -1.
    FieldElement smallest_nonsquare() const noexcept;

    bool operator==(const Field& other) const noexcept;

private:
    struct Impl;
    explicit Field(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    friend Field make_field(std::uint32_t p, int k, std::uint64_t max_order);

    std::shared_ptr<const Impl> impl_;
};

/// Builds GF(p^k) with the smallest monic irreducible modulus of degree k,
/// where polynomials are ordered by the base-p index of their lower k
/// coefficients. Throws NotPrime, EvenCharacteristic or TooLarge.
Field make_field(std::uint32_t p, int k = 1, std::uint64_t max_order = Field::kDefaultMaxOrder);

/// make_field from the field order q; q must be an odd prime power.
Field make_field_of_order(std::uint64_t q, std::uint64_t max_order = Field::kDefaultMaxOrder);

FieldElement arith(const Field& field, ArithOp op, FieldElement a, FieldElement b = {});

bool is_prime(std::uint64_t n) noexcept;

/// Odd prime powers in [3, limit], ascending.
std::vector<std::uint64_t> odd_prime_powers(std::uint64_t limit);

}  // namespace qsphere

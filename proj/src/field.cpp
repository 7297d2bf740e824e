#include "qsphere/field.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "qsphere/error.hpp"

namespace qsphere {

namespace {

// Add/mul tables are kept for fields up to this order (2 tables of q^2 entries).
constexpr std::uint32_t kTableOrderLimit = 1024;

using Poly = std::vector<std::uint32_t>;  // coefficients, constant term first

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
    std::int64_t t = 0, new_t = 1, r = p, new_r = a;
    while (new_r != 0) {
        const std::int64_t quotient = r / new_r;
        t = std::exchange(new_t, t - quotient * new_t);
        r = std::exchange(new_r, r - quotient * new_r);
    }
    return static_cast<std::uint32_t>(t < 0 ? t + p : t);
}

// Remainder of f modulo a monic g over GF(p).
Poly poly_mod(Poly f, const Poly& g, std::uint32_t p) {
    trim(f);
    const std::size_t dg = g.size() - 1;
    while (f.size() > dg) {
        const std::uint32_t lead = f.back();
        const std::size_t shift = f.size() - 1 - dg;
        for (std::size_t i = 0; i <= dg; ++i) {
            const std::uint64_t sub = static_cast<std::uint64_t>(lead) * g[i] % p;
            f[shift + i] = static_cast<std::uint32_t>((f[shift + i] + p - sub) % p);
        }
        trim(f);
    }
    return f;
}

// Monic polynomial of the given degree whose lower coefficients are the base-p digits of idx.
Poly monic_from_index(std::uint64_t idx, int degree, std::uint32_t p) {
    Poly f(static_cast<std::size_t>(degree) + 1, 0);
    for (int i = 0; i < degree; ++i) {
        f[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(idx % p);
        idx /= p;
    }
    f.back() = 1;
    return f;
}

std::uint64_t ipow(std::uint64_t base, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

bool is_irreducible(const Poly& f, std::uint32_t p) {
    const int k = static_cast<int>(f.size()) - 1;
    for (int m = 1; m <= k / 2; ++m) {
        const std::uint64_t count = ipow(p, m);
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            if (poly_mod(f, monic_from_index(idx, m, p), p).empty()) return false;
        }
    }
    return true;
}

Poly canonical_modulus(std::uint32_t p, int k) {
    if (k == 1) return {0, 1};
    const std::uint64_t count = ipow(p, k);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        Poly f = monic_from_index(idx, k, p);
        if (is_irreducible(f, p)) return f;
    }
    throw Error(ErrorCode::InvalidArgument, "no irreducible polynomial found");  // unreachable
}

}  // namespace

struct Field::Impl {
    std::uint32_t p = 0;
    int k = 1;
    std::uint32_t q = 0;
    Poly modulus;
    std::vector<std::uint32_t> place;  // p^j
    std::vector<std::uint16_t> add_table;
    std::vector<std::uint16_t> mul_table;
    std::vector<std::uint32_t> neg_table;
    std::vector<std::uint32_t> inv_table;
    std::vector<std::int8_t> eta_table;
    std::vector<bool> square_table;
    std::uint32_t smallest_nonsquare = 0;

    std::uint32_t add_raw(std::uint32_t a, std::uint32_t b) const {
        if (k == 1) return (a + b) % p;
        std::uint32_t r = 0;
        for (int j = 0; j < k; ++j) {
            const std::uint32_t da = a % p, db = b % p;
            r += ((da + db) % p) * place[static_cast<std::size_t>(j)];
            a /= p;
            b /= p;
        }
        return r;
    }

    std::uint32_t neg_raw(std::uint32_t a) const {
        if (k == 1) return (p - a) % p;
        std::uint32_t r = 0;
        for (int j = 0; j < k; ++j) {
            r += ((p - a % p) % p) * place[static_cast<std::size_t>(j)];
            a /= p;
        }
        return r;
    }

    std::uint32_t mul_raw(std::uint32_t a, std::uint32_t b) const {
        if (k == 1) return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p);
        Poly fa(static_cast<std::size_t>(k)), fb(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) {
            fa[static_cast<std::size_t>(j)] = a % p;
            fb[static_cast<std::size_t>(j)] = b % p;
            a /= p;
            b /= p;
        }
        Poly prod(static_cast<std::size_t>(2 * k - 1), 0);
        for (std::size_t i = 0; i < fa.size(); ++i) {
            for (std::size_t j = 0; j < fb.size(); ++j) {
                prod[i + j] = static_cast<std::uint32_t>(
                    (prod[i + j] + static_cast<std::uint64_t>(fa[i]) * fb[j]) % p);
            }
        }
        const Poly rem = poly_mod(std::move(prod), modulus, p);
        std::uint32_t r = 0;
        for (std::size_t j = 0; j < rem.size(); ++j) r += rem[j] * place[j];
        return r;
    }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        return add_table.empty() ? add_raw(a, b) : add_table[static_cast<std::size_t>(a) * q + b];
    }

    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        return mul_table.empty() ? mul_raw(a, b) : mul_table[static_cast<std::size_t>(a) * q + b];
    }

    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
        std::uint32_t result = 1;
        while (e > 0) {
            if (e & 1U) result = mul(result, a);
            a = mul(a, a);
            e >>= 1U;
        }
        return result;
    }
};

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

std::vector<std::uint64_t> odd_prime_powers(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 3; p <= limit; p += 2) {
        if (!is_prime(p)) continue;
        for (std::uint64_t q = p; q <= limit; q *= p) out.push_back(q);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Field make_field(std::uint32_t p, int k, std::uint64_t max_order) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "extension degree must be positive");
    if (p == 2) throw Error(ErrorCode::EvenCharacteristic, "characteristic 2 is not supported");
    if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
    std::uint64_t q = 1;
    for (int i = 0; i < k; ++i) {
        q *= p;
        if (q > max_order) {
            throw Error(ErrorCode::TooLarge, "field order exceeds " + std::to_string(max_order));
        }
    }

    auto impl = std::make_shared<Field::Impl>();
    impl->p = p;
    impl->k = k;
    impl->q = static_cast<std::uint32_t>(q);
    impl->modulus = canonical_modulus(p, k);
    impl->place.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) impl->place[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(ipow(p, j));

    const std::uint32_t n = impl->q;
    if (n <= kTableOrderLimit) {
        impl->add_table.resize(static_cast<std::size_t>(n) * n);
        impl->mul_table.resize(static_cast<std::size_t>(n) * n);
        for (std::uint32_t a = 0; a < n; ++a) {
            for (std::uint32_t b = 0; b < n; ++b) {
                impl->add_table[static_cast<std::size_t>(a) * n + b] = static_cast<std::uint16_t>(impl->add_raw(a, b));
                impl->mul_table[static_cast<std::size_t>(a) * n + b] = static_cast<std::uint16_t>(impl->mul_raw(a, b));
            }
        }
    }
    impl->neg_table.resize(n);
    impl->inv_table.assign(n, 0);
    impl->eta_table.assign(n, 0);
    impl->square_table.assign(n, false);
    for (std::uint32_t a = 0; a < n; ++a) {
        impl->neg_table[a] = impl->neg_raw(a);
        impl->square_table[impl->mul(a, a)] = true;
        if (a == 0) continue;
        impl->inv_table[a] = (k == 1) ? inv_mod(a, p) : impl->pow(a, q - 2);
        const std::uint32_t half = impl->pow(a, (q - 1) / 2);
        impl->eta_table[a] = (half == 1) ? 1 : -1;
    }
    for (std::uint32_t a = 1; a < n; ++a) {
        if (impl->eta_table[a] == -1) {
            impl->smallest_nonsquare = a;
            break;
        }
    }
    return Field(std::move(impl));
}

Field make_field_of_order(std::uint64_t q, std::uint64_t max_order) {
    if (q < 3) throw Error(ErrorCode::InvalidArgument, "field order must be an odd prime power >= 3");
    std::uint64_t p = 2;
    while (q % p != 0) ++p;
    int k = 0;
    std::uint64_t rest = q;
    while (rest % p == 0) {
        rest /= p;
        ++k;
    }
    if (rest != 1) throw Error(ErrorCode::NotPrime, std::to_string(q) + " is not a prime power");
    if (p > 0xffffffffULL) throw Error(ErrorCode::TooLarge, "characteristic too large");
    return make_field(static_cast<std::uint32_t>(p), k, max_order);
}

std::uint32_t Field::p() const noexcept { return impl_->p; }
int Field::k() const noexcept { return impl_->k; }
std::uint32_t Field::q() const noexcept { return impl_->q; }
const std::vector<std::uint32_t>& Field::modulus() const noexcept { return impl_->modulus; }

FieldElement Field::element(std::uint64_t index) const {
    if (index >= impl_->q) {
        throw Error(ErrorCode::InvalidArgument,
                    "element index " + std::to_string(index) + " out of range for q=" + std::to_string(impl_->q));
    }
    return {static_cast<std::uint32_t>(index)};
}

FieldElement Field::from_int(std::int64_t value) const noexcept {
    const auto p = static_cast<std::int64_t>(impl_->p);
    return {static_cast<std::uint32_t>(((value % p) + p) % p)};
}

FieldElement Field::from_coeffs(std::span<const std::uint32_t> c) const {
    if (c.size() != static_cast<std::size_t>(impl_->k)) {
        throw Error(ErrorCode::DimensionMismatch, "coefficient vector must have length k");
    }
    std::uint32_t r = 0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] >= impl_->p) throw Error(ErrorCode::InvalidArgument, "coefficient not reduced mod p");
        r += c[j] * impl_->place[j];
    }
    return {r};
}

std::vector<std::uint32_t> Field::coeffs(FieldElement x) const {
    std::vector<std::uint32_t> c(static_cast<std::size_t>(impl_->k));
    std::uint32_t v = x.index;
    for (auto& digit : c) {
        digit = v % impl_->p;
        v /= impl_->p;
    }
    return c;
}

FieldElement Field::add(FieldElement a, FieldElement b) const noexcept { return {impl_->add(a.index, b.index)}; }
FieldElement Field::neg(FieldElement a) const noexcept { return {impl_->neg_table[a.index]}; }
FieldElement Field::sub(FieldElement a, FieldElement b) const noexcept {
    return {impl_->add(a.index, impl_->neg_table[b.index])};
}
FieldElement Field::mul(FieldElement a, FieldElement b) const noexcept { return {impl_->mul(a.index, b.index)}; }

FieldElement Field::inv(FieldElement a) const {
    if (a.index == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
    return {impl_->inv_table[a.index]};
}

FieldElement Field::div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }

FieldElement Field::pow(FieldElement a, std::uint64_t e) const noexcept { return {impl_->pow(a.index, e)}; }

int Field::eta(FieldElement x) const noexcept { return impl_->eta_table[x.index]; }

int Field::eta_by_power(FieldElement x) const noexcept {
    if (x.index == 0) return 0;
    const std::uint32_t half = impl_->pow(x.index, (impl_->q - 1) / 2);
    return half == 1 ? 1 : -1;
}

bool Field::is_square(FieldElement x) const noexcept { return impl_->square_table[x.index]; }

std::vector<FieldElement> Field::elements() const {
    std::vector<FieldElement> out(impl_->q);
    for (std::uint32_t i = 0; i < impl_->q; ++i) out[i] = {i};
    return out;
}

FieldElement Field::smallest_nonsquare() const noexcept { return {impl_->smallest_nonsquare}; }

bool Field::operator==(const Field& other) const noexcept {
    return impl_ == other.impl_ || (impl_->p == other.impl_->p && impl_->k == other.impl_->k);
}

FieldElement arith(const Field& field, ArithOp op, FieldElement a, FieldElement b) {
    switch (op) {
        case ArithOp::Add: return field.add(a, b);
        case ArithOp::Sub: return field.sub(a, b);
        case ArithOp::Mul: return field.mul(a, b);
        case ArithOp::Div: return field.div(a, b);
        case ArithOp::Neg: return field.neg(a);
        case ArithOp::Inv: return field.inv(a);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown arithmetic operation");
}

}  // namespace qsphere

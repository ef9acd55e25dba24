#pragma once

// Exact arithmetic for the two group families the laboratory works in:
// the cyclic ring Z/NZ and the additive group of F_{p^m}.
//
// Elements are stored as canonical indices in [0, |G|):
//   - cyclic: the reduced residue itself;
//   - field:  sum_i c_i p^i where c_0..c_{m-1} are the coefficients of
//     the reduced polynomial representative (low degree first).
// Equality of elements is equality of indices.

#include <cstdint>
#include <string>
#include <vector>

namespace forge {

using Elem = std::int64_t;

enum class GroupKind { Cyclic, FieldAdditive };

struct PrimePower {
    std::int64_t prime = 0;
    int exponent = 0;
    bool operator==(const PrimePower&) const = default;
};

// Roughness profile (Omega, R): satisfied iff the factorization has at
// most Omega prime factors, every exponent is at most Omega, and every
// prime is at least R.
struct RoughnessProfile {
    int omega = 1;
    std::int64_t min_prime = 2;
};

class GroupSpec {
public:
    static constexpr std::int64_t kMaxOrder = std::int64_t{1} << 31;

    GroupSpec() = default;  // empty placeholder; construct via the factories

    static GroupSpec cyclic(std::int64_t N);
    static GroupSpec field(std::int64_t p, int m);
    // Field with an explicitly supplied monic modulus polynomial
    // (m+1 coefficients, low degree first); irreducibility is verified.
    static GroupSpec field_with_modulus(std::int64_t p, int m,
                                        std::vector<std::int64_t> modulus_poly);

    GroupKind kind() const { return kind_; }
    bool is_cyclic() const { return kind_ == GroupKind::Cyclic; }
    bool is_field() const { return kind_ == GroupKind::FieldAdditive; }
    std::int64_t size() const { return size_; }

    // Cyclic accessors.
    std::int64_t modulus() const;
    const std::vector<PrimePower>& factorization() const;

    // Field accessors.
    std::int64_t characteristic() const;
    int extension_degree() const;
    const std::vector<std::int64_t>& modulus_poly() const;

    // Group law on canonical indices.
    Elem add(Elem a, Elem b) const;
    Elem neg(Elem a) const;
    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

    // Ring / field multiplication, powers, inverses.
    Elem mul(Elem a, Elem b) const;
    Elem pow(Elem a, std::int64_t e) const;
    bool is_unit(Elem a) const;
    Elem inv(Elem a) const;

    Elem zero() const { return 0; }
    Elem one() const;
    // Canonical embedding of a (possibly negative) integer: residue for
    // cyclic groups, scalar multiple of 1 in the prime subfield for fields.
    Elem from_integer(std::int64_t v) const;

    // Trace to the prime subfield, as an integer in [0, p). Field only.
    std::int64_t trace(Elem x) const;

    // Digit/coefficient views for field elements.
    std::vector<std::int64_t> field_coeffs(Elem x) const;
    Elem elem_from_coeffs(const std::vector<std::int64_t>& coeffs) const;

    bool check_elem(Elem x) const { return x >= 0 && x < size_; }

    bool satisfies(const RoughnessProfile& profile) const;

    bool operator==(const GroupSpec& o) const;
    bool operator!=(const GroupSpec& o) const { return !(*this == o); }

    std::string to_json() const;
    static GroupSpec from_json(const std::string& text);
    std::string describe() const;

private:
    void init_field_tables();

    GroupKind kind_ = GroupKind::Cyclic;
    std::int64_t size_ = 0;

    // Cyclic data.
    std::int64_t modulus_ = 0;
    std::vector<PrimePower> factors_;

    // Field data.
    std::int64_t char_p_ = 0;
    int degree_m_ = 0;
    std::vector<std::int64_t> poly_;        // m+1 coeffs, monic, low degree first
    std::vector<std::int64_t> pow_p_;       // p^0..p^m
    std::vector<std::vector<std::int64_t>> red_rows_;  // x^{m+j} mod poly
    std::vector<std::int64_t> trace_basis_; // trace(x^i), i < m
};

// Group utilities.
bool is_prime(std::int64_t n);
std::vector<PrimePower> factorize(std::int64_t n);
std::int64_t mod_pow(std::int64_t base, std::int64_t exp, std::int64_t mod);
std::int64_t mod_inverse(std::int64_t a, std::int64_t mod);

std::vector<Elem> units(const GroupSpec& g);
std::int64_t largest_proper_subgroup_size(const GroupSpec& g);

// CRT split/join for cyclic groups: p1_power must divide N exactly
// (gcd(p1_power, N / p1_power) == 1).
struct CrtPair {
    Elem mod_p1_power = 0;
    Elem mod_rest = 0;
};
CrtPair crt_split(Elem x, const GroupSpec& g, std::int64_t p1_power);
Elem crt_join(const CrtPair& uv, const GroupSpec& g, std::int64_t p1_power);

// Irreducibility of a monic polynomial over F_p (coeffs low degree first).
bool poly_is_irreducible(const std::vector<std::int64_t>& poly, std::int64_t p);

}  // namespace forge

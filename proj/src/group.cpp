#include "forge/group.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace forge {

namespace {

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t mod) {
    return static_cast<std::int64_t>(
        static_cast<__int128>(a) * b % mod);
}

// Polynomial helpers over F_p, coefficients low degree first, trailing
// zeros trimmed.
using Poly = std::vector<std::int64_t>;

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

int deg(const Poly& f) { return static_cast<int>(f.size()) - 1; }

Poly poly_mod(Poly f, const Poly& g, std::int64_t p) {
    trim(f);
    const int dg = deg(g);
    const std::int64_t lead_inv = mod_inverse(g.back(), p);
    while (deg(f) >= dg) {
        const std::int64_t c = mul_mod(f.back(), lead_inv, p);
        const int shift = deg(f) - dg;
        for (int i = 0; i <= dg; ++i) {
            f[i + shift] = (f[i + shift] - mul_mod(c, g[i], p) % p + p) % p;
        }
        trim(f);
    }
    return f;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& g, std::int64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] = (out[i + j] + mul_mod(a[i], b[j], p)) % p;
        }
    }
    return poly_mod(std::move(out), g, p);
}

Poly poly_powmod(Poly base, std::int64_t e, const Poly& g, std::int64_t p) {
    Poly result{1};
    base = poly_mod(std::move(base), g, p);
    while (e > 0) {
        if (e & 1) result = poly_mulmod(result, base, g, p);
        base = poly_mulmod(base, base, g, p);
        e >>= 1;
    }
    return result;
}

Poly poly_gcd(Poly a, Poly b, std::int64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

}  // namespace

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % d == 0) return n == d;
    }
    // Deterministic Miller-Rabin for 64-bit inputs.
    std::int64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::int64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::int64_t x = mod_pow(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

std::vector<PrimePower> factorize(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be positive");
    std::vector<PrimePower> out;
    for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            out.push_back({p, e});
        }
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

std::int64_t mod_pow(std::int64_t base, std::int64_t exp, std::int64_t mod) {
    if (mod <= 0) throw std::invalid_argument("mod_pow: bad modulus");
    std::int64_t r = 1 % mod;
    base %= mod;
    if (base < 0) base += mod;
    while (exp > 0) {
        if (exp & 1) r = mul_mod(r, base, mod);
        base = mul_mod(base, base, mod);
        exp >>= 1;
    }
    return r;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t mod) {
    std::int64_t t = 0, new_t = 1, r = mod, new_r = a % mod;
    if (new_r < 0) new_r += mod;
    while (new_r != 0) {
        const std::int64_t q = r / new_r;
        std::tie(t, new_t) = std::make_tuple(new_t, t - q * new_t);
        std::tie(r, new_r) = std::make_tuple(new_r, r - q * new_r);
    }
    if (r != 1) throw std::domain_error("mod_inverse: element not invertible");
    return t < 0 ? t + mod : t;
}

bool poly_is_irreducible(const std::vector<std::int64_t>& poly, std::int64_t p) {
    Poly f = poly;
    trim(f);
    const int m = deg(f);
    if (m < 1) return false;
    // Rabin test: x^{p^m} == x mod f, and gcd(x^{p^{m/r}} - x, f) = 1 for
    // every prime r dividing m.
    std::int64_t pm = 1;
    for (int i = 0; i < m; ++i) {
        if (pm > GroupSpec::kMaxOrder / p) return false;  // out of desk scale
        pm *= p;
    }
    const Poly x{0, 1};
    Poly xp = poly_powmod(x, pm, f, p);
    Poly diff = xp;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] - 1 + p) % p;
    diff = poly_mod(std::move(diff), f, p);  // matters when deg f == 1
    if (!diff.empty()) return false;
    for (const auto& [r, e] : factorize(m)) {
        std::int64_t pk = 1;
        for (int i = 0; i < m / r; ++i) pk *= p;
        Poly xq = poly_powmod(x, pk, f, p);
        Poly d = xq;
        if (d.size() < 2) d.resize(2, 0);
        d[1] = (d[1] - 1 + p) % p;
        trim(d);
        if (d.empty()) return false;
        if (deg(poly_gcd(f, d, p)) != 0) return false;
    }
    return true;
}

GroupSpec GroupSpec::cyclic(std::int64_t N) {
    if (N < 2 || N > kMaxOrder)
        throw std::invalid_argument("GroupSpec::cyclic: N out of range [2, 2^31]");
    GroupSpec g;
    g.kind_ = GroupKind::Cyclic;
    g.size_ = N;
    g.modulus_ = N;
    g.factors_ = factorize(N);
    return g;
}

GroupSpec GroupSpec::field(std::int64_t p, int m) {
    if (!is_prime(p)) throw std::invalid_argument("GroupSpec::field: p is not prime");
    if (m < 1) throw std::invalid_argument("GroupSpec::field: m must be >= 1");
    std::int64_t q = 1;
    for (int i = 0; i < m; ++i) {
        if (q > kMaxOrder / p) throw std::invalid_argument("GroupSpec::field: p^m exceeds 2^31");
        q *= p;
    }
    // Least monic irreducible of degree m, candidates ordered by the
    // value sum_i c_i p^i so that higher-degree coefficients weigh more
    // (the order that yields x^3+x+1 over F_2 and x^2+1 over F_3).
    std::vector<std::int64_t> poly(m + 1, 0);
    poly[m] = 1;
    for (std::int64_t v = 0; v < q; ++v) {
        std::int64_t t = v;
        for (int i = 0; i < m; ++i) { poly[i] = t % p; t /= p; }
        if (poly_is_irreducible(poly, p)) break;
        if (v + 1 == q) throw std::logic_error("GroupSpec::field: no irreducible found");
    }
    return field_with_modulus(p, m, poly);
}

GroupSpec GroupSpec::field_with_modulus(std::int64_t p, int m,
                                        std::vector<std::int64_t> modulus_poly) {
    if (!is_prime(p)) throw std::invalid_argument("GroupSpec::field: p is not prime");
    if (m < 1 || static_cast<int>(modulus_poly.size()) != m + 1 || modulus_poly[m] != 1)
        throw std::invalid_argument("GroupSpec::field: modulus must be monic of degree m");
    for (auto& c : modulus_poly) {
        c %= p;
        if (c < 0) c += p;
    }
    if (!poly_is_irreducible(modulus_poly, p))
        throw std::invalid_argument("GroupSpec::field: modulus polynomial is reducible");
    GroupSpec g;
    g.kind_ = GroupKind::FieldAdditive;
    g.char_p_ = p;
    g.degree_m_ = m;
    g.poly_ = std::move(modulus_poly);
    g.size_ = 1;
    for (int i = 0; i < m; ++i) g.size_ *= p;
    g.init_field_tables();
    return g;
}

void GroupSpec::init_field_tables() {
    const std::int64_t p = char_p_;
    const int m = degree_m_;
    pow_p_.assign(m + 1, 1);
    for (int i = 1; i <= m; ++i) pow_p_[i] = pow_p_[i - 1] * p;

    // x^{m+j} mod poly for j in [0, m): reduction rows for schoolbook
    // multiplication.
    red_rows_.assign(m, std::vector<std::int64_t>(m, 0));
    std::vector<std::int64_t> cur(m, 0);  // x^m mod poly = -(c_0..c_{m-1})
    for (int i = 0; i < m; ++i) cur[i] = (p - poly_[i]) % p;
    red_rows_[0] = cur;
    for (int j = 1; j < m; ++j) {
        // multiply cur by x, reduce.
        std::vector<std::int64_t> next(m, 0);
        const std::int64_t top = cur[m - 1];
        for (int i = m - 1; i >= 1; --i) next[i] = cur[i - 1];
        next[0] = 0;
        if (top != 0) {
            for (int i = 0; i < m; ++i)
                next[i] = (next[i] + top * ((p - poly_[i]) % p)) % p;
        }
        red_rows_[j] = next;
        cur = std::move(next);
    }

    // trace(x^i) = sum_{k<m} (x^i)^{p^k}; trace is F_p-linear in the
    // coefficients, so these m values determine it everywhere.
    trace_basis_.assign(m, 0);
    for (int i = 0; i < m; ++i) {
        Elem t = pow_p_[i];  // index of the basis monomial x^i
        Elem acc = 0;
        for (int k = 0; k < m; ++k) {
            acc = add(acc, t);
            t = pow(t, char_p_);
        }
        // acc lies in the prime subfield, so its index is the scalar itself.
        trace_basis_[i] = acc;
    }
}

std::int64_t GroupSpec::modulus() const {
    if (!is_cyclic()) throw std::domain_error("modulus: not a cyclic group");
    return modulus_;
}

const std::vector<PrimePower>& GroupSpec::factorization() const {
    if (!is_cyclic()) throw std::domain_error("factorization: not a cyclic group");
    return factors_;
}

std::int64_t GroupSpec::characteristic() const {
    if (!is_field()) throw std::domain_error("characteristic: not a field group");
    return char_p_;
}

int GroupSpec::extension_degree() const {
    if (!is_field()) throw std::domain_error("extension_degree: not a field group");
    return degree_m_;
}

const std::vector<std::int64_t>& GroupSpec::modulus_poly() const {
    if (!is_field()) throw std::domain_error("modulus_poly: not a field group");
    return poly_;
}

Elem GroupSpec::add(Elem a, Elem b) const {
    if (is_cyclic()) {
        Elem r = a + b;
        if (r >= size_) r -= size_;
        return r;
    }
    // digitwise mod p
    Elem out = 0;
    for (int i = 0; i < degree_m_; ++i) {
        const std::int64_t da = (a / pow_p_[i]) % char_p_;
        const std::int64_t db = (b / pow_p_[i]) % char_p_;
        std::int64_t d = da + db;
        if (d >= char_p_) d -= char_p_;
        out += d * pow_p_[i];
    }
    return out;
}

Elem GroupSpec::neg(Elem a) const {
    if (is_cyclic()) return a == 0 ? 0 : size_ - a;
    Elem out = 0;
    for (int i = 0; i < degree_m_; ++i) {
        const std::int64_t da = (a / pow_p_[i]) % char_p_;
        out += (da == 0 ? 0 : char_p_ - da) * pow_p_[i];
    }
    return out;
}

Elem GroupSpec::mul(Elem a, Elem b) const {
    if (is_cyclic()) return mul_mod(a, b, size_);
    const int m = degree_m_;
    const std::int64_t p = char_p_;
    std::vector<std::int64_t> da(m), db(m);
    for (int i = 0; i < m; ++i) { da[i] = (a / pow_p_[i]) % p; db[i] = (b / pow_p_[i]) % p; }
    std::vector<std::int64_t> prod(2 * m - 1, 0);
    for (int i = 0; i < m; ++i) {
        if (da[i] == 0) continue;
        for (int j = 0; j < m; ++j)
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
    }
    // fold the high part with the precomputed reduction rows.
    for (int j = 0; j < m - 1; ++j) {
        const std::int64_t c = prod[m + j];
        if (c == 0) continue;
        for (int i = 0; i < m; ++i)
            prod[i] = (prod[i] + c * red_rows_[j][i]) % p;
    }
    Elem out = 0;
    for (int i = 0; i < m; ++i) out += prod[i] * pow_p_[i];
    return out;
}

Elem GroupSpec::pow(Elem a, std::int64_t e) const {
    if (e < 0) {
        a = inv(a);
        e = -e;
    }
    Elem r = one();
    while (e > 0) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

Elem GroupSpec::one() const { return is_cyclic() ? (size_ > 1 ? 1 : 0) : 1; }

Elem GroupSpec::from_integer(std::int64_t v) const {
    if (is_cyclic()) {
        std::int64_t r = v % size_;
        if (r < 0) r += size_;
        return r;
    }
    std::int64_t r = v % char_p_;
    if (r < 0) r += char_p_;
    return r;  // constant polynomial r
}

bool GroupSpec::is_unit(Elem a) const {
    if (!check_elem(a)) return false;
    if (is_cyclic()) return std::gcd(a, size_) == 1;
    return a != 0;
}

Elem GroupSpec::inv(Elem a) const {
    if (!is_unit(a)) throw std::domain_error("inv: element not invertible");
    if (is_cyclic()) return mod_inverse(a, size_);
    return pow(a, size_ - 2);  // a^{q-2} = a^{-1} in F_q
}

std::int64_t GroupSpec::trace(Elem x) const {
    if (!is_field()) throw std::domain_error("trace: not a field group");
    std::int64_t t = 0;
    for (int i = 0; i < degree_m_; ++i) {
        const std::int64_t ci = (x / pow_p_[i]) % char_p_;
        t = (t + ci * trace_basis_[i]) % char_p_;
    }
    return t;
}

std::vector<std::int64_t> GroupSpec::field_coeffs(Elem x) const {
    if (!is_field()) throw std::domain_error("field_coeffs: not a field group");
    std::vector<std::int64_t> out(degree_m_);
    for (int i = 0; i < degree_m_; ++i) out[i] = (x / pow_p_[i]) % char_p_;
    return out;
}

Elem GroupSpec::elem_from_coeffs(const std::vector<std::int64_t>& coeffs) const {
    if (!is_field()) throw std::domain_error("elem_from_coeffs: not a field group");
    if (static_cast<int>(coeffs.size()) > degree_m_)
        throw std::invalid_argument("elem_from_coeffs: too many coefficients");
    Elem out = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        std::int64_t c = coeffs[i] % char_p_;
        if (c < 0) c += char_p_;
        out += c * pow_p_[i];
    }
    return out;
}

bool GroupSpec::satisfies(const RoughnessProfile& profile) const {
    if (is_field()) {
        return 1 <= profile.omega && degree_m_ <= profile.omega &&
               char_p_ >= profile.min_prime;
    }
    if (static_cast<int>(factors_.size()) > profile.omega) return false;
    for (const auto& f : factors_) {
        if (f.exponent > profile.omega) return false;
        if (f.prime < profile.min_prime) return false;
    }
    return true;
}

bool GroupSpec::operator==(const GroupSpec& o) const {
    if (kind_ != o.kind_) return false;
    if (is_cyclic()) return modulus_ == o.modulus_;
    return char_p_ == o.char_p_ && degree_m_ == o.degree_m_ && poly_ == o.poly_;
}

std::string GroupSpec::to_json() const {
    nlohmann::json j;
    if (is_cyclic()) {
        j["kind"] = "cyclic";
        j["N"] = modulus_;
    } else {
        j["kind"] = "field";
        j["p"] = char_p_;
        j["m"] = degree_m_;
        j["poly"] = poly_;
    }
    return j.dump();
}

GroupSpec GroupSpec::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "cyclic") return cyclic(j.at("N").get<std::int64_t>());
    if (kind == "field") {
        const auto p = j.at("p").get<std::int64_t>();
        const auto m = j.at("m").get<int>();
        if (j.contains("poly"))
            return field_with_modulus(p, m, j.at("poly").get<std::vector<std::int64_t>>());
        return field(p, m);
    }
    throw std::invalid_argument("GroupSpec::from_json: unknown kind " + kind);
}

std::string GroupSpec::describe() const {
    std::ostringstream os;
    if (is_cyclic()) {
        os << "Z/" << modulus_;
    } else {
        os << "F_" << size_;
        if (degree_m_ > 1) os << " (p=" << char_p_ << ", m=" << degree_m_ << ")";
    }
    return os.str();
}

std::vector<Elem> units(const GroupSpec& g) {
    std::vector<Elem> out;
    for (Elem x = 0; x < g.size(); ++x) {
        if (g.is_unit(x)) out.push_back(x);
    }
    return out;
}

std::int64_t largest_proper_subgroup_size(const GroupSpec& g) {
    if (g.is_field()) return g.size() / g.characteristic();
    return g.size() / g.factorization().front().prime;
}

namespace {
// p1_power must be a prime power dividing N exactly.
void check_exact_prime_power_divisor(std::int64_t N, std::int64_t p1_power,
                                     const char* who) {
    if (p1_power < 2 || N % p1_power != 0 ||
        std::gcd(p1_power, N / p1_power) != 1 ||
        factorize(p1_power).size() != 1)
        throw std::invalid_argument(std::string(who) +
                                    ": p1_power is not an exact prime-power divisor of N");
}
}  // namespace

CrtPair crt_split(Elem x, const GroupSpec& g, std::int64_t p1_power) {
    const std::int64_t N = g.modulus();
    check_exact_prime_power_divisor(N, p1_power, "crt_split");
    return {x % p1_power, x % (N / p1_power)};
}

Elem crt_join(const CrtPair& uv, const GroupSpec& g, std::int64_t p1_power) {
    const std::int64_t N = g.modulus();
    check_exact_prime_power_divisor(N, p1_power, "crt_join");
    const std::int64_t Nrest = N / p1_power;
    // x = u*N'*Gamma + v*p1^{m1}*gamma with Gamma = (N')^{-1} mod p1^{m1},
    // gamma = (p1^{m1})^{-1} mod N'.
    const std::int64_t Gamma = mod_inverse(Nrest % p1_power, p1_power);
    const std::int64_t gamma = mod_inverse(p1_power % Nrest, Nrest);
    const __int128 term1 = static_cast<__int128>(uv.mod_p1_power) * (Nrest % N) % N * (Gamma % N) % N;
    const __int128 term2 = static_cast<__int128>(uv.mod_rest) * (p1_power % N) % N * (gamma % N) % N;
    return static_cast<Elem>((term1 + term2) % N);
}

}  // namespace forge

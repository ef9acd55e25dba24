#include "forge/charsums.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace forge {

namespace {

// e(j / n) for j in [0, n): one table per call site; n is p (field traces)
// or p^m (cyclic evaluations), both desk scale.
std::vector<std::complex<double>> root_table(std::int64_t n) {
    std::vector<std::complex<double>> t(n);
    for (std::int64_t j = 0; j < n; ++j)
        t[j] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) /
                                   static_cast<double>(n));
    return t;
}

}  // namespace

PolySpec::PolySpec(GroupSpec g, std::vector<Elem> coeffs)
    : group(std::move(g)), coefficients(std::move(coeffs)) {
    if (coefficients.empty()) coefficients.push_back(0);
    for (const Elem c : coefficients) {
        if (!group.check_elem(c))
            throw std::invalid_argument("PolySpec: coefficient out of range");
    }
}

int PolySpec::degree() const {
    for (int i = static_cast<int>(coefficients.size()) - 1; i >= 1; --i) {
        if (coefficients[i] != 0) return i;
    }
    return 0;
}

Elem PolySpec::eval(Elem x) const {
    Elem acc = 0;
    for (int i = static_cast<int>(coefficients.size()) - 1; i >= 0; --i) {
        acc = group.add(group.mul(acc, x), coefficients[i]);
    }
    return acc;
}

std::string PolySpec::describe() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        if (i) os << "+";
        os << coefficients[i];
        if (i >= 1) os << "x^" << i;
    }
    return os.str();
}

std::complex<double> additive_character(const GroupSpec& g, Elem alpha, Elem x) {
    if (!g.is_field())
        throw std::domain_error("additive_character: field groups only");
    const std::int64_t p = g.characteristic();
    const std::int64_t t = g.trace(g.mul(alpha, x));
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(t) /
                               static_cast<double>(p));
}

SumCertificate complete_weil_sum(const PolySpec& P) {
    const GroupSpec& g = P.group;
    if (!g.is_field())
        throw std::domain_error("complete_weil_sum: field groups only");
    const int k = P.degree();
    if (k == 0) throw std::invalid_argument("complete_weil_sum: degree 0 polynomial");

    const std::int64_t p = g.characteristic();
    const auto roots = root_table(p);
    std::complex<double> sum{0.0, 0.0};
    for (Elem x = 0; x < g.size(); ++x) {
        sum += roots[g.trace(P.eval(x))];
    }

    SumCertificate cert;
    cert.bound_kind = BoundKind::Deligne;
    cert.sum = sum;
    cert.modulus = std::abs(sum);
    cert.bound = static_cast<double>(k - 1) * std::sqrt(static_cast<double>(g.size()));
    cert.applicable = (k % p != 0);
    cert.ratio = cert.bound > 0.0 ? cert.modulus / cert.bound
                                  : (cert.modulus <= kCertTolerance ? 0.0
                                     : std::numeric_limits<double>::infinity());
    cert.pass = cert.applicable && cert.modulus <= cert.bound + kCertTolerance;
    return cert;
}

SumCertificate prime_power_sum(const PolySpec& P) {
    const GroupSpec& g = P.group;
    if (!g.is_cyclic() || g.factorization().size() != 1)
        throw std::domain_error("prime_power_sum: modulus must be a prime power");
    const std::int64_t p = g.factorization()[0].prime;
    const int m = g.factorization()[0].exponent;
    const int k = P.degree();
    if (k == 0) throw std::invalid_argument("prime_power_sum: degree 0 polynomial");
    if (p <= k)
        throw std::invalid_argument("prime_power_sum: hypothesis p > k violated");

    const auto roots = root_table(g.size());
    std::complex<double> sum{0.0, 0.0};
    for (Elem x = 0; x < g.size(); ++x) {
        sum += roots[P.eval(x)];
    }

    SumCertificate cert;
    cert.bound_kind = BoundKind::PrimePower;
    cert.sum = sum;
    cert.modulus = std::abs(sum);
    cert.bound = std::pow(static_cast<double>(p),
                          static_cast<double>(m) - 1.0 / static_cast<double>(k));
    cert.ratio = cert.modulus / cert.bound;
    cert.applicable = true;
    cert.pass = true;  // no implied constant to assert; ratio is the record
    return cert;
}

}  // namespace forge

#pragma once

// Complete exponential sums over F_q and Z/p^mZ with certified comparison
// against the Deligne bound (k-1)sqrt(q) and the prime-power reference
// p^{m-1/k}. Sums are evaluated directly by Horner's rule with
// precomputed root-of-unity tables.

#include <complex>
#include <cstdint>
#include <vector>

#include "forge/group.hpp"

namespace forge {

struct PolySpec {
    GroupSpec group;
    std::vector<Elem> coefficients;  // low degree first, reduced

    PolySpec(GroupSpec g, std::vector<Elem> coeffs);
    // Index of the last nonzero non-constant coefficient (0 if linear
    // terms and above all vanish).
    int degree() const;
    Elem eval(Elem x) const;  // Horner
    std::string describe() const;
};

enum class BoundKind { Deligne, PrimePower };

struct SumCertificate {
    std::complex<double> sum{0.0, 0.0};
    double modulus = 0.0;
    double bound = 0.0;   // (k-1)sqrt(q), or p^{m-1/k} for the prime-power kind
    double ratio = 0.0;   // modulus / bound (0 when both vanish)
    BoundKind bound_kind = BoundKind::Deligne;
    bool applicable = true;  // Deligne: p does not divide k
    bool pass = true;        // Deligne only; PrimePower certificates report ratios
};

inline constexpr double kCertTolerance = 1e-6;

// psi_alpha(x) = e_p(Tr(alpha x)); psi_0 = 1. Field groups only.
std::complex<double> additive_character(const GroupSpec& g, Elem alpha, Elem x);

// sum_{x in F_q} psi_1(P(x)) with pass iff |sum| <= (k-1)sqrt(q) + tol.
SumCertificate complete_weil_sum(const PolySpec& P);

// sum_{x mod p^m} e_{p^m}(P(x)); requires p > k; reports ratio against
// p^{m-1/k} without asserting any implied constant.
SumCertificate prime_power_sum(const PolySpec& P);

}  // namespace forge

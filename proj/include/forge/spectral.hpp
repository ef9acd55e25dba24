#pragma once

// Discrete Fourier analysis on G with the conventions used throughout:
//
//   fhat(gamma) = sum_x f(x) gamma(x),
//   f(y)        = |G|^{-1} sum_gamma fhat(gamma) conj(gamma(y)),
//
// where the dual labels are xi in [0,N) with gamma_xi(x) = e(xi x / N) for
// cyclic groups, and alpha in F_q with psi_alpha(x) = e_p(Tr(alpha x)) for
// field groups. Label 0 is always the trivial character.
//
// Dual norms carry the |G|^{-1} normalisation:
//   ||g||_q = (|G|^{-1} sum |g(gamma)|^q)^{1/q},  ||g||_inf = max |g|.

#include <complex>
#include <cstdint>
#include <vector>

#include "forge/group.hpp"

namespace forge {

using cdouble = std::complex<double>;

struct DenseComplexFunction {
    GroupSpec group;
    std::vector<cdouble> values;  // indexed by canonical element order

    DenseComplexFunction() = default;
    DenseComplexFunction(GroupSpec g, std::vector<cdouble> v);
    static DenseComplexFunction zeros(const GroupSpec& g);
};

struct WeightedFunction {
    GroupSpec group;
    std::vector<std::int64_t> counts;  // all >= 0

    WeightedFunction() = default;
    WeightedFunction(GroupSpec g, std::vector<std::int64_t> c);
    static WeightedFunction zeros(const GroupSpec& g);
    static WeightedFunction indicator(const GroupSpec& g, const std::vector<Elem>& members);
    static WeightedFunction full(const GroupSpec& g);

    std::int64_t mass() const;
    std::int64_t support_size() const;
    std::vector<Elem> support() const;
    bool is_indicator() const;
};

struct Spectrum {
    GroupSpec group;
    std::vector<cdouble> values;  // indexed by dual label
};

DenseComplexFunction to_complex(const WeightedFunction& f);

Spectrum dft(const DenseComplexFunction& f);
Spectrum dft(const WeightedFunction& f);
DenseComplexFunction idft(const Spectrum& s);

// Integer-exact convolution (f1*f2)(x) = sum_y f1(y) f2(x-y). Spectral
// product with a near-integer guard; on guard violation falls back to the
// direct O(|G|^2) sum (groups up to kDirectFallbackCap) or throws.
inline constexpr std::int64_t kDirectFallbackCap = 1 << 15;
WeightedFunction convolve(const WeightedFunction& f1, const WeightedFunction& f2);
WeightedFunction convolve_direct(const WeightedFunction& f1, const WeightedFunction& f2);

// Normalised dual norm; exponent may be std::numeric_limits<double>::infinity().
double norm_q(const Spectrum& s, double exponent);

// All dual labels gamma with |fhat(gamma)| > threshold, ascending.
std::vector<std::int64_t> large_spectrum(const WeightedFunction& f, double threshold);

// CSV (index,re,im) round trip for fixture comparison.
std::string spectrum_to_csv(const Spectrum& s);
std::string function_to_csv(const DenseComplexFunction& f);

}  // namespace forge

#include "forge/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace forge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(std::size_t n) { return n && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t r = 1;
    while (r < n) r <<= 1;
    return r;
}

// Iterative radix-2 transform, sign = +1 computes sum a_j e(+jk/n).
void fft_pow2(std::vector<cdouble>& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * kTwoPi / static_cast<double>(len);
        const cdouble wl = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            cdouble w{1.0, 0.0};
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cdouble u = a[i + j];
                const cdouble v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// Chirp tables for Bluestein, cached per length.
struct BluesteinPlan {
    std::size_t n = 0;
    std::size_t m = 0;                  // convolution length, power of two
    std::vector<cdouble> chirp;         // e(+ k^2 / 2n), k < n
    std::vector<cdouble> kernel_fft_pos;  // fft of conj-chirp kernel (sign +1)
    std::vector<cdouble> kernel_fft_neg;  // fft of chirp kernel (sign -1)
};

const BluesteinPlan& bluestein_plan(std::size_t n) {
    static std::unordered_map<std::size_t, BluesteinPlan> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    BluesteinPlan plan;
    plan.n = n;
    plan.m = next_pow2(2 * n - 1);
    plan.chirp.resize(n);
    const std::int64_t two_n = static_cast<std::int64_t>(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the phase argument small and exact.
        const std::int64_t k2 = static_cast<std::int64_t>(
            (static_cast<__int128>(k) * k) % two_n);
        plan.chirp[k] = std::polar(1.0, kTwoPi * static_cast<double>(k2) /
                                            static_cast<double>(two_n));
    }
    std::vector<cdouble> kernel(plan.m, cdouble{0.0, 0.0});
    kernel[0] = std::conj(plan.chirp[0]);
    for (std::size_t k = 1; k < n; ++k) {
        kernel[k] = std::conj(plan.chirp[k]);
        kernel[plan.m - k] = std::conj(plan.chirp[k]);
    }
    fft_pow2(kernel, +1);
    plan.kernel_fft_pos = kernel;
    for (auto& v : kernel) v = cdouble{0.0, 0.0};
    kernel[0] = plan.chirp[0];
    for (std::size_t k = 1; k < n; ++k) {
        kernel[k] = plan.chirp[k];
        kernel[plan.m - k] = plan.chirp[k];
    }
    fft_pow2(kernel, +1);
    plan.kernel_fft_neg = std::move(kernel);
    return cache.emplace(n, std::move(plan)).first->second;
}

// Arbitrary-length transform with sign convention out_k = sum_j in_j e(sign jk/n).
std::vector<cdouble> dft_any(const std::vector<cdouble>& in, int sign) {
    const std::size_t n = in.size();
    if (n == 0) return {};
    if (n == 1) return in;
    if (is_pow2(n)) {
        std::vector<cdouble> a = in;
        fft_pow2(a, sign);
        return a;
    }
    // Bluestein: jk = (j^2 + k^2 - (k-j)^2)/2, so the transform is a
    // chirp-modulated circular convolution of power-of-two length.
    const BluesteinPlan& plan = bluestein_plan(n);
    const auto& kernel_fft = sign > 0 ? plan.kernel_fft_pos : plan.kernel_fft_neg;
    std::vector<cdouble> a(plan.m, cdouble{0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) {
        const cdouble c = plan.chirp[j];
        a[j] = in[j] * (sign > 0 ? c : std::conj(c));
    }
    fft_pow2(a, +1);
    for (std::size_t i = 0; i < plan.m; ++i) a[i] *= kernel_fft[i];
    fft_pow2(a, -1);
    const double scale = 1.0 / static_cast<double>(plan.m);
    std::vector<cdouble> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const cdouble c = plan.chirp[k];
        out[k] = a[k] * scale * (sign > 0 ? c : std::conj(c));
    }
    return out;
}

// Field transform support: the multi-dimensional transform over digit
// vectors, then the trace-pairing relabel alpha -> xi(alpha).
struct FieldPlan {
    std::vector<std::int64_t> relabel;  // index of xi(alpha) for each alpha
};

const FieldPlan& field_plan(const GroupSpec& g) {
    static std::unordered_map<std::string, FieldPlan> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    const std::string key = g.to_json();  // distinguishes modulus polynomials
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const std::int64_t p = g.characteristic();
    const int m = g.extension_degree();
    const std::int64_t q = g.size();
    // T[i][j] = trace(x^i x^j); xi(alpha)_i = sum_j T[i][j] alpha_j.
    std::vector<std::vector<std::int64_t>> T(m, std::vector<std::int64_t>(m));
    std::vector<std::int64_t> pow_p(m, 1);
    for (int i = 1; i < m; ++i) pow_p[i] = pow_p[i - 1] * p;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            T[i][j] = g.trace(g.mul(pow_p[i], pow_p[j]));
        }
    }
    FieldPlan plan;
    plan.relabel.resize(q);
    std::vector<std::int64_t> alpha_digits(m);
    for (std::int64_t alpha = 0; alpha < q; ++alpha) {
        std::int64_t t = alpha;
        for (int i = 0; i < m; ++i) { alpha_digits[i] = t % p; t /= p; }
        std::int64_t xi_index = 0;
        for (int i = 0; i < m; ++i) {
            std::int64_t xi_i = 0;
            for (int j = 0; j < m; ++j) xi_i += T[i][j] * alpha_digits[j] % p;
            xi_index += (xi_i % p) * pow_p[i];
        }
        plan.relabel[alpha] = xi_index;
    }
    return cache.emplace(key, std::move(plan)).first->second;
}

// Apply length-p transforms along every digit axis of the p^m cube.
void field_multidim(std::vector<cdouble>& data, std::int64_t p, int m, int sign) {
    const std::size_t pp = static_cast<std::size_t>(p);
    std::size_t stride = 1;
    std::vector<cdouble> line(pp);
    for (int axis = 0; axis < m; ++axis) {
        const std::size_t block = stride * pp;
        for (std::size_t base = 0; base < data.size(); base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (std::size_t k = 0; k < pp; ++k)
                    line[k] = data[base + off + k * stride];
                auto out = dft_any(line, sign);
                for (std::size_t k = 0; k < pp; ++k)
                    data[base + off + k * stride] = out[k];
            }
        }
        stride *= pp;
    }
}

}  // namespace

DenseComplexFunction::DenseComplexFunction(GroupSpec g, std::vector<cdouble> v)
    : group(std::move(g)), values(std::move(v)) {
    if (static_cast<std::int64_t>(values.size()) != group.size())
        throw std::invalid_argument("DenseComplexFunction: length must equal |G|");
}

DenseComplexFunction DenseComplexFunction::zeros(const GroupSpec& g) {
    return DenseComplexFunction(g, std::vector<cdouble>(g.size(), cdouble{0.0, 0.0}));
}

WeightedFunction::WeightedFunction(GroupSpec g, std::vector<std::int64_t> c)
    : group(std::move(g)), counts(std::move(c)) {
    if (static_cast<std::int64_t>(counts.size()) != group.size())
        throw std::invalid_argument("WeightedFunction: length must equal |G|");
    for (const auto v : counts) {
        if (v < 0) throw std::invalid_argument("WeightedFunction: counts must be >= 0");
    }
}

WeightedFunction WeightedFunction::zeros(const GroupSpec& g) {
    return WeightedFunction(g, std::vector<std::int64_t>(g.size(), 0));
}

WeightedFunction WeightedFunction::indicator(const GroupSpec& g,
                                             const std::vector<Elem>& members) {
    std::vector<std::int64_t> c(g.size(), 0);
    for (const Elem x : members) {
        if (!g.check_elem(x))
            throw std::invalid_argument("indicator: element out of range");
        c[x] = 1;
    }
    return WeightedFunction(g, std::move(c));
}

WeightedFunction WeightedFunction::full(const GroupSpec& g) {
    return WeightedFunction(g, std::vector<std::int64_t>(g.size(), 1));
}

std::int64_t WeightedFunction::mass() const {
    std::int64_t m = 0;
    for (const auto v : counts) m += v;
    return m;
}

std::int64_t WeightedFunction::support_size() const {
    std::int64_t m = 0;
    for (const auto v : counts) m += (v != 0);
    return m;
}

std::vector<Elem> WeightedFunction::support() const {
    std::vector<Elem> out;
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (counts[i] != 0) out.push_back(static_cast<Elem>(i));
    return out;
}

bool WeightedFunction::is_indicator() const {
    for (const auto v : counts)
        if (v > 1) return false;
    return true;
}

DenseComplexFunction to_complex(const WeightedFunction& f) {
    std::vector<cdouble> v(f.counts.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = cdouble{static_cast<double>(f.counts[i]), 0.0};
    return DenseComplexFunction(f.group, std::move(v));
}

Spectrum dft(const DenseComplexFunction& f) {
    Spectrum s;
    s.group = f.group;
    if (f.group.is_cyclic()) {
        s.values = dft_any(f.values, +1);
        return s;
    }
    const std::int64_t p = f.group.characteristic();
    const int m = f.group.extension_degree();
    std::vector<cdouble> cube = f.values;
    field_multidim(cube, p, m, +1);
    const FieldPlan& plan = field_plan(f.group);
    s.values.resize(cube.size());
    for (std::size_t alpha = 0; alpha < cube.size(); ++alpha)
        s.values[alpha] = cube[plan.relabel[alpha]];
    return s;
}

Spectrum dft(const WeightedFunction& f) { return dft(to_complex(f)); }

DenseComplexFunction idft(const Spectrum& s) {
    const double scale = 1.0 / static_cast<double>(s.group.size());
    if (s.group.is_cyclic()) {
        auto v = dft_any(s.values, -1);
        for (auto& x : v) x *= scale;
        return DenseComplexFunction(s.group, std::move(v));
    }
    const FieldPlan& plan = field_plan(s.group);
    std::vector<cdouble> cube(s.values.size());
    for (std::size_t alpha = 0; alpha < cube.size(); ++alpha)
        cube[plan.relabel[alpha]] = s.values[alpha];
    field_multidim(cube, s.group.characteristic(), s.group.extension_degree(), -1);
    for (auto& x : cube) x *= scale;
    return DenseComplexFunction(s.group, std::move(cube));
}

WeightedFunction convolve_direct(const WeightedFunction& f1, const WeightedFunction& f2) {
    if (f1.group != f2.group)
        throw std::invalid_argument("convolve: group mismatch");
    const GroupSpec& g = f1.group;
    std::vector<std::int64_t> out(g.size(), 0);
    const auto sup1 = f1.support();
    const auto sup2 = f2.support();
    for (const Elem x : sup1) {
        const std::int64_t cx = f1.counts[x];
        for (const Elem y : sup2) {
            out[g.add(x, y)] += cx * f2.counts[y];
        }
    }
    return WeightedFunction(g, std::move(out));
}

WeightedFunction convolve(const WeightedFunction& f1, const WeightedFunction& f2) {
    if (f1.group != f2.group)
        throw std::invalid_argument("convolve: group mismatch");
    const GroupSpec& g = f1.group;
    const Spectrum s1 = dft(f1);
    const Spectrum s2 = dft(f2);
    Spectrum prod;
    prod.group = g;
    prod.values.resize(s1.values.size());
    for (std::size_t i = 0; i < prod.values.size(); ++i)
        prod.values[i] = s1.values[i] * s2.values[i];
    const DenseComplexFunction back = idft(prod);
    std::vector<std::int64_t> out(g.size());
    bool clean = true;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double re = back.values[i].real();
        const double rounded = std::nearbyint(re);
        if (std::abs(re - rounded) > 1e-3 || std::abs(back.values[i].imag()) > 1e-3 ||
            rounded < 0.0) {
            clean = false;
            break;
        }
        out[i] = static_cast<std::int64_t>(rounded);
    }
    if (clean) return WeightedFunction(g, std::move(out));
    if (g.size() <= kDirectFallbackCap) return convolve_direct(f1, f2);
    throw std::runtime_error(
        "convolve: near-integer guard violated and group too large for direct fallback");
}

double norm_q(const Spectrum& s, double exponent) {
    if (exponent == std::numeric_limits<double>::infinity()) {
        double mx = 0.0;
        for (const auto& v : s.values) mx = std::max(mx, std::abs(v));
        return mx;
    }
    if (!(exponent >= 1.0))
        throw std::invalid_argument("norm_q: exponent must be >= 1 or infinity");
    double acc = 0.0;
    for (const auto& v : s.values) acc += std::pow(std::abs(v), exponent);
    acc /= static_cast<double>(s.group.size());
    return std::pow(acc, 1.0 / exponent);
}

std::vector<std::int64_t> large_spectrum(const WeightedFunction& f, double threshold) {
    if (!(threshold > 0.0))
        throw std::invalid_argument("large_spectrum: threshold must be > 0");
    const Spectrum s = dft(f);
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (std::abs(s.values[i]) > threshold) out.push_back(static_cast<std::int64_t>(i));
    }
    return out;
}

namespace {
std::string csv_of(const std::vector<cdouble>& values) {
    std::ostringstream os;
    os.precision(17);
    os << "index,re,im\n";
    for (std::size_t i = 0; i < values.size(); ++i)
        os << i << "," << values[i].real() << "," << values[i].imag() << "\n";
    return os.str();
}
}  // namespace

std::string spectrum_to_csv(const Spectrum& s) { return csv_of(s.values); }
std::string function_to_csv(const DenseComplexFunction& f) { return csv_of(f.values); }

}  // namespace forge

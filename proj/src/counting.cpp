#include "forge/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "forge/bohr.hpp"

namespace forge {

std::int64_t EquationSpec::exponent_of(int n) const {
    int acc = 0;
    for (std::size_t j = 0; j < block_sizes.size(); ++j) {
        acc += block_sizes[j];
        if (n < acc) return exponents[j];
    }
    throw std::out_of_range("EquationSpec::exponent_of");
}

void EquationSpec::validate(const GroupSpec& g) const {
    if (s < 3) throw std::invalid_argument("EquationSpec: s must be >= 3");
    if (block_sizes.empty() || block_sizes.size() != exponents.size())
        throw std::invalid_argument("EquationSpec: blocks and exponents mismatch");
    if (std::accumulate(block_sizes.begin(), block_sizes.end(), 0) != s)
        throw std::invalid_argument("EquationSpec: block sizes must sum to s");
    for (const int k : block_sizes)
        if (k < 1) throw std::invalid_argument("EquationSpec: empty block");
    for (std::size_t j = 1; j < exponents.size(); ++j)
        if (exponents[j] <= exponents[j - 1])
            throw std::invalid_argument("EquationSpec: exponents must increase strictly");
    if (exponents.front() < 1)
        throw std::invalid_argument("EquationSpec: exponents must be positive");
    if (static_cast<int>(coefficients.size()) != s)
        throw std::invalid_argument("EquationSpec: need s coefficients");
    for (const Elem c : coefficients)
        if (!g.is_unit(c))
            throw std::invalid_argument("EquationSpec: coefficients must be units");
    if (!g.check_elem(target))
        throw std::invalid_argument("EquationSpec: target out of range");
}

std::string EquationSpec::to_json() const {
    nlohmann::json j;
    j["s"] = s;
    j["k"] = block_sizes;
    j["i"] = exponents;
    j["c"] = coefficients;
    j["u"] = target;
    return j.dump();
}

EquationSpec EquationSpec::from_json(const GroupSpec& g, const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    EquationSpec eq;
    eq.s = j.at("s").get<int>();
    eq.block_sizes = j.at("k").get<std::vector<int>>();
    eq.exponents = j.at("i").get<std::vector<std::int64_t>>();
    for (const auto& c : j.at("c")) eq.coefficients.push_back(g.from_integer(c.get<std::int64_t>()));
    eq.target = g.from_integer(j.value("u", std::int64_t{0}));
    eq.validate(g);
    return eq;
}

EquationSpec EquationSpec::sum_square(const GroupSpec& g, Elem u) {
    EquationSpec eq;
    eq.s = 3;
    eq.block_sizes = {2, 1};
    eq.exponents = {1, 2};
    eq.coefficients = {g.one(), g.one(), g.neg(g.one())};
    eq.target = u;
    eq.validate(g);
    return eq;
}

WeightedFunction pushforward(const WeightedFunction& A, Elem c, std::int64_t i) {
    const GroupSpec& g = A.group;
    if (!g.is_unit(c)) throw std::domain_error("pushforward: c must be a unit");
    std::vector<std::int64_t> counts(g.size(), 0);
    for (Elem a = 0; a < g.size(); ++a) {
        if (A.counts[a] == 0) continue;
        counts[g.mul(c, g.pow(a, i))] += A.counts[a];
    }
    return WeightedFunction(g, std::move(counts));
}

namespace {

std::int64_t count_brute(const WeightedFunction& A, const EquationSpec& eq) {
    const GroupSpec& g = A.group;
    const auto members = A.support();
    // per-variable value tables c_n a^{i_j}
    std::vector<std::vector<Elem>> table(eq.s);
    for (int n = 0; n < eq.s; ++n) {
        table[n].resize(members.size());
        for (std::size_t idx = 0; idx < members.size(); ++idx) {
            table[n][idx] =
                g.mul(eq.coefficients[n], g.pow(members[idx], eq.exponent_of(n)));
        }
    }
    std::int64_t total = 0;
    // iterative odometer over members^s
    std::vector<std::size_t> pos(eq.s, 0);
    std::vector<Elem> partial(eq.s + 1, 0);
    if (members.empty()) return 0;
    int level = 0;
    while (true) {
        if (level == eq.s) {
            if (partial[eq.s] == eq.target) ++total;
            --level;
            ++pos[level];
        }
        while (pos[level] == members.size()) {
            pos[level] = 0;
            if (level == 0) return total;
            --level;
            ++pos[level];
        }
        partial[level + 1] = g.add(partial[level], table[level][pos[level]]);
        ++level;
        if (level < eq.s) pos[level] = 0;
    }
}

}  // namespace

std::int64_t count_solutions(const WeightedFunction& A, const EquationSpec& eq,
                             CountMethod method) {
    eq.validate(A.group);
    if (!A.is_indicator())
        throw std::invalid_argument("count_solutions: A must be an indicator set");
    if (method == CountMethod::BruteForce) return count_brute(A, eq);
    const GroupSpec& g = A.group;
    WeightedFunction acc = pushforward(A, eq.coefficients[0], eq.exponent_of(0));
    for (int n = 1; n < eq.s; ++n) {
        acc = convolve(acc, pushforward(A, eq.coefficients[n], eq.exponent_of(n)));
    }
    return acc.counts[eq.target];
    (void)g;
}

WeightedFunction representation_function(const std::vector<WeightedFunction>& gs) {
    if (gs.empty())
        throw std::invalid_argument("representation_function: need at least one factor");
    WeightedFunction acc = gs[0];
    for (std::size_t i = 1; i < gs.size(); ++i) acc = convolve(acc, gs[i]);
    return acc;
}

PopularCdResult popular_cd_check(const WeightedFunction& A, const WeightedFunction& B,
                                 std::int64_t t) {
    if (A.group != B.group) throw std::invalid_argument("popular_cd_check: group mismatch");
    if (!A.is_indicator() || !B.is_indicator())
        throw std::invalid_argument("popular_cd_check: indicator sets required");
    const std::int64_t na = A.mass(), nb = B.mass();
    if (na == 0 || nb == 0)
        throw std::invalid_argument("popular_cd_check: sets must be nonempty");
    if (t < 1 || t > std::min(na, nb))
        throw std::invalid_argument("popular_cd_check: t out of range");
    const WeightedFunction rep = convolve(A, B);
    std::int64_t lhs = 0;
    for (const auto v : rep.counts) lhs += std::min(t, v);
    const std::int64_t H = largest_proper_subgroup_size(A.group);
    const std::int64_t rhs =
        t * std::min(A.group.size(), na + nb - t - H);
    return {lhs, rhs, lhs >= rhs};
}

KneserResult popular_kneser_count(const std::vector<WeightedFunction>& sets, Elem x,
                                  double kappa, double M) {
    if (sets.empty()) throw std::invalid_argument("popular_kneser_count: no sets");
    const GroupSpec& g = sets[0].group;
    const int s = static_cast<int>(sets.size());
    double theta_sum = 0.0;
    for (const auto& A : sets) {
        if (A.group != g) throw std::invalid_argument("popular_kneser_count: group mismatch");
        theta_sum += static_cast<double>(A.mass()) / static_cast<double>(g.size());
    }
    const WeightedFunction rep = representation_function(sets);
    KneserResult out;
    out.count = rep.counts[x];
    out.ratio = static_cast<double>(out.count) /
                std::pow(static_cast<double>(g.size()), s - 1);
    const bool density_ok = theta_sum >= 1.0 + kappa;
    const bool subgroup_ok =
        static_cast<double>(largest_proper_subgroup_size(g)) <=
        static_cast<double>(g.size()) / M;
    out.hypotheses_ok = density_ok && subgroup_ok;
    out.positive = out.count > 0;
    return out;
}

EquationSpec ExtremalSpec::equation(Elem u) const {
    EquationSpec eq;
    eq.block_sizes = block_sizes;
    eq.exponents = exponents;
    eq.s = std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
    for (std::size_t j = 0; j < block_sizes.size(); ++j) {
        for (int n = 0; n < block_sizes[j]; ++n)
            eq.coefficients.push_back(group.from_integer(lambdas[j]));
    }
    eq.target = u;
    eq.validate(group);
    return eq;
}

WeightedFunction extremal_set(const ExtremalSpec& spec) {
    const GroupSpec& g = spec.group;
    if (!g.is_field() || g.extension_degree() != 1)
        throw std::domain_error("extremal_set: prime field required");
    const int r = static_cast<int>(spec.block_sizes.size());
    if (spec.lambdas.size() != spec.block_sizes.size() ||
        spec.exponents.size() != spec.block_sizes.size())
        throw std::invalid_argument("extremal_set: inconsistent block data");
    const std::int64_t p = g.size();
    std::vector<Elem> lam(r);
    for (int j = 0; j < r; ++j) {
        lam[j] = g.from_integer(spec.lambdas[j]);
        if (lam[j] == 0) throw std::invalid_argument("extremal_set: lambda_j must be nonzero");
    }
    std::vector<std::int64_t> counts(p, 0);
    for (Elem x = 0; x < p; ++x) {
        bool in = true;
        for (int j = 0; j < r && in; ++j) {
            const Elem rep = g.mul(lam[j], g.pow(x, spec.exponents[j]));
            // 0 < rep < p / (k_j r), strict, on exact integers
            in = rep >= 1 && rep * spec.block_sizes[j] * r < p;
        }
        counts[x] = in ? 1 : 0;
    }
    return WeightedFunction(g, std::move(counts));
}

FiberCountResult power_fiber_count(const std::vector<WeightedFunction>& X,
                                   const std::vector<std::int64_t>& exponents,
                                   const std::vector<Elem>& coefficients,
                                   int bohr_rank_d) {
    if (X.empty() || X.size() != exponents.size() || X.size() != coefficients.size())
        throw std::invalid_argument("power_fiber_count: inconsistent inputs");
    const GroupSpec& g = X[0].group;
    const int r = static_cast<int>(X.size());
    for (std::size_t j = 1; j < exponents.size(); ++j)
        if (exponents[j] <= exponents[j - 1])
            throw std::invalid_argument("power_fiber_count: exponents must increase");
    const std::int64_t ir = exponents.back();
    if (g.is_field()) {
        if (ir >= g.characteristic())
            throw std::invalid_argument("power_fiber_count: hypothesis i_r < p violated");
    } else {
        for (const auto& f : g.factorization())
            if (f.prime <= ir)
                throw std::invalid_argument(
                    "power_fiber_count: hypothesis p_j > i_r violated");
    }
    for (const auto& Xj : X) {
        if (Xj.group != g) throw std::invalid_argument("power_fiber_count: group mismatch");
        if (Xj.mass() == 0)
            throw std::invalid_argument("power_fiber_count: X_j must be nonempty");
    }

    FiberCountResult out;
    for (Elem x = 0; x < g.size(); ++x) {
        bool in = true;
        for (int j = 0; j < r && in; ++j) {
            const Elem y = g.mul(coefficients[j], g.pow(x, exponents[j]));
            in = X[j].counts[y] != 0;
        }
        if (in) ++out.count;
    }
    double main = 1.0;
    for (const auto& Xj : X) main *= static_cast<double>(Xj.support_size());
    main /= std::pow(static_cast<double>(g.size()), r - 1);
    out.main_term = main;
    out.error = std::abs(static_cast<double>(out.count) - main);

    if (g.is_field()) {
        double norms = 1.0;
        for (const auto& Xj : X) norms *= fourier_l1(Xj);
        out.certified_bound =
            static_cast<double>(ir) * std::sqrt(static_cast<double>(g.size())) * norms;
        out.certified = true;
        // 1e-9 relative slack for the floating-point norm products
        out.cert_pass = out.error <= out.certified_bound * (1.0 + 1e-9) + 1e-9;
    } else {
        double shape = 0.0;
        for (const auto& f : g.factorization()) {
            const double pm = std::pow(static_cast<double>(f.prime), f.exponent);
            shape += std::pow(std::log(pm), static_cast<double>(bohr_rank_d) * r) /
                     std::pow(static_cast<double>(f.prime), 1.0 / static_cast<double>(ir));
        }
        shape *= static_cast<double>(g.size());
        out.reference_ratio = shape > 0.0 ? out.error / shape : 0.0;
    }
    return out;
}

ObstructionReport congruence_obstruction_set(std::int64_t N, std::int64_t k, int s) {
    if (N % 3 != 0 || std::gcd<std::int64_t>(3, N / 3) != 1)
        throw std::invalid_argument(
            "congruence_obstruction_set: need 3 | N with gcd(3, N/3) = 1");
    if (k < 1 || s < 1) throw std::invalid_argument("congruence_obstruction_set: bad k or s");
    const GroupSpec g = GroupSpec::cyclic(N);
    std::vector<std::int64_t> counts(N, 0);
    for (Elem x = 0; x < N; ++x) {
        counts[x] = (mod_pow(x % 3, k, 3) == 1 % 3) ? 1 : 0;
    }
    ObstructionReport out{WeightedFunction(g, std::move(counts)), 0.0, {}, {}};
    out.density = static_cast<double>(out.set.mass()) / static_cast<double>(N);

    const WeightedFunction pf = pushforward(out.set, g.one(), k);
    std::vector<WeightedFunction> factors(s, pf);
    const WeightedFunction rep = representation_function(factors);
    out.class_max_count.assign(3, 0);
    for (Elem u = 0; u < N; ++u) {
        out.class_max_count[u % 3] = std::max(out.class_max_count[u % 3], rep.counts[u]);
    }
    for (int rho = 0; rho < 3; ++rho) {
        if (out.class_max_count[rho] == 0) out.zero_residues.push_back(rho);
    }
    return out;
}

}  // namespace forge

#pragma once

// Exact solution counting for equations
//   sum_{j<=r} sum_{n in I_j} c_n x_n^{i_j} = u,  x in A^s,
// via multiplicity-correct pushforwards and integer-guarded convolution,
// plus the popular Cauchy-Davenport / Kneser checks, power-map
// equidistribution counts, and the extremal/obstruction constructions.

#include <cstdint>
#include <string>
#include <vector>

#include "forge/group.hpp"
#include "forge/spectral.hpp"

namespace forge {

struct EquationSpec {
    int s = 3;                            // number of variables, >= 3
    std::vector<int> block_sizes;         // k_1..k_r, sum = s
    std::vector<std::int64_t> exponents;  // i_1 < ... < i_r
    std::vector<Elem> coefficients;       // c_1..c_s, units
    Elem target = 0;                      // u

    int blocks() const { return static_cast<int>(block_sizes.size()); }
    // Exponent attached to variable n (0-based).
    std::int64_t exponent_of(int n) const;
    void validate(const GroupSpec& g) const;

    std::string to_json() const;
    // Accepts integer coefficient/target values and maps them into the
    // group with from_integer.
    static EquationSpec from_json(const GroupSpec& g, const std::string& text);
    // The running example x + y = z^2 as an equation with target u.
    static EquationSpec sum_square(const GroupSpec& g, Elem u = 0);
};

// g(y) = #{ a in support(A) with multiplicity : c a^i = y }.
WeightedFunction pushforward(const WeightedFunction& A, Elem c, std::int64_t i);

enum class CountMethod { Spectral, BruteForce };

// Exact #{ x in A^s : equation holds }.
std::int64_t count_solutions(const WeightedFunction& A, const EquationSpec& eq,
                             CountMethod method = CountMethod::Spectral);

// r = g_1 * ... * g_s, exact integers.
WeightedFunction representation_function(const std::vector<WeightedFunction>& gs);

struct PopularCdResult {
    std::int64_t lhs = 0;
    std::int64_t rhs = 0;
    bool pass = false;
};
// lhs = sum_x min{t, r_{A+B}(x)}, rhs = t min{|G|, |A|+|B|-t-|H|}.
PopularCdResult popular_cd_check(const WeightedFunction& A, const WeightedFunction& B,
                                 std::int64_t t);

struct KneserResult {
    std::int64_t count = 0;
    double ratio = 0.0;          // count / |G|^{s-1}
    bool hypotheses_ok = false;  // density sum and |H| <= |G|/M both hold
    bool positive = false;
};
// Densities theta_i are measured from the sets; kappa and M configure the
// hypothesis check. Positivity is only asserted by callers when
// hypotheses_ok is true.
KneserResult popular_kneser_count(const std::vector<WeightedFunction>& sets, Elem x,
                                  double kappa, double M = 100.0);

struct ExtremalSpec {
    GroupSpec group;                      // prime field (m = 1)
    std::vector<std::int64_t> lambdas;    // nonzero scalars, one per block
    std::vector<int> block_sizes;         // k_j
    std::vector<std::int64_t> exponents;  // i_j

    EquationSpec equation(Elem u = 0) const;
};
// A = { x : canonical rep of lambda_j x^{i_j} in (0, p/(k_j r)) for all j },
// decided by exact rational comparison.
WeightedFunction extremal_set(const ExtremalSpec& spec);

struct FiberCountResult {
    std::int64_t count = 0;      // #{ x : c_j x^{i_j} in X_j for all j }
    double main_term = 0.0;      // prod |X_j| / |G|^{r-1}
    double error = 0.0;          // |count - main_term|
    double certified_bound = 0.0;  // i_r sqrt(q) prod ||1hat_{X_j}||_1 (field)
    bool certified = false;      // field case: bound applies and was checked
    bool cert_pass = false;
    double reference_ratio = 0.0;  // cyclic case: error / Prop-5.2-shape reference
};
// Field case requires i_r < p (hard inequality asserted); cyclic case
// requires every prime factor > i_r and reports the reference ratio with
// log exponent d*r, where d is the declared Bohr rank of the X_j.
FiberCountResult power_fiber_count(const std::vector<WeightedFunction>& X,
                                   const std::vector<std::int64_t>& exponents,
                                   const std::vector<Elem>& coefficients,
                                   int bohr_rank_d = 1);

struct ObstructionReport {
    WeightedFunction set;
    double density = 0.0;
    // residues mod 3 such that no u in that class has any representation
    // as a sum of s k-th powers from the set
    std::vector<int> zero_residues;
    std::vector<std::int64_t> class_max_count;  // max representation count per residue
};
ObstructionReport congruence_obstruction_set(std::int64_t N, std::int64_t k, int s);

}  // namespace forge

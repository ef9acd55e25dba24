#pragma once

// Constructive, instrumented wrapping pipeline:
//   large spectrum -> smoothing Bohr set -> convolved densities f_i ->
//   level-set wrapping -> translation search -> wrappers W_i = V_i - b_i
//   with exceptional sets Y_i,
// together with the level-set wrapping primitive. The existential steps
// of the source argument are replaced by explicit deterministic choices
// (top-|fhat| characters, uniform tau-grid arcs); the containment
// A_i \ Y_i subseteq W_i is a hard guarantee, while the smallness of
// |Y_i| and |Z_i| is measured and reported, never silently asserted.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "forge/bohr.hpp"
#include "forge/group.hpp"
#include "forge/spectral.hpp"

namespace forge {

struct WrappingParams {
    double epsilon = 0.1;       // driving parameter in (0, 1]
    double delta_floor = 0.0;   // promised lower bound on |A_i|/|G|
    int n = 0;                  // spectrum threshold parameter, default ceil(eps^-2)
    double sigma = 0.0;         // smoothing arc half-width, default eps
    double cls_q = 0.0;         // level-set parameter q > 2, default log(10/eps)
    double alpha = 0.0;         // default eps^{1/(2s)}
    int d_cap = 6;              // cap on characters per wrapper
    std::optional<double> eta_override;
    std::optional<double> tau_override;
    std::optional<int> d_override;

    // Fills the defaulted fields from epsilon and s.
    static WrappingParams defaults(double epsilon, int s, double delta_floor);
};

struct LevelSetWrap {
    WrapperSpec wrapper;           // V = union of cells
    std::vector<Elem> exceptional; // Z
    double delta = 0.0;            // 20 ||fhat||_1 tau
    double tau = 0.0;              // rationalised tau actually used
    std::int64_t wrapper_size = 0;
};

// Constructive level-set wrap: r = ceil(1/tau) uniform arcs; X = cells
// meeting the core level set Delta_f(l1+delta, l2-delta); Z = points of
// the wrapper whose f-value escapes [l1-delta, l2+delta]. The sandwich
//   Delta_f(l1+delta, l2-delta) \ Z  subseteq  V \ Z  subseteq
//   Delta_f(l1-delta, l2+delta) \ Z
// then holds by construction.
LevelSetWrap wrap_level_set(const DenseComplexFunction& f, double ell1, double ell2,
                            double tau, const std::vector<std::int64_t>& characters);

struct WrapSetReport {
    WrapperSpec wrapper;        // V_i (cells over the chosen characters)
    Elem shift = 0;             // W_i = V_i - shift, in caller coordinates
    Elem b_in_pipeline = 0;     // minimizing translation b_i in B
    std::vector<Elem> Y;        // exceptional set, caller coordinates
    std::vector<Elem> Z;        // level-set exceptional set (pipeline coords)
    double tau = 0.0;
    int d = 0;
    double eta = 0.0;
    double fhat_l1 = 0.0;
    double fhat_l1_bound = 0.0;  // |A_i|^{1/2} |B|^{-1/2}
    bool l1four_ok = false;      // fhat_l1 <= bound (+tol)
    bool magma_ok = false;       // 20 fhat_l1 tau <= eta/2 (+tol)
    // level-set data for external verification of the sandwich inclusions
    std::vector<double> f_values;  // f_i in pipeline coordinates
    double ell1 = 0.0;
    double ell2 = 0.0;
    double delta = 0.0;  // 20 ||fhat_i||_1 tau_i
    double mass_error = 0.0;     // |sum f_i - |A_i||
    std::int64_t wrapper_size = 0;
    double y_ratio = 0.0;        // |Y_i| / |G|
    double z_ratio = 0.0;        // |Z_i| / |G|
    bool containment_ok = false; // A_i \ Y_i subseteq W_i, exact
};

struct WrapResult {
    std::vector<WrapSetReport> sets;
    std::vector<std::int64_t> gamma;   // large spectrum of A_1
    std::int64_t bohr_size = 0;        // |B|
    double bohr_lower_bound = 0.0;     // sigma^{|gamma|} |G|
    bool bohr_size_ok = false;
    Elem target = 0;                   // b = -(t_1 + ... + t_s), caller coordinates
    std::int64_t truncated_count = 0;  // sum over W_i indicators at the target
    double ceiling_reference = 0.0;    // delta^{-s} eps^{1/2} |G|^{s-1}
    double y_ratio_reference = 0.0;    // eps^{1/(2s)}
    double z_ratio_reference = 0.0;    // e^{-q}
    bool all_containments_ok = false;
    std::string to_json() const;
};

// Executes the pipeline on indicator sets A_1..A_s (s >= 3) for target a.
// Throws std::invalid_argument when a parameter leaves its admissible
// range (tau_i or eta_i outside (0,1)); no silent clamping.
WrapResult wrap_sets(const std::vector<WeightedFunction>& sets,
                     const WrappingParams& params, Elem a);

struct BohrSizeCheck {
    std::int64_t bohr_size = 0;
    double lower_bound = 0.0;
    bool pass = false;
};
// |B| >= sigma^{|Gamma|} |G| for the smoothing Bohr set built from Gamma
// with arcs S_sigma of length 2 sigma centred at phase 0.
BohrSizeCheck bohr_size_bound_check(const GroupSpec& g,
                                    const std::vector<std::int64_t>& gamma,
                                    double sigma);

// The smoothing Bohr set itself (phase window [-sigma, sigma) per label).
BohrSpec smoothing_bohr_spec(const GroupSpec& g,
                             const std::vector<std::int64_t>& gamma, double sigma);

}  // namespace forge

#include "forge/wrapping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "forge/counting.hpp"

namespace forge {

namespace {

constexpr std::int64_t kTauDenominatorCap = 1 << 20;

// Top-d nontrivial labels by |spectrum|, ties broken by ascending label.
std::vector<std::int64_t> top_labels(const Spectrum& s, int d) {
    std::vector<std::int64_t> labels;
    labels.reserve(s.values.size() - 1);
    for (std::int64_t k = 1; k < static_cast<std::int64_t>(s.values.size()); ++k)
        labels.push_back(k);
    std::stable_sort(labels.begin(), labels.end(),
                     [&](std::int64_t a, std::int64_t b) {
                         const double ma = std::abs(s.values[a]);
                         const double mb = std::abs(s.values[b]);
                         if (ma != mb) return ma > mb;
                         return a < b;
                     });
    if (static_cast<int>(labels.size()) > d) labels.resize(d);
    std::sort(labels.begin(), labels.end());
    return labels;
}

}  // namespace

WrappingParams WrappingParams::defaults(double epsilon, int s, double delta_floor) {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("WrappingParams: epsilon must lie in (0,1]");
    if (s < 3) throw std::invalid_argument("WrappingParams: s must be >= 3");
    WrappingParams p;
    p.epsilon = epsilon;
    p.delta_floor = delta_floor;
    p.n = static_cast<int>(std::ceil(1.0 / (epsilon * epsilon)));
    p.sigma = epsilon;
    p.cls_q = std::log(10.0 / epsilon);
    p.alpha = std::pow(epsilon, 1.0 / (2.0 * s));
    return p;
}

LevelSetWrap wrap_level_set(const DenseComplexFunction& f, double ell1, double ell2,
                            double tau, const std::vector<std::int64_t>& characters) {
    if (characters.empty())
        throw std::invalid_argument("wrap_level_set: empty character list");
    if (!(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("wrap_level_set: tau must lie in (0,1)");
    if (!(ell1 >= 0.0 && ell1 < ell2))
        throw std::invalid_argument("wrap_level_set: need 0 <= ell1 < ell2");
    {
        std::set<std::int64_t> uniq(characters.begin(), characters.end());
        if (uniq.size() != characters.size() || uniq.count(0))
            throw std::invalid_argument(
                "wrap_level_set: characters must be distinct and nontrivial");
    }
    const GroupSpec& g = f.group;

    const Rat tau_rat = rat_from_real(tau, kTauDenominatorCap);
    LevelSetWrap out;
    out.tau = tau_rat.to_double();
    out.delta = 20.0 * norm_q(dft(f), 1.0) * out.tau;

    WrapperSpec w;
    w.group = g;
    w.characters = characters;
    w.partition = ArcPartition::uniform(tau_rat);

    // Cells of the core level set.
    std::vector<std::vector<int>> cells;
    std::vector<std::vector<int>> cell_cache(g.size());
    for (Elem x = 0; x < g.size(); ++x) {
        cell_cache[x] = cell_of(x, w);
        const double v = f.values[x].real();
        if (v >= ell1 + out.delta && v <= ell2 - out.delta)
            cells.push_back(cell_cache[x]);
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    w.cells = std::move(cells);

    // Exceptional set: wrapper points whose value escapes the widened window.
    for (Elem x = 0; x < g.size(); ++x) {
        if (!std::binary_search(w.cells.begin(), w.cells.end(), cell_cache[x])) continue;
        ++out.wrapper_size;
        const double v = f.values[x].real();
        if (v < ell1 - out.delta || v > ell2 + out.delta) out.exceptional.push_back(x);
    }
    out.wrapper = std::move(w);
    return out;
}

BohrSpec smoothing_bohr_spec(const GroupSpec& g,
                             const std::vector<std::int64_t>& gamma, double sigma) {
    if (!(sigma > 0.0 && sigma < 1.0))
        throw std::invalid_argument("smoothing_bohr_spec: sigma must lie in (0,1)");
    const Rat sig = rat_from_real(sigma, kTauDenominatorCap);
    BohrSpec b;
    b.group = g;
    for (const std::int64_t label : gamma) {
        // arc of length 2 sigma centred at phase 0: [-sigma, sigma)
        b.constraints.push_back(
            {label, Interval((Rat(1, 1) - sig).mod1(), sig + sig)});
    }
    return b;
}

BohrSizeCheck bohr_size_bound_check(const GroupSpec& g,
                                    const std::vector<std::int64_t>& gamma,
                                    double sigma) {
    BohrSizeCheck out;
    if (gamma.empty()) {
        out.bohr_size = g.size();
        out.lower_bound = static_cast<double>(g.size());
        out.pass = true;
        return out;
    }
    const BohrSpec b = smoothing_bohr_spec(g, gamma, sigma);
    out.bohr_size = bohr_members(b).mass();
    out.lower_bound = std::pow(sigma, static_cast<double>(gamma.size())) *
                      static_cast<double>(g.size());
    out.pass = static_cast<double>(out.bohr_size) >= out.lower_bound;
    return out;
}

namespace {

// |A_{i,b}| for all b at once: counts of a in A with f(a+b) below the
// threshold, computed as a correlation of indicator sets.
std::vector<std::int64_t> low_shift_counts(const WeightedFunction& A,
                                           const std::vector<char>& low) {
    const GroupSpec& g = A.group;
    std::vector<std::int64_t> refl(g.size(), 0);
    for (Elem x = 0; x < g.size(); ++x)
        if (A.counts[x] != 0) refl[g.neg(x)] = 1;
    std::vector<std::int64_t> lowc(g.size(), 0);
    for (Elem x = 0; x < g.size(); ++x) lowc[x] = low[x] ? 1 : 0;
    const WeightedFunction conv =
        convolve(WeightedFunction(g, std::move(refl)), WeightedFunction(g, std::move(lowc)));
    return conv.counts;  // entry b = #{a in A : a + b in low}
}

}  // namespace

WrapResult wrap_sets(const std::vector<WeightedFunction>& sets,
                     const WrappingParams& params_in, Elem a) {
    const int s = static_cast<int>(sets.size());
    if (s < 3) throw std::invalid_argument("wrap_sets: need s >= 3 sets");
    const GroupSpec& g = sets[0].group;
    for (const auto& A : sets) {
        if (A.group != g) throw std::invalid_argument("wrap_sets: group mismatch");
        if (!A.is_indicator()) throw std::invalid_argument("wrap_sets: indicator sets required");
        if (A.mass() == 0) throw std::invalid_argument("wrap_sets: empty A_i");
    }
    WrappingParams params = params_in;
    if (params.n == 0 || params.sigma == 0.0 || params.cls_q == 0.0 ||
        params.alpha == 0.0) {
        WrappingParams def = WrappingParams::defaults(params.epsilon, s, params.delta_floor);
        if (params.n == 0) params.n = def.n;
        if (params.sigma == 0.0) params.sigma = def.sigma;
        if (params.cls_q == 0.0) params.cls_q = def.cls_q;
        if (params.alpha == 0.0) params.alpha = def.alpha;
        params.d_cap = params_in.d_cap;
    }
    if (params.delta_floor > 0.0) {
        for (const auto& A : sets) {
            if (static_cast<double>(A.mass()) <
                params.delta_floor * static_cast<double>(g.size()))
                throw std::invalid_argument("wrap_sets: |A_i| < delta |G|");
        }
    }

    // Translate A_1 so the target becomes 0.
    std::vector<WeightedFunction> work = sets;
    if (a != 0) {
        std::vector<std::int64_t> shifted(g.size(), 0);
        for (Elem y = 0; y < g.size(); ++y) shifted[y] = sets[0].counts[g.add(y, a)];
        work[0] = WeightedFunction(g, std::move(shifted));
    }

    WrapResult res;
    res.y_ratio_reference = std::pow(params.epsilon, 1.0 / (2.0 * s));
    res.z_ratio_reference = std::exp(-params.cls_q);

    // Large spectrum of A_1 and the smoothing Bohr set.
    const double threshold =
        static_cast<double>(g.size()) / std::sqrt(static_cast<double>(params.n));
    res.gamma = large_spectrum(work[0], threshold);
    const BohrSpec bspec = smoothing_bohr_spec(g, res.gamma, params.sigma);
    const WeightedFunction B = bohr_members(bspec);
    res.bohr_size = B.mass();
    res.bohr_lower_bound = std::pow(params.sigma, static_cast<double>(res.gamma.size())) *
                           static_cast<double>(g.size());
    res.bohr_size_ok = static_cast<double>(res.bohr_size) >= res.bohr_lower_bound;
    if (res.bohr_size == 0)
        throw std::logic_error("wrap_sets: smoothing Bohr set is empty");
    const auto b_members = B.support();

    res.all_containments_ok = true;
    std::vector<Elem> shifts(s, 0);
    std::vector<WeightedFunction> wrapper_indicators;
    wrapper_indicators.reserve(s);

    for (int i = 0; i < s; ++i) {
        const WeightedFunction& A = work[i];
        const double dens = static_cast<double>(A.mass()) / static_cast<double>(g.size());
        const double eta =
            params.eta_override.value_or(params.alpha * dens / 20.0);
        const double tau = params.tau_override.value_or(
            params.alpha * std::sqrt(static_cast<double>(A.mass())) *
            std::sqrt(static_cast<double>(res.bohr_size)) /
            (800.0 * static_cast<double>(g.size())));
        if (!(tau > 0.0 && tau < 1.0))
            throw std::invalid_argument(
                "wrap_sets: tau_i = " + std::to_string(tau) +
                " outside (0,1); shrink epsilon or override");
        if (!(eta > 0.0 && eta < 1.0))
            throw std::invalid_argument(
                "wrap_sets: eta_i = " + std::to_string(eta) +
                " outside (0,1); shrink epsilon or override");

        // f_i = |B|^{-1} (1_{A_i} * 1_B)
        const WeightedFunction conv = convolve(A, B);
        DenseComplexFunction f = DenseComplexFunction::zeros(g);
        const double inv_b = 1.0 / static_cast<double>(res.bohr_size);
        for (Elem x = 0; x < g.size(); ++x)
            f.values[x] = cdouble{static_cast<double>(conv.counts[x]) * inv_b, 0.0};

        const Spectrum fs = dft(f);
        const double fhat_l1 = norm_q(fs, 1.0);
        const double l1_bound = std::sqrt(static_cast<double>(A.mass())) /
                                std::sqrt(static_cast<double>(res.bohr_size));
        double mass = 0.0;
        for (Elem x = 0; x < g.size(); ++x) mass += f.values[x].real();

        const int d = params.d_override.value_or(static_cast<int>(std::min<double>(
            params.d_cap, std::ceil(params.cls_q / (tau * tau)))));
        if (d < 1) throw std::invalid_argument("wrap_sets: d_i must be >= 1");
        const std::vector<std::int64_t> chars = top_labels(fs, d);

        const double ell1 = eta;
        const double ell2 = 1.0 + 40.0 * fhat_l1 * tau;
        LevelSetWrap lw = wrap_level_set(f, ell1, ell2, tau, chars);

        // Translation search: minimise |A_{i,b}| over b in B.
        const double low_threshold = eta + 20.0 * fhat_l1 * lw.tau;
        std::vector<char> low(g.size(), 0);
        for (Elem x = 0; x < g.size(); ++x)
            low[x] = f.values[x].real() < low_threshold ? 1 : 0;
        const auto shift_counts = low_shift_counts(A, low);
        Elem b_best = b_members.front();
        for (const Elem b : b_members) {
            if (shift_counts[b] < shift_counts[b_best]) b_best = b;
        }

        WrapSetReport rep;
        rep.tau = lw.tau;
        rep.d = static_cast<int>(chars.size());
        rep.eta = eta;
        rep.fhat_l1 = fhat_l1;
        rep.fhat_l1_bound = l1_bound;
        rep.f_values.resize(g.size());
        for (Elem x = 0; x < g.size(); ++x) rep.f_values[x] = f.values[x].real();
        rep.ell1 = ell1;
        rep.ell2 = ell2;
        rep.delta = lw.delta;
        rep.l1four_ok = fhat_l1 <= l1_bound * (1.0 + 1e-9) + 1e-9;
        rep.magma_ok = 20.0 * fhat_l1 * lw.tau <= eta / 2.0 * (1.0 + 1e-9) + 1e-12;
        rep.mass_error = std::abs(mass - static_cast<double>(A.mass()));
        rep.b_in_pipeline = b_best;
        rep.Z = lw.exceptional;
        rep.z_ratio = static_cast<double>(lw.exceptional.size()) /
                      static_cast<double>(g.size());
        rep.wrapper_size = lw.wrapper_size;

        // Y_i = A_{i,b_i} u (Z_i - b_i), then move to caller coordinates
        // (undo the A_1 translation).
        const Elem undo = (i == 0) ? a : 0;
        std::set<Elem> y_set;
        for (Elem x = 0; x < g.size(); ++x) {
            if (A.counts[x] != 0 && low[g.add(x, b_best)]) y_set.insert(g.add(x, undo));
        }
        for (const Elem z : lw.exceptional) y_set.insert(g.add(g.sub(z, b_best), undo));
        rep.Y.assign(y_set.begin(), y_set.end());
        rep.y_ratio = static_cast<double>(rep.Y.size()) / static_cast<double>(g.size());

        // Caller-coordinate shift: W_i = V_i - shift.
        shifts[i] = g.sub(b_best, undo);
        rep.shift = shifts[i];
        rep.wrapper = std::move(lw.wrapper);

        // Hard containment A_i \ Y_i subseteq W_i, in caller coordinates.
        const WeightedFunction w_members =
            wrapper_members_translated(rep.wrapper, rep.shift);
        bool ok = true;
        for (Elem x = 0; x < g.size(); ++x) {
            if (sets[i].counts[x] != 0 && !y_set.count(x) && w_members.counts[x] == 0) {
                ok = false;
                break;
            }
        }
        rep.containment_ok = ok;
        res.all_containments_ok = res.all_containments_ok && ok;

        wrapper_indicators.push_back(w_members);
        res.sets.push_back(std::move(rep));
    }

    // Truncated representation count at the target b = -(t_1 + ... + t_s).
    Elem target = 0;
    for (const Elem t : shifts) target = g.sub(target, t);
    res.target = target;
    const WeightedFunction rep_fn = representation_function(wrapper_indicators);
    res.truncated_count = rep_fn.counts[target];
    const double delta_ref = params.delta_floor > 0.0
                                 ? params.delta_floor
                                 : [&] {
                                       double d = 1.0;
                                       for (const auto& A : sets)
                                           d = std::min(d, static_cast<double>(A.mass()) /
                                                               static_cast<double>(g.size()));
                                       return d;
                                   }();
    res.ceiling_reference = std::pow(delta_ref, -static_cast<double>(s)) *
                            std::sqrt(params.epsilon) *
                            std::pow(static_cast<double>(g.size()), s - 1);
    return res;
}

std::string WrapResult::to_json() const {
    nlohmann::json j;
    j["gamma"] = gamma;
    j["bohr_size"] = bohr_size;
    j["bohr_lower_bound"] = bohr_lower_bound;
    j["bohr_size_ok"] = bohr_size_ok;
    j["target"] = target;
    j["truncated_count"] = truncated_count;
    j["ceiling_reference"] = ceiling_reference;
    j["y_ratio_reference"] = y_ratio_reference;
    j["z_ratio_reference"] = z_ratio_reference;
    j["all_containments_ok"] = all_containments_ok;
    auto arr = nlohmann::json::array();
    for (const auto& r : sets) {
        nlohmann::json e;
        e["shift"] = r.shift;
        e["b_in_pipeline"] = r.b_in_pipeline;
        e["tau"] = r.tau;
        e["d"] = r.d;
        e["eta"] = r.eta;
        e["fhat_l1"] = r.fhat_l1;
        e["fhat_l1_bound"] = r.fhat_l1_bound;
        e["l1four_ok"] = r.l1four_ok;
        e["magma_ok"] = r.magma_ok;
        e["mass_error"] = r.mass_error;
        e["wrapper_size"] = r.wrapper_size;
        e["y_size"] = r.Y.size();
        e["z_size"] = r.Z.size();
        e["y_ratio"] = r.y_ratio;
        e["z_ratio"] = r.z_ratio;
        e["containment_ok"] = r.containment_ok;
        e["cells"] = r.wrapper.cells.size();
        e["wrapper_spec"] = nlohmann::json::parse(r.wrapper.to_json());
        arr.push_back(std::move(e));
    }
    j["sets"] = arr;
    return j.dump(2);
}

}  // namespace forge

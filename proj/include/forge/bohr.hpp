#pragma once

// Inhomogeneous Bohr sets, arc partitions, cells and wrappers in both
// group families. Character phases are exact rationals:
//   cyclic: (xi x mod N) / N,   field: Tr(alpha x) / p,
// and every arc/interval membership is decided on those rationals with
// the half-open convention [a, b), so arc partitions tile exactly.

#include <cstdint>
#include <string>
#include <vector>

#include "forge/group.hpp"
#include "forge/rational.hpp"
#include "forge/spectral.hpp"

namespace forge {

// Half-open arc on R/Z: { t : (t - lo) mod 1 in [0, len) }.
// len = 1 is the full circle, len = 0 the empty arc.
struct Interval {
    Rat lo{0, 1};
    Rat len{1, 1};

    Interval() = default;
    Interval(Rat lo_, Rat len_);
    bool contains(const Rat& t) const;
    Interval shifted(const Rat& delta) const;  // I + delta
    bool operator==(const Interval&) const = default;
};

struct BohrConstraint {
    std::int64_t label = 0;  // dual label: frequency xi (cyclic) or alpha (field)
    Interval window;
};

struct BohrSpec {
    GroupSpec group;
    std::vector<BohrConstraint> constraints;

    int rank() const { return static_cast<int>(constraints.size()); }
    std::string to_json() const;
    static BohrSpec from_json(const std::string& text);
};

// Partition of R/Z into r arcs: [j tau, (j+1) tau) for j < r-1 and
// [(r-1) tau, 1); requires r = ceil(1/tau) so the last arc has measure
// in (0, tau].
struct ArcPartition {
    Rat tau{1, 1};
    int arc_count = 1;

    static ArcPartition uniform(const Rat& tau);
    Interval arc(int j) const;          // 1-based cells use arc(v-1)
    int index_of(const Rat& phase) const;  // 0-based arc index, exact
};

struct WrapperSpec {
    GroupSpec group;
    std::vector<std::int64_t> characters;   // d pairwise distinct dual labels
    ArcPartition partition;
    std::vector<std::vector<int>> cells;    // sorted, distinct, entries 0-based

    int rank() const { return static_cast<int>(characters.size()); }
    std::string to_json() const;
    static WrapperSpec from_json(const std::string& text);
};

// Exact phase of x under the dual label.
Rat character_phase(const GroupSpec& g, std::int64_t label, Elem x);

WeightedFunction bohr_members(const BohrSpec& b);

// The unique cell v with gamma_i(x) in S_{v_i}; entries 0-based.
std::vector<int> cell_of(Elem x, const WrapperSpec& w);

WeightedFunction wrapper_members(const WrapperSpec& w);
// Members of the translate V - shift = { x : x + shift in V }.
WeightedFunction wrapper_members_translated(const WrapperSpec& w, Elem shift);

// || dft(1_set) ||_1 with the |G|^{-1} normalisation.
double fourier_l1(const WeightedFunction& set);

// Slice of a Bohr set over Z/N at the CRT coordinate v mod N' where
// N' = N / p1_power: a Bohr set of the same rank over Z/p1_power.
BohrSpec slice_bohr(const BohrSpec& b, std::int64_t p1_power, Elem v);

// Indicator/counts of { c x : x in set }; c must be a unit.
WeightedFunction dilate(const WeightedFunction& set, Elem c);

}  // namespace forge

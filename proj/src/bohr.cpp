#include "forge/bohr.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace forge {

Interval::Interval(Rat lo_, Rat len_) : lo(lo_.mod1()), len(len_) {
    if (len < Rat(0, 1) || len > Rat(1, 1))
        throw std::invalid_argument("Interval: length must lie in [0, 1]");
}

bool Interval::contains(const Rat& t) const {
    const Rat d = (t - lo).mod1();
    return d < len;
}

Interval Interval::shifted(const Rat& delta) const {
    return Interval((lo + delta).mod1(), len);
}

std::string BohrSpec::to_json() const {
    nlohmann::json j;
    j["group"] = nlohmann::json::parse(group.to_json());
    auto chars = nlohmann::json::array();
    auto intervals = nlohmann::json::array();
    for (const auto& c : constraints) {
        chars.push_back(c.label);
        intervals.push_back({c.window.lo.num, c.window.lo.den,
                             c.window.len.num, c.window.len.den});
    }
    j["chars"] = chars;
    j["intervals"] = intervals;
    return j.dump();
}

BohrSpec BohrSpec::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    BohrSpec b;
    b.group = GroupSpec::from_json(j.at("group").dump());
    const auto& chars = j.at("chars");
    const auto& intervals = j.at("intervals");
    if (chars.size() != intervals.size())
        throw std::invalid_argument("BohrSpec: chars/intervals size mismatch");
    for (std::size_t i = 0; i < chars.size(); ++i) {
        const auto& iv = intervals[i];
        b.constraints.push_back(
            {chars[i].get<std::int64_t>(),
             Interval(Rat(iv[0].get<std::int64_t>(), iv[1].get<std::int64_t>()),
                      Rat(iv[2].get<std::int64_t>(), iv[3].get<std::int64_t>()))});
    }
    return b;
}

ArcPartition ArcPartition::uniform(const Rat& tau) {
    if (!(Rat(0, 1) < tau) || !(tau < Rat(1, 1)))
        throw std::invalid_argument("ArcPartition: tau must lie in (0,1)");
    ArcPartition p;
    p.tau = tau;
    // r = ceil(1/tau)
    p.arc_count = static_cast<int>((tau.den + tau.num - 1) / tau.num);
    return p;
}

Interval ArcPartition::arc(int j) const {
    if (j < 0 || j >= arc_count) throw std::out_of_range("ArcPartition::arc");
    const Rat start = (tau * Rat(j, 1)).mod1();
    if (j + 1 < arc_count) return Interval(start, tau);
    const Rat len = Rat(1, 1) - tau * Rat(arc_count - 1, 1);
    return Interval(start, len);
}

int ArcPartition::index_of(const Rat& phase) const {
    const Rat t = phase.mod1();
    const std::int64_t idx = floor_div(t, tau);
    return static_cast<int>(std::min<std::int64_t>(idx, arc_count - 1));
}

std::string WrapperSpec::to_json() const {
    nlohmann::json j;
    j["group"] = nlohmann::json::parse(group.to_json());
    j["chars"] = characters;
    auto arcs = nlohmann::json::array();
    for (int a = 0; a < partition.arc_count; ++a) {
        const Interval iv = partition.arc(a);
        arcs.push_back({iv.lo.num, iv.lo.den});
    }
    j["arcs"] = arcs;
    j["cells"] = cells;
    return j.dump();
}

WrapperSpec WrapperSpec::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    WrapperSpec w;
    w.group = GroupSpec::from_json(j.at("group").dump());
    w.characters = j.at("chars").get<std::vector<std::int64_t>>();
    const auto& arcs = j.at("arcs");
    if (arcs.size() < 2) {
        w.partition = ArcPartition{};  // single full-circle arc
        w.partition.arc_count = 1;
        w.partition.tau = Rat(1, 1);
    } else {
        // arc starts are 0, tau, 2tau, ...: recover tau from the second start
        w.partition = ArcPartition::uniform(
            Rat(arcs[1][0].get<std::int64_t>(), arcs[1][1].get<std::int64_t>()));
        if (w.partition.arc_count != static_cast<int>(arcs.size()))
            throw std::invalid_argument("WrapperSpec: arc list is not a uniform grid");
    }
    w.cells = j.at("cells").get<std::vector<std::vector<int>>>();
    std::sort(w.cells.begin(), w.cells.end());
    w.cells.erase(std::unique(w.cells.begin(), w.cells.end()), w.cells.end());
    return w;
}

Rat character_phase(const GroupSpec& g, std::int64_t label, Elem x) {
    if (g.is_cyclic()) {
        const std::int64_t N = g.modulus();
        const std::int64_t t = static_cast<std::int64_t>(
            static_cast<__int128>(label) * x % N);
        return Rat(t, N);
    }
    return Rat(g.trace(g.mul(label, x)), g.characteristic());
}

WeightedFunction bohr_members(const BohrSpec& b) {
    const GroupSpec& g = b.group;
    std::vector<std::int64_t> counts(g.size(), 0);
    for (Elem x = 0; x < g.size(); ++x) {
        bool in = true;
        for (const auto& c : b.constraints) {
            if (!c.window.contains(character_phase(g, c.label, x))) {
                in = false;
                break;
            }
        }
        counts[x] = in ? 1 : 0;
    }
    return WeightedFunction(g, std::move(counts));
}

std::vector<int> cell_of(Elem x, const WrapperSpec& w) {
    std::vector<int> v(w.characters.size());
    for (std::size_t i = 0; i < w.characters.size(); ++i) {
        v[i] = w.partition.index_of(character_phase(w.group, w.characters[i], x));
    }
    return v;
}

WeightedFunction wrapper_members(const WrapperSpec& w) {
    return wrapper_members_translated(w, 0);
}

WeightedFunction wrapper_members_translated(const WrapperSpec& w, Elem shift) {
    const GroupSpec& g = w.group;
    std::vector<std::int64_t> counts(g.size(), 0);
    for (Elem x = 0; x < g.size(); ++x) {
        const auto v = cell_of(g.add(x, shift), w);
        counts[x] = std::binary_search(w.cells.begin(), w.cells.end(), v) ? 1 : 0;
    }
    return WeightedFunction(g, std::move(counts));
}

double fourier_l1(const WeightedFunction& set) { return norm_q(dft(set), 1.0); }

BohrSpec slice_bohr(const BohrSpec& b, std::int64_t p1_power, Elem v) {
    const GroupSpec& g = b.group;
    const std::int64_t N = g.modulus();
    if (p1_power < 2 || N % p1_power != 0 ||
        std::gcd(p1_power, N / p1_power) != 1 || factorize(p1_power).size() != 1)
        throw std::invalid_argument(
            "slice_bohr: p1_power must be an exact prime-power divisor of N");
    const std::int64_t Nrest = N / p1_power;
    const std::int64_t Gamma = mod_inverse(Nrest % p1_power, p1_power);
    const std::int64_t gamma = mod_inverse(p1_power % Nrest, Nrest);

    BohrSpec out;
    out.group = GroupSpec::cyclic(p1_power);
    for (const auto& c : b.constraints) {
        const std::int64_t beta_new = static_cast<std::int64_t>(
            static_cast<__int128>(c.label % p1_power) * Gamma % p1_power);
        // shift = beta v gamma / N' mod 1
        std::int64_t t = static_cast<std::int64_t>(
            static_cast<__int128>(c.label % Nrest) * (v % Nrest) % Nrest);
        t = static_cast<std::int64_t>(static_cast<__int128>(t) * gamma % Nrest);
        const Rat shift(t, Nrest);
        out.constraints.push_back({beta_new, c.window.shifted(Rat(0, 1) - shift)});
    }
    return out;
}

WeightedFunction dilate(const WeightedFunction& set, Elem c) {
    const GroupSpec& g = set.group;
    if (!g.is_unit(c)) throw std::domain_error("dilate: c must be a unit");
    std::vector<std::int64_t> counts(g.size(), 0);
    for (Elem x = 0; x < g.size(); ++x) {
        if (set.counts[x] != 0) counts[g.mul(c, x)] += set.counts[x];
    }
    return WeightedFunction(g, std::move(counts));
}

}  // namespace forge

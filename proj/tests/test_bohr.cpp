#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "forge/bohr.hpp"

using namespace forge;

namespace {

BohrSpec make_rank1(const GroupSpec& g, std::int64_t label, Rat lo, Rat len) {
    BohrSpec b;
    b.group = g;
    b.constraints.push_back({label, Interval(lo, len)});
    return b;
}

}  // namespace

TEST_CASE("rational arithmetic") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(-1, 3).mod1() == Rat(2, 3));
    CHECK(Rat(7, 3).mod1() == Rat(1, 3));
    CHECK((Rat(1, 2) + Rat(1, 3)) == Rat(5, 6));
    CHECK((Rat(1, 2) * Rat(2, 5)) == Rat(1, 5));
    CHECK(Rat(1, 3) < Rat(2, 5));
    CHECK(floor_div(Rat(7, 10), Rat(1, 5)) == 3);
    CHECK(rat_from_real(0.5) == Rat(1, 2));
    CHECK(rat_from_real(1.0 / 2000.0) == Rat(1, 2000));
}

TEST_CASE("interval membership is half-open and wraps") {
    Interval full(Rat(0, 1), Rat(1, 1));
    CHECK(full.contains(Rat(0, 1)));
    CHECK(full.contains(Rat(9, 10)));
    Interval empty(Rat(1, 4), Rat(0, 1));
    CHECK_FALSE(empty.contains(Rat(1, 4)));
    Interval arc(Rat(3, 4), Rat(1, 2));  // [3/4, 1) u [0, 1/4)
    CHECK(arc.contains(Rat(3, 4)));
    CHECK(arc.contains(Rat(0, 1)));
    CHECK(arc.contains(Rat(99, 100)));
    CHECK_FALSE(arc.contains(Rat(1, 4)));  // half-open at the top
    CHECK_FALSE(arc.contains(Rat(1, 2)));
}

TEST_CASE("bohr membership examples") {
    auto g = GroupSpec::cyclic(17);
    // beta = 1, I = [0, 1/4): {0,1,2,3,4}
    auto b = make_rank1(g, 1, Rat(0, 1), Rat(1, 4));
    auto members = bohr_members(b);
    CHECK(members.support() == std::vector<Elem>{0, 1, 2, 3, 4});

    // full-circle constraints keep everything
    BohrSpec all;
    all.group = g;
    all.constraints.push_back({3, Interval(Rat(0, 1), Rat(1, 1))});
    all.constraints.push_back({5, Interval(Rat(1, 3), Rat(1, 1))});
    CHECK(bohr_members(all).mass() == 17);

    // beta = 0 with a window missing phase 0 is empty
    auto degenerate = make_rank1(g, 0, Rat(1, 3), Rat(1, 4));
    CHECK(bohr_members(degenerate).mass() == 0);
}

TEST_CASE("membership is decided on exact rationals at the boundary") {
    auto g = GroupSpec::cyclic(8);
    // I = [0, 1/2): phase of x=4 under label 1 is exactly 1/2, excluded
    auto b = make_rank1(g, 1, Rat(0, 1), Rat(1, 2));
    auto members = bohr_members(b);
    CHECK(members.counts[4] == 0);
    CHECK(members.counts[0] == 1);
    CHECK(members.counts[3] == 1);
    CHECK(members.mass() == 4);  // {0,1,2,3}
}

TEST_CASE("arc partition tiles exactly") {
    auto part = ArcPartition::uniform(Rat(1, 3));
    CHECK(part.arc_count == 3);
    CHECK(part.arc(2).len == Rat(1, 3));
    auto part2 = ArcPartition::uniform(Rat(2, 5));
    CHECK(part2.arc_count == 3);
    CHECK(part2.arc(2).len == Rat(1, 5));  // last arc shorter
    CHECK(part2.index_of(Rat(0, 1)) == 0);
    CHECK(part2.index_of(Rat(2, 5)) == 1);
    CHECK(part2.index_of(Rat(4, 5)) == 2);
    CHECK(part2.index_of(Rat(99, 100)) == 2);
}

TEST_CASE("cell_of examples") {
    auto g = GroupSpec::cyclic(17);
    WrapperSpec w;
    w.group = g;
    w.characters = {1};
    w.partition = ArcPartition::uniform(Rat(1, 2));
    w.cells = {{0}};
    CHECK(cell_of(0, w) == std::vector<int>{0});

    WrapperSpec w3;
    w3.group = g;
    w3.characters = {1};
    w3.partition = ArcPartition::uniform(Rat(1, 3));
    // x = 6: phase 6/17 in [1/3, 2/3) -> arc index 1 (second arc)
    CHECK(cell_of(6, w3) == std::vector<int>{1});
}

TEST_CASE("cells partition the group") {
    for (const GroupSpec& g : {GroupSpec::cyclic(101), GroupSpec::cyclic(360),
                               GroupSpec::field(3, 4)}) {
        WrapperSpec w;
        w.group = g;
        w.characters = {1, 2};
        w.partition = ArcPartition::uniform(Rat(2, 7));
        const int r = w.partition.arc_count;
        // every x lands in exactly one cell: check via direct interval scan
        for (Elem x = 0; x < g.size(); ++x) {
            const auto v = cell_of(x, w);
            int hits = 0;
            for (std::size_t i = 0; i < w.characters.size(); ++i) {
                const Rat phase = character_phase(g, w.characters[i], x);
                for (int j = 0; j < r; ++j) {
                    if (w.partition.arc(j).contains(phase)) {
                        ++hits;
                        CHECK(v[i] == j);
                    }
                }
            }
            CHECK(hits == static_cast<int>(w.characters.size()));
        }
    }
}

TEST_CASE("wrapper membership examples") {
    auto g = GroupSpec::cyclic(17);
    WrapperSpec w;
    w.group = g;
    w.characters = {1};
    w.partition = ArcPartition::uniform(Rat(1, 3));
    // X = all cells -> G
    w.cells = {{0}, {1}, {2}};
    CHECK(wrapper_members(w).mass() == 17);
    // X = empty -> empty
    w.cells = {};
    CHECK(wrapper_members(w).mass() == 0);
    // X = {first, third}: phases in [0,1/3) u [2/3,1); 17 - 6 = 11 elements
    w.cells = {{0}, {2}};
    auto members = wrapper_members(w);
    CHECK(members.mass() == 11);
    // oracle: exhaustive phase check
    for (Elem x = 0; x < 17; ++x) {
        const Rat ph = character_phase(g, 1, x);
        const bool expect = ph < Rat(1, 3) || ph >= Rat(2, 3);
        CHECK(members.counts[x] == (expect ? 1 : 0));
    }
    // |W| = sum of cell sizes (cells are disjoint)
    std::int64_t total = 0;
    for (const auto& cell : std::vector<std::vector<int>>{{0}, {2}}) {
        WrapperSpec one = w;
        one.cells = {cell};
        total += wrapper_members(one).mass();
    }
    CHECK(total == members.mass());
}

TEST_CASE("fourier_l1 endpoints") {
    auto g = GroupSpec::cyclic(31);
    CHECK(fourier_l1(WeightedFunction::full(g)) == doctest::Approx(1.0));
    CHECK(fourier_l1(WeightedFunction::zeros(g)) == doctest::Approx(0.0));
}

TEST_CASE("slice of a Bohr set mod 15") {
    auto g = GroupSpec::cyclic(15);
    auto b = make_rank1(g, 1, Rat(0, 1), Rat(1, 3));
    // slice at p1^m1 = 3, v = 0
    auto sl = slice_bohr(b, 3, 0);
    CHECK(sl.group.modulus() == 3);
    CHECK(sl.rank() == 1);
    auto members = bohr_members(sl);
    // oracle: u in slice iff crt_join(u, 0) in B
    auto amb = bohr_members(b);
    for (Elem u = 0; u < 3; ++u) {
        CHECK(members.counts[u] == amb.counts[crt_join({u, 0}, g, 3)]);
    }
    CHECK(members.support() == std::vector<Elem>{0});

    // full-circle interval slices to the full group for every v
    auto full = make_rank1(g, 7, Rat(0, 1), Rat(1, 1));
    for (Elem v = 0; v < 5; ++v) {
        CHECK(bohr_members(slice_bohr(full, 3, v)).mass() == 3);
    }

    // a narrower window leaves some v with an empty slice: B = {0,1,2}
    // meets only the residues 0,1,2 mod 5
    auto narrow = make_rank1(g, 1, Rat(0, 1), Rat(1, 5));
    CHECK(bohr_members(narrow).support() == std::vector<Elem>{0, 1, 2});
    bool found_empty = false;
    for (Elem v = 0; v < 5; ++v) {
        const auto sl = bohr_members(slice_bohr(narrow, 3, v));
        const auto amb = bohr_members(narrow);
        for (Elem u = 0; u < 3; ++u)
            CHECK(sl.counts[u] == amb.counts[crt_join({u, v}, g, 3)]);
        if (sl.mass() == 0) found_empty = true;
    }
    CHECK(found_empty);

    CHECK_THROWS(slice_bohr(b, 5 * 3, 0));
    CHECK_THROWS(slice_bohr(b, 2, 0));
}

TEST_CASE("slice equality, random specs over composite moduli") {
    std::mt19937_64 rng(23);
    for (std::int64_t N : {15, 77, 99, 101 * 7, 9996}) {
        auto g = GroupSpec::cyclic(N);
        std::uniform_int_distribution<std::int64_t> label(0, N - 1);
        std::uniform_int_distribution<std::int64_t> num(0, N - 1);
        for (int rank = 1; rank <= 3; ++rank) {
            BohrSpec b;
            b.group = g;
            for (int j = 0; j < rank; ++j) {
                const std::int64_t len = 1 + num(rng) % (N / 2);
                b.constraints.push_back(
                    {label(rng), Interval(Rat(num(rng), N), Rat(len, N))});
            }
            const auto amb = bohr_members(b);
            for (const auto& f : g.factorization()) {
                std::int64_t pe = 1;
                for (int i = 0; i < f.exponent; ++i) pe *= f.prime;
                if (pe == N) continue;
                const std::int64_t rest = N / pe;
                for (Elem v = 0; v < rest; ++v) {
                    const auto sl = bohr_members(slice_bohr(b, pe, v));
                    for (Elem u = 0; u < pe; ++u) {
                        REQUIRE(sl.counts[u] == amb.counts[crt_join({u, v}, g, pe)]);
                    }
                }
            }
        }
    }
}

TEST_CASE("dilate") {
    auto g = GroupSpec::cyclic(7);
    auto set = WeightedFunction::indicator(g, {1, 2});
    CHECK(dilate(set, 1).counts == set.counts);
    CHECK(dilate(set, 3).support() == std::vector<Elem>{3, 6});
    CHECK(dilate(set, 3).mass() == set.mass());
    CHECK_THROWS(dilate(WeightedFunction::indicator(GroupSpec::cyclic(6), {1}), 2));
}

TEST_CASE("dilation invariance of the Fourier L1 norm") {
    std::mt19937_64 rng(31);
    for (const GroupSpec& g : {GroupSpec::cyclic(101), GroupSpec::cyclic(60),
                               GroupSpec::field(7, 2)}) {
        std::uniform_int_distribution<int> coin(0, 3);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<std::int64_t> counts(g.size());
            for (auto& c : counts) c = coin(rng) == 0 ? 1 : 0;
            WeightedFunction W(g, counts);
            Elem c;
            do {
                c = static_cast<Elem>(rng() % g.size());
            } while (!g.is_unit(c));
            CHECK(std::abs(fourier_l1(dilate(W, c)) - fourier_l1(W)) < 1e-8);
        }
    }
}

TEST_CASE("rank-1 prime L1 decay stays within the certification cap") {
    std::mt19937_64 rng(37);
    double max_ratio = 0.0;
    for (std::int64_t p : {101, 211, 409, 601, 809, 1009}) {
        auto g = GroupSpec::cyclic(p);
        std::uniform_int_distribution<std::int64_t> num(0, p - 1);
        for (int trial = 0; trial < 5; ++trial) {
            const std::int64_t len = 1 + num(rng) % (p / 2);
            auto b = make_rank1(g, 1 + num(rng) % (p - 1), Rat(num(rng), p), Rat(len, p));
            const double ratio =
                fourier_l1(bohr_members(b)) / std::log(static_cast<double>(p));
            max_ratio = std::max(max_ratio, ratio);
            CHECK(ratio <= 8.0);
        }
    }
    CHECK(max_ratio > 0.0);
}

TEST_CASE("rank-1 Bohr set in Z/p^m decomposes as Q + H") {
    // B(p^l beta; I) with p coprime to beta: membership depends only on
    // x mod p^{m-l}, and the residues form an AP with difference
    // beta^{-1} mod p^{m-l}.
    std::mt19937_64 rng(41);
    for (auto [p, m] : std::vector<std::pair<std::int64_t, int>>{{7, 3}, {3, 5}, {5, 3}}) {
        std::int64_t pm = 1;
        for (int i = 0; i < m; ++i) pm *= p;
        REQUIRE(pm <= 343);
        auto g = GroupSpec::cyclic(pm);
        for (int l = 0; l < m; ++l) {
            std::int64_t pl = 1;
            for (int i = 0; i < l; ++i) pl *= p;
            const std::int64_t pml = pm / pl;  // p^{m-l}
            std::int64_t beta = 1 + static_cast<std::int64_t>(rng() % (pm - 1));
            while (beta % p == 0) beta = 1 + static_cast<std::int64_t>(rng() % (pm - 1));
            const std::int64_t label = (pl * beta) % pm;
            const std::int64_t lo = static_cast<std::int64_t>(rng() % pml);
            const std::int64_t len = 1 + static_cast<std::int64_t>(rng() % (pml / 2 + 1));
            auto b = make_rank1(g, label, Rat(lo, pml), Rat(len, pml));
            auto members = bohr_members(b);

            // H-invariance: membership depends only on x mod p^{m-l}
            for (Elem x = 0; x < pm; ++x) {
                CHECK(members.counts[x] == members.counts[(x + pml) % pm]);
            }
            // Q is an AP with difference z = beta^{-1} mod p^{m-l}
            std::set<Elem> q_set;
            for (Elem x = 0; x < pml; ++x)
                if (members.counts[x] != 0) q_set.insert(x);
            if (!q_set.empty()) {
                const std::int64_t z = mod_inverse(beta % pml, pml);
                // reconstruct: members of Q are beta^{-1} * (interval values)
                std::set<Elem> expect;
                for (std::int64_t step = 0; step < static_cast<std::int64_t>(q_set.size());
                     ++step) {
                    const std::int64_t interval_val = (lo + step) % pml;
                    expect.insert(static_cast<Elem>(
                        static_cast<__int128>(interval_val) * z % pml));
                }
                CHECK(expect == q_set);
            }
        }
    }
}

TEST_CASE("norm_1 submultiplicativity under intersection (Young)") {
    std::mt19937_64 rng(43);
    for (std::int64_t p : {101, 211}) {
        auto g = GroupSpec::cyclic(p);
        std::uniform_int_distribution<std::int64_t> num(0, p - 1);
        for (int trial = 0; trial < 5; ++trial) {
            const std::int64_t l1 = 1 + num(rng) % (p / 2);
            const std::int64_t l2 = 1 + num(rng) % (p / 2);
            auto b1 = make_rank1(g, 1 + num(rng) % (p - 1), Rat(num(rng), p), Rat(l1, p));
            auto b2 = make_rank1(g, 1 + num(rng) % (p - 1), Rat(num(rng), p), Rat(l2, p));
            auto m1 = bohr_members(b1);
            auto m2 = bohr_members(b2);
            std::vector<std::int64_t> inter(p, 0);
            for (Elem x = 0; x < p; ++x) inter[x] = m1.counts[x] * m2.counts[x];
            const double lhs = fourier_l1(WeightedFunction(g, inter));
            const double rhs = fourier_l1(m1) * fourier_l1(m2);
            CHECK(lhs <= rhs + 1e-9);
        }
    }
}

TEST_CASE("bohr and wrapper specs serialize to json and back") {
    auto g = GroupSpec::cyclic(17);
    auto b = make_rank1(g, 3, Rat(1, 5), Rat(2, 5));
    auto b2 = BohrSpec::from_json(b.to_json());
    CHECK(b2.constraints.size() == 1);
    CHECK(b2.constraints[0].label == 3);
    CHECK(b2.constraints[0].window == b.constraints[0].window);
    CHECK(bohr_members(b2).counts == bohr_members(b).counts);

    WrapperSpec w;
    w.group = g;
    w.characters = {1, 5};
    w.partition = ArcPartition::uniform(Rat(1, 4));
    w.cells = {{0, 1}, {3, 2}};
    auto w2 = WrapperSpec::from_json(w.to_json());
    CHECK(w2.characters == w.characters);
    CHECK(w2.partition.arc_count == w.partition.arc_count);
    CHECK(w2.cells == w.cells);
    CHECK(wrapper_members(w2).counts == wrapper_members(w).counts);
}

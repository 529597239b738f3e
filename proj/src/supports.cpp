#include "shapql/supports.hpp"

#include <algorithm>
#include <bit>
#include <functional>

#include "shapql/errors.hpp"

namespace shapql {

std::vector<std::vector<int>> SupportSet::supports() const {
    std::vector<std::vector<int>> out;
    if (exo_satisfied) {
        out.emplace_back();
        return out;
    }
    for (auto m : masks) {
        std::vector<int> s;
        for (int i = 0; i < player_count; ++i)
            if (m >> i & 1) s.push_back(i);
        out.push_back(std::move(s));
    }
    return out;
}

bool SupportSet::mask_covers(std::uint64_t coalition) const {
    if (exo_satisfied) return true;
    for (auto m : masks)
        if ((coalition & m) == m) return true;
    return false;
}

namespace {

// Lexicographically ordered k-combinations of [0, n) as bitmasks.
void for_each_combination(int n, int k, const std::function<void(std::uint64_t)>& fn) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        std::uint64_t mask = 0;
        for (int i : idx) mask |= std::uint64_t{1} << i;
        fn(mask);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

SupportSet minimal_supports(const CooperativeGame& g, std::optional<int> cap) {
    SupportSet ss;
    ss.player_count = g.n;
    ss.player_labels = g.player_labels;
    if (g.exo_satisfied) {
        ss.exo_satisfied = true;
        return ss;
    }
    // score(empty) = 0 holds by the wealth definition; an empty support here
    // would mean a broken oracle.
    if (g.raw_score(0)) throw Error("score oracle accepts the empty coalition but v_x = 0");

    int bound = std::min(cap.value_or(g.n), g.n);
    bool all_covered = false;
    for (int k = 1; k <= bound && !all_covered; ++k) {
        // Sets containing an already-found support are pruned; a positive
        // uncovered set is minimal because all its proper subsets were seen
        // at earlier layers and scored 0.
        bool any_uncovered = false;
        for_each_combination(g.n, k, [&](std::uint64_t mask) {
            if (ss.mask_covers(mask)) return;
            any_uncovered = true;
            if (g.raw_score(mask)) ss.masks.push_back(mask);
        });
        all_covered = !any_uncovered;
    }
    if (!all_covered && bound < g.n) {
        // Uncovered sets are downward-closed, so an uncovered (bound+1)-set
        // exists iff some set beyond the cap could still be a new minimal
        // support. Only in that case is the enumeration incomplete.
        bool open_frontier = false;
        for_each_combination(g.n, bound + 1, [&](std::uint64_t mask) {
            if (!ss.mask_covers(mask)) open_frontier = true;
        });
        if (open_frontier)
            throw SupportsIncompleteError("support enumeration cap " + std::to_string(bound) +
                                          " exceeded with an open frontier");
    }
    std::sort(ss.masks.begin(), ss.masks.end(), [](std::uint64_t a, std::uint64_t b) {
        int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    return ss;
}

SupportSet minimal_supports(const PartitionedKB& pk, const BooleanQuery& q, std::optional<int> cap,
                            int depth_limit) {
    return minimal_supports(make_entailment_game(pk, q, depth_limit), cap);
}

bool is_relevant(const SupportSet& ss, int player) {
    if (ss.exo_satisfied) return false;
    for (auto m : ss.masks)
        if (m >> player & 1) return true;
    return false;
}

namespace {

int player_index(const PartitionedKB& pk, const Assertion& a) {
    PlayerList pl = players_of(pk);
    auto it = std::find(pl.assertions.begin(), pl.assertions.end(), a.normalized());
    if (it == pl.assertions.end())
        throw Error("not an endogenous assertion: " + to_string(a));
    return static_cast<int>(it - pl.assertions.begin());
}

int player_index(const PartitionedKB& pk, const Axiom& t) {
    PlayerList pl = players_of(pk);
    auto it = std::find(pl.axioms.begin(), pl.axioms.end(), t);
    if (it == pl.axioms.end()) throw Error("not an endogenous axiom: " + to_string(t));
    return static_cast<int>(pl.assertions.size() + (it - pl.axioms.begin()));
}

}  // namespace

bool is_relevant(const PartitionedKB& pk, const BooleanQuery& q, const Assertion& player,
                 int depth_limit) {
    return is_relevant(minimal_supports(pk, q, std::nullopt, depth_limit), player_index(pk, player));
}

bool is_relevant(const PartitionedKB& pk, const BooleanQuery& q, const Axiom& player,
                 int depth_limit) {
    return is_relevant(minimal_supports(pk, q, std::nullopt, depth_limit), player_index(pk, player));
}

int support_size_bound(const SupportSet& ss) {
    if (!ss.complete)
        throw SupportsIncompleteError("support size bound requires a complete enumeration");
    int k = 0;
    for (auto m : ss.masks) k = std::max(k, std::popcount(m));
    return k;
}

}  // namespace shapql

#include "shapql/game.hpp"

#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <unordered_map>

#include "shapql/errors.hpp"
#include "shapql/reasoner.hpp"

namespace shapql {

std::vector<std::string> PlayerList::labels() const {
    std::vector<std::string> out;
    out.reserve(assertions.size() + axioms.size());
    for (const auto& a : assertions) out.push_back(to_string(a));
    for (const auto& t : axioms) out.push_back(to_string(t));
    return out;
}

PlayerList players_of(const PartitionedKB& pk) {
    PlayerList pl;
    pl.assertions.assign(pk.abox_endo.begin(), pk.abox_endo.end());
    pl.axioms = pk.tbox_endo;  // kept sorted by the KB invariants
    return pl;
}

namespace {

// Fast path for purely graph-shaped games: reachability queries over an
// edge-only KB with no TBox. Semantically identical to the general oracle
// (no rules means the chase is the identity and never clashes).
struct ReachOracle {
    std::string role, source, target;
    std::vector<std::pair<std::string, std::string>> player_edges;
    std::vector<std::pair<std::string, std::string>> exo_edges;

    bool operator()(std::uint64_t mask) const {
        if (source == target) return true;
        std::map<std::string, std::vector<std::string>> adj;
        for (const auto& [u, v] : exo_edges) adj[u].push_back(v);
        for (std::size_t i = 0; i < player_edges.size(); ++i)
            if (mask >> i & 1) adj[player_edges[i].first].push_back(player_edges[i].second);
        std::set<std::string> seen{source};
        std::deque<std::string> todo{source};
        while (!todo.empty()) {
            std::string u = todo.front();
            todo.pop_front();
            if (u == target) return true;
            for (const auto& v : adj[u])
                if (seen.insert(v).second) todo.push_back(v);
        }
        return false;
    }
};

}  // namespace

CooperativeGame make_entailment_game(const PartitionedKB& pk, const BooleanQuery& q,
                                     int depth_limit) {
    pk.validate();
    PlayerList pl = players_of(pk);
    if (pl.size() > 62) throw LimitExceededError("too many endogenous elements for bitmask coalitions");

    CooperativeGame g;
    g.n = pl.size();
    g.player_labels = pl.labels();

    if (depth_limit < 0) {
        NormalizedTBox full = normalize_tbox(pk.full_tbox());
        depth_limit = default_depth_limit(full, q);
    }

    auto stats = g.stats;
    auto memo = std::make_shared<std::unordered_map<std::uint64_t, bool>>();
    auto memo_mutex = std::make_shared<std::mutex>();

    bool graph_fast_path = q.kind == BooleanQuery::Kind::Reach && pk.tbox_endo.empty() &&
                           pk.tbox_exo.empty() && pl.axioms.empty();
    if (graph_fast_path) {
        ReachOracle oracle;
        oracle.role = q.reach_role;
        oracle.source = q.reach_source;
        oracle.target = q.reach_target;
        for (const auto& a : pl.assertions) {
            if (a.kind != Assertion::Kind::Role || a.predicate != q.reach_role)
                oracle.player_edges.emplace_back("", "");  // never contributes
            else
                oracle.player_edges.emplace_back(a.subject, a.object);
        }
        for (const auto& a : pk.abox_exo)
            if (a.kind == Assertion::Kind::Role && a.predicate == q.reach_role)
                oracle.exo_edges.emplace_back(a.subject, a.object);
        g.raw_score = [oracle, memo, memo_mutex, stats](std::uint64_t mask) {
            {
                std::lock_guard lock(*memo_mutex);
                if (auto it = memo->find(mask); it != memo->end()) {
                    ++stats->memo_hits;
                    return it->second;
                }
                ++stats->entailment_calls;
            }
            bool r = oracle(mask);
            std::lock_guard lock(*memo_mutex);
            memo->emplace(mask, r);
            return r;
        };
    } else {
        auto kb = std::make_shared<PartitionedKB>(pk);
        auto players = std::make_shared<PlayerList>(pl);
        auto query = std::make_shared<BooleanQuery>(q);
        g.raw_score = [kb, players, query, memo, memo_mutex, stats, depth_limit](std::uint64_t mask) {
            {
                std::lock_guard lock(*memo_mutex);
                if (auto it = memo->find(mask); it != memo->end()) {
                    ++stats->memo_hits;
                    return it->second;
                }
                ++stats->entailment_calls;
            }
            ABox abox = kb->abox_exo;
            for (std::size_t i = 0; i < players->assertions.size(); ++i)
                if (mask >> i & 1) abox.insert(players->assertions[i]);
            std::vector<Axiom> tbox = kb->tbox_exo;
            for (std::size_t i = 0; i < players->axioms.size(); ++i)
                if (mask >> (players->assertions.size() + i) & 1)
                    tbox.push_back(players->axioms[i]);
            Verdict v = entails(abox, tbox, *query, depth_limit);
            if (v == Verdict::Unknown)
                throw OracleUnknownError("entailment oracle returned unknown for a coalition");
            bool r = v == Verdict::Yes;
            std::lock_guard lock(*memo_mutex);
            memo->emplace(mask, r);
            return r;
        };
    }
    // v_x is the verdict of the exogenous context alone (empty coalition).
    g.exo_satisfied = g.raw_score(0);
    return g;
}

CooperativeGame game_from_supports(int n, const std::vector<std::uint64_t>& supports) {
    CooperativeGame g;
    g.n = n;
    for (int i = 0; i < n; ++i) g.player_labels.push_back("p" + std::to_string(i));
    g.exo_satisfied = false;
    for (auto s : supports)
        if (s == 0) g.exo_satisfied = true;
    g.raw_score = [supports](std::uint64_t mask) {
        for (auto s : supports)
            if ((mask & s) == s) return true;
        return false;
    };
    return g;
}

}  // namespace shapql

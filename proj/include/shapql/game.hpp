#ifndef SHAPQL_GAME_HPP
#define SHAPQL_GAME_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "shapql/kb.hpp"

namespace shapql {

// Oracle call counters, surfaced through the CLI output records.
struct OracleStats {
    std::uint64_t entailment_calls = 0;
    std::uint64_t memo_hits = 0;
};

// A cooperative game with deterministic 0/1 score oracle over coalitions
// encoded as bitmasks (bit i = player i). raw_score is the entailment
// verdict v_B of the coalition together with the exogenous context; the
// wealth function w(B) = v_B - v_x collapses to 0 when the context already
// satisfies the query.
struct CooperativeGame {
    int n = 0;
    std::vector<std::string> player_labels;
    bool exo_satisfied = false;
    std::function<bool(std::uint64_t)> raw_score;
    std::shared_ptr<OracleStats> stats = std::make_shared<OracleStats>();

    int wealth(std::uint64_t mask) const {
        if (exo_satisfied) return 0;
        return raw_score(mask) ? 1 : 0;
    }
};

// Player description for entailment games: endogenous assertions first
// (sorted), then endogenous axioms (sorted).
struct PlayerList {
    std::vector<Assertion> assertions;
    std::vector<Axiom> axioms;
    std::vector<std::string> labels() const;
    int size() const { return static_cast<int>(assertions.size() + axioms.size()); }
};

PlayerList players_of(const PartitionedKB& pk);

// Builds the memoized entailment game for (pk, q). Throws OracleUnknownError
// from the score function if the chase cannot decide a coalition.
CooperativeGame make_entailment_game(const PartitionedKB& pk, const BooleanQuery& q,
                                     int depth_limit = -1);

// Convenience for tests and synthetic games: the score is 1 iff the mask
// contains at least one of the given supports.
CooperativeGame game_from_supports(int n, const std::vector<std::uint64_t>& supports);

}  // namespace shapql

#endif

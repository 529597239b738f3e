#ifndef SHAPQL_SUPPORTS_HPP
#define SHAPQL_SUPPORTS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "shapql/game.hpp"
#include "shapql/kb.hpp"

namespace shapql {

// Antichain of minimal endogenous subsets relative to a fixed exogenous
// context, TBox and query. `exo_satisfied` marks the degenerate case where
// the context alone entails the query (the set is then exactly { {} }).
struct SupportSet {
    int player_count = 0;
    std::vector<std::string> player_labels;
    std::vector<std::uint64_t> masks;                // canonical order: by size, then value
    std::vector<std::vector<int>> supports() const;  // index sets
    bool exo_satisfied = false;
    bool complete = true;

    bool mask_covers(std::uint64_t coalition) const;
};

// Exact enumeration by increasing cardinality with superset pruning. The
// default cap is the number of players (exhaustive). Throws
// SupportsIncompleteError when a lower cap cuts off a nonempty frontier,
// and OracleUnknownError when the reasoner cannot decide a coalition.
SupportSet minimal_supports(const CooperativeGame& g, std::optional<int> cap = std::nullopt);
SupportSet minimal_supports(const PartitionedKB& pk, const BooleanQuery& q,
                            std::optional<int> cap = std::nullopt, int depth_limit = -1);

bool is_relevant(const SupportSet& ss, int player);
bool is_relevant(const PartitionedKB& pk, const BooleanQuery& q, const Assertion& player,
                 int depth_limit = -1);
bool is_relevant(const PartitionedKB& pk, const BooleanQuery& q, const Axiom& player,
                 int depth_limit = -1);

// Max support cardinality K (0 for empty or context-satisfied sets).
// Requires a complete enumeration.
int support_size_bound(const SupportSet& ss);

}  // namespace shapql

#endif

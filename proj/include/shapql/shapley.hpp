#ifndef SHAPQL_SHAPLEY_HPP
#define SHAPQL_SHAPLEY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "shapql/game.hpp"
#include "shapql/rational.hpp"
#include "shapql/supports.hpp"

namespace shapql {

struct ShapleyResult {
    int n = 0;
    std::vector<std::string> player_labels;
    std::vector<Rational> values;
    std::string method;
};

inline constexpr int kDefaultExactLimit = 20;
inline constexpr int kPermutationLimit = 8;

// Weighted subset-sum formulation: sum over B subseteq P\{p} of
// |B|!(|P|-|B|-1)!/|P|! * (w(B u {p}) - w(B)).
Rational shapley_exact_subset(const CooperativeGame& g, int player,
                              int limit = kDefaultExactLimit);

// Permutation definition: average marginal contribution over all |P|! orders.
Rational shapley_exact_permutation(const CooperativeGame& g, int player,
                                   int limit = kPermutationLimit);

// Inclusion-exclusion over the complete minimal-support antichain; requires a
// monotone game with score(empty) = 0.
Rational shapley_via_supports(const SupportSet& ss, int n, int player);

// All players with the subset-sum sweep (single pass over coalitions).
ShapleyResult shapley_all(const CooperativeGame& g, int limit = kDefaultExactLimit);

struct SampleEstimate {
    Rational estimate;
    long samples = 0;
    std::uint64_t seed = 0;
    std::string method;
};

// Monte Carlo permutation sampling with the two-sided Hoeffding sample count
// N = ceil(ln(2/delta) / (2 eps^2)). Deterministic given (seed, N): sample i
// draws its permutation from a generator keyed by (seed, i), so the result
// does not depend on how samples are partitioned across threads.
long hoeffding_sample_count(const Rational& eps, const Rational& delta);
SampleEstimate sample_additive(const CooperativeGame& g, int player, const Rational& eps,
                               const Rational& delta, std::uint64_t seed, int threads = 1);

// Multiplicative-guarantee sampler: exact 0 for irrelevant players, otherwise
// the additive sampler at eps' = eps * m^(-k) with m = |players| and k the
// support-size bound.
SampleEstimate sample_multiplicative(const CooperativeGame& g, const SupportSet& ss, int player,
                                     const Rational& eps, const Rational& delta, int support_bound,
                                     std::uint64_t seed, int threads = 1);

// Closed form for atomic queries A(c) under a fully exogenous DL-Lite TBox.
// Refuses instances where inconsistency is reachable instead of returning a
// wrong value.
ShapleyResult dllite_atomic_shapley(const PartitionedKB& pk, const Assertion& goal,
                                    int depth_limit = -1);

}  // namespace shapql

#endif

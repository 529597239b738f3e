#include "shapql/shapley.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <thread>

#include "shapql/errors.hpp"
#include "shapql/reasoner.hpp"

namespace shapql {

namespace {

void check_player(const CooperativeGame& g, int player) {
    if (player < 0 || player >= g.n) throw Error("player index out of range");
}

// Subset-sum weights k!(n-k-1)! for k = 0..n-1, shared denominator n!.
std::vector<Integer> subset_weights(int n) {
    std::vector<Integer> w(n);
    for (int k = 0; k < n; ++k) w[k] = factorial(k) * factorial(n - k - 1);
    return w;
}

}  // namespace

Rational shapley_exact_subset(const CooperativeGame& g, int player, int limit) {
    check_player(g, player);
    if (g.n > limit)
        throw LimitExceededError("exact subset sweep limited to " + std::to_string(limit) +
                                 " players");
    if (g.exo_satisfied) return 0;
    auto weights = subset_weights(g.n);
    std::vector<long> diff_by_size(g.n, 0);
    std::uint64_t pbit = std::uint64_t{1} << player;
    std::uint64_t space = std::uint64_t{1} << g.n;
    for (std::uint64_t mask = 0; mask < space; ++mask) {
        if (mask & pbit) continue;
        int d = g.wealth(mask | pbit) - g.wealth(mask);
        if (d != 0) diff_by_size[std::popcount(mask)] += d;
    }
    Integer num = 0;
    for (int k = 0; k < g.n; ++k) num += Integer(diff_by_size[k]) * weights[k];
    Rational v(num, factorial(g.n));
    v.canonicalize();
    return v;
}

Rational shapley_exact_permutation(const CooperativeGame& g, int player, int limit) {
    check_player(g, player);
    if (g.n > limit)
        throw LimitExceededError("permutation enumeration limited to " + std::to_string(limit) +
                                 " players");
    if (g.exo_satisfied) return 0;
    std::vector<int> perm(g.n);
    std::iota(perm.begin(), perm.end(), 0);
    long total = 0;
    do {
        std::uint64_t before = 0;
        for (int x : perm) {
            if (x == player) break;
            before |= std::uint64_t{1} << x;
        }
        total += g.wealth(before | (std::uint64_t{1} << player)) - g.wealth(before);
    } while (std::next_permutation(perm.begin(), perm.end()));
    Rational v(Integer(total), factorial(g.n));
    v.canonicalize();
    return v;
}

Rational shapley_via_supports(const SupportSet& ss, int n, int player) {
    if (player < 0 || player >= n) throw Error("player index out of range");
    if (!ss.complete) throw SupportsIncompleteError("via-supports needs a complete support set");
    if (ss.exo_satisfied || ss.masks.empty()) return 0;
    if (ss.masks.size() > 22)
        throw LimitExceededError("inclusion-exclusion over more than 22 supports");

    // W(u) = sum_{k>=u} C(n-1-u, k-u) k!(n-k-1)!  counts weighted coalitions
    // B (not containing the player) with a fixed u-subset inside.
    auto weights = subset_weights(n);
    std::vector<Integer> W(n + 1, 0);
    for (int u = 0; u <= n - 1; ++u)
        for (int k = u; k <= n - 1; ++k) W[u] += binomial(n - 1 - u, k - u) * weights[k];

    std::uint64_t pbit = std::uint64_t{1} << player;
    std::size_t r = ss.masks.size();
    Integer total = 0;
    for (std::uint64_t fam = 1; fam < (std::uint64_t{1} << r); ++fam) {
        std::uint64_t uni = 0;
        for (std::size_t i = 0; i < r; ++i)
            if (fam >> i & 1) uni |= ss.masks[i];
        int sign = (std::popcount(fam) % 2 == 1) ? 1 : -1;
        // Coalitions whose union with {p} covers the family.
        Integer term = W[std::popcount(uni & ~pbit)];
        // Minus those already covering it without p.
        if (!(uni & pbit)) term -= W[std::popcount(uni)];
        total += sign * term;
    }
    Rational v(total, factorial(n));
    v.canonicalize();
    return v;
}

ShapleyResult shapley_all(const CooperativeGame& g, int limit) {
    if (g.n > limit)
        throw LimitExceededError("exact sweep limited to " + std::to_string(limit) + " players");
    ShapleyResult res;
    res.n = g.n;
    res.player_labels = g.player_labels;
    res.method = "exact-subset";
    res.values.assign(g.n, Rational(0));
    if (g.exo_satisfied || g.n == 0) return res;

    std::uint64_t space = std::uint64_t{1} << g.n;
    std::vector<signed char> score(space);
    for (std::uint64_t mask = 0; mask < space; ++mask)
        score[mask] = static_cast<signed char>(g.wealth(mask));

    auto weights = subset_weights(g.n);
    Integer nfact = factorial(g.n);
    for (int p = 0; p < g.n; ++p) {
        std::uint64_t pbit = std::uint64_t{1} << p;
        std::vector<long> diff_by_size(g.n, 0);
        for (std::uint64_t mask = 0; mask < space; ++mask) {
            if (mask & pbit) continue;
            int d = score[mask | pbit] - score[mask];
            if (d != 0) diff_by_size[std::popcount(mask)] += d;
        }
        Integer num = 0;
        for (int k = 0; k < g.n; ++k) num += Integer(diff_by_size[k]) * weights[k];
        res.values[p] = Rational(num, nfact);
        res.values[p].canonicalize();
    }
    return res;
}

// ------------------------------------------------------------ sampling

namespace {

// splitmix64; fixed, platform-independent stream
std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Unbiased-enough bounded draw (Lemire multiply-shift); determinism is what
// matters here, the modulo bias at these ranges is irrelevant.
std::uint32_t bounded(std::uint64_t& state, std::uint32_t n) {
    return static_cast<std::uint32_t>((splitmix64(state) >> 32) * std::uint64_t{n} >> 32);
}

// Marginal contribution of `player` in the permutation drawn for sample
// index `i` of the (seed, i) stream.
int sampled_marginal(const CooperativeGame& g, int player, std::uint64_t seed, std::uint64_t i) {
    std::uint64_t state = seed * 0x9e3779b97f4a7c15ull + i * 0xd1b54a32d192ed03ull + 1;
    std::vector<int> perm(g.n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int j = g.n - 1; j > 0; --j)
        std::swap(perm[j], perm[bounded(state, static_cast<std::uint32_t>(j + 1))]);
    std::uint64_t before = 0;
    for (int x : perm) {
        if (x == player) break;
        before |= std::uint64_t{1} << x;
    }
    return g.wealth(before | (std::uint64_t{1} << player)) - g.wealth(before);
}

}  // namespace

long hoeffding_sample_count(const Rational& eps, const Rational& delta) {
    if (eps <= 0 || eps >= 1 || delta <= 0 || delta >= 1)
        throw Error("eps and delta must lie in (0,1)");
    double e = to_double(eps);
    double d = to_double(delta);
    return static_cast<long>(std::ceil(std::log(2.0 / d) / (2.0 * e * e)));
}

SampleEstimate sample_additive(const CooperativeGame& g, int player, const Rational& eps,
                               const Rational& delta, std::uint64_t seed, int threads) {
    check_player(g, player);
    long n_samples = hoeffding_sample_count(eps, delta);
    SampleEstimate est;
    est.samples = n_samples;
    est.seed = seed;
    est.method = "sample-additive";
    if (g.exo_satisfied) {
        est.estimate = 0;
        return est;
    }
    threads = std::max(1, threads);
    std::vector<long> partial(threads, 0);
    auto run = [&](int t) {
        long local = 0;
        for (long i = t; i < n_samples; i += threads) local += sampled_marginal(g, player, seed, i);
        partial[t] = local;
    };
    if (threads == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(run, t);
        for (auto& th : pool) th.join();
    }
    long total = std::accumulate(partial.begin(), partial.end(), 0L);
    est.estimate = Rational(Integer(total), Integer(n_samples));
    est.estimate.canonicalize();
    return est;
}

SampleEstimate sample_multiplicative(const CooperativeGame& g, const SupportSet& ss, int player,
                                     const Rational& eps, const Rational& delta, int support_bound,
                                     std::uint64_t seed, int threads) {
    check_player(g, player);
    if (!ss.complete)
        throw SupportsIncompleteError("multiplicative sampler needs a complete support set");
    if (!is_relevant(ss, player)) {
        SampleEstimate est;
        est.estimate = 0;
        est.samples = 0;
        est.seed = seed;
        est.method = "sample-multiplicative (irrelevant, exact 0)";
        return est;
    }
    Integer mk;
    mpz_pow_ui(mk.get_mpz_t(), Integer(g.n).get_mpz_t(), static_cast<unsigned long>(support_bound));
    Rational scaled = eps / Rational(mk);
    scaled.canonicalize();
    SampleEstimate est = sample_additive(g, player, scaled, delta, seed, threads);
    est.method = "sample-multiplicative";
    return est;
}

// ------------------------------------------------------------ DL-Lite

ShapleyResult dllite_atomic_shapley(const PartitionedKB& pk, const Assertion& goal,
                                    int depth_limit) {
    if (goal.kind != Assertion::Kind::Concept)
        throw Error("dllite_atomic_shapley expects an atomic concept goal A(c)");
    if (pk.dialect != Dialect::DlLite) throw DialectError("closed form requires the dl-lite dialect");
    if (!pk.tbox_endo.empty())
        throw Error("closed form requires a fully exogenous TBox");
    pk.validate();

    BooleanQuery q = BooleanQuery::ucq(
        {CQ::of({QueryAtom{goal.predicate, {Term::constant(goal.subject)}}})});
    std::vector<Axiom> tbox = pk.full_tbox();
    ABox all = pk.full_abox();

    switch (is_consistent(all, tbox, depth_limit)) {
        case Consistency::Inconsistent:
            throw Error(
                "closed form refused: inconsistency reachable within the instance (negative "
                "inclusions fire), fall back to the exact engine");
        case Consistency::Unknown:
            throw OracleUnknownError("consistency check inconclusive");
        default: break;
    }

    // Single-fact witnesses: every fact alpha with ({alpha}, T) |= A(c).
    std::vector<Assertion> endo(pk.abox_endo.begin(), pk.abox_endo.end());
    int n = static_cast<int>(endo.size());
    ShapleyResult res;
    res.n = n;
    res.method = "dllite-atomic";
    for (const auto& a : endo) res.player_labels.push_back(to_string(a));
    res.values.assign(n, Rational(0));

    bool witness_in_exo = false;
    for (const auto& a : pk.abox_exo) {
        ABox single{a};
        Verdict v = entails(single, tbox, q, depth_limit);
        if (v == Verdict::Unknown) throw OracleUnknownError("single-fact entailment inconclusive");
        if (v == Verdict::Yes) witness_in_exo = true;
    }
    if (witness_in_exo) return res;  // query already satisfied, all values zero

    std::vector<int> witnesses;
    for (int i = 0; i < n; ++i) {
        ABox single{endo[i]};
        Verdict v = entails(single, tbox, q, depth_limit);
        if (v == Verdict::Unknown) throw OracleUnknownError("single-fact entailment inconclusive");
        if (v == Verdict::Yes) witnesses.push_back(i);
    }
    int m = static_cast<int>(witnesses.size());
    if (m == 0) return res;

    // Sh(alpha_i) = sum_{k=0}^{n-m} C(n-m,k) k!(n-k-1)!/n!, the probability
    // of arriving first among the m witnesses.
    Integer num = 0;
    for (int k = 0; k <= n - m; ++k)
        num += binomial(n - m, k) * factorial(k) * factorial(n - k - 1);
    Rational value(num, factorial(n));
    value.canonicalize();
    for (int i : witnesses) res.values[i] = value;
    return res;
}

}  // namespace shapql

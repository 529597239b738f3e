#include "shapql/pqe.hpp"

#include <bit>

#include "shapql/errors.hpp"
#include "shapql/reasoner.hpp"

namespace shapql {

ProbabilisticABox ProbabilisticABox::from_document(const KbDocument& doc) {
    ProbabilisticABox d;
    for (const auto* box : {&doc.abox_endo, &doc.abox_exo})
        for (const auto& a : *box) {
            auto it = doc.probabilities.find(a);
            d.facts[a] = it == doc.probabilities.end() ? Rational(1) : it->second;
        }
    return d;
}

ABox ProbabilisticABox::certain() const {
    ABox out;
    for (const auto& [a, p] : facts)
        if (p == 1) out.insert(a);
    return out;
}

std::vector<std::pair<Assertion, Rational>> ProbabilisticABox::uncertain() const {
    std::vector<std::pair<Assertion, Rational>> out;
    for (const auto& [a, p] : facts)
        if (p != 1) out.emplace_back(a, p);
    return out;
}

std::optional<Regime> parse_regime(const std::string& name) {
    if (name == "half") return Regime::Half;
    if (name == "half-one") return Regime::HalfOne;
    if (name == "single-proper") return Regime::SingleProper;
    if (name == "any") return Regime::Any;
    return std::nullopt;
}

bool validate_regime(const ProbabilisticABox& d, Regime regime) {
    Rational half(1, 2);
    switch (regime) {
        case Regime::Any: return true;
        case Regime::Half:
            for (const auto& [a, p] : d.facts)
                if (p != half) return false;
            return true;
        case Regime::HalfOne:
            for (const auto& [a, p] : d.facts)
                if (p != half && p != 1) return false;
            return true;
        case Regime::SingleProper: {
            std::optional<Rational> proper;
            for (const auto& [a, p] : d.facts) {
                if (p == 1) continue;
                if (!proper)
                    proper = p;
                else if (*proper != p)
                    return false;
            }
            return true;
        }
    }
    return false;
}

Rational pqe_exact(const ProbabilisticABox& d, const std::vector<Axiom>& tbox,
                   const BooleanQuery& q, int depth_limit, int uncertain_limit) {
    auto uncertain = d.uncertain();
    int m = static_cast<int>(uncertain.size());
    if (m > uncertain_limit)
        throw LimitExceededError("more than " + std::to_string(uncertain_limit) +
                                 " uncertain facts");

    ABox world = d.certain();
    auto query_holds = [&](const ABox& w) {
        Verdict v = entails(w, tbox, q, depth_limit);
        if (v == Verdict::Unknown)
            throw OracleUnknownError("entailment inconclusive in a possible world");
        return v == Verdict::Yes;
    };

    if (m == 0) return query_holds(world) ? Rational(1) : Rational(0);

    // Gray-code walk over the worlds: one fact flips per step, the weight is
    // updated by the corresponding odds factor (all p_i lie in (0,1)).
    Rational weight(1);
    for (const auto& [a, p] : uncertain) weight *= (Rational(1) - p);
    std::vector<bool> in_world(m, false);

    Rational total(0);
    if (query_holds(world)) total += weight;
    std::uint64_t steps = std::uint64_t{1} << m;
    for (std::uint64_t g = 1; g < steps; ++g) {
        int bit = std::countr_zero(g);
        const auto& [fact, p] = uncertain[bit];
        if (!in_world[bit]) {
            world.insert(fact);
            weight *= p / (Rational(1) - p);
        } else {
            world.erase(fact);
            weight *= (Rational(1) - p) / p;
        }
        in_world[bit] = !in_world[bit];
        weight.canonicalize();
        if (query_holds(world)) total += weight;
    }
    total.canonicalize();
    return total;
}

namespace {

std::set<std::string> concept_signature(const std::vector<Axiom>& tbox, const BooleanQuery& q) {
    std::set<std::string> names;
    std::function<void(const Concept&)> walk = [&](const Concept& c) {
        if (c.kind() == Concept::Kind::Name) names.insert(c.concept_name());
        if (c.kind() == Concept::Kind::And) {
            walk(c.left());
            walk(c.right());
        }
        if (c.kind() == Concept::Kind::Exists) walk(c.filler());
        if (c.kind() == Concept::Kind::Not) walk(c.inner());
    };
    for (const auto& ax : tbox)
        if (ax.kind == Axiom::Kind::ConceptIncl) {
            walk(ax.lhs_concept);
            walk(ax.rhs_concept);
        }
    if (q.kind == BooleanQuery::Kind::Ucq)
        for (const auto& d : q.disjuncts)
            for (const auto& at : d.atoms)
                if (at.args.size() == 1) names.insert(at.predicate);
    return names;
}

Concept replace_bot(const Concept& c, const std::string& bot_name) {
    switch (c.kind()) {
        case Concept::Kind::Bot: return Concept::name(bot_name);
        case Concept::Kind::And:
            return Concept::conj(replace_bot(c.left(), bot_name), replace_bot(c.right(), bot_name));
        case Concept::Kind::Exists:
            return Concept::exists(c.role(), replace_bot(c.filler(), bot_name));
        case Concept::Kind::Not: return Concept::negation(replace_bot(c.inner(), bot_name));
        default: return c;
    }
}

}  // namespace

QstarTransform qstar_transform(const std::vector<Axiom>& tbox, const BooleanQuery& ucq,
                               const std::string& bot_name) {
    if (ucq.kind != BooleanQuery::Kind::Ucq) throw Error("qstar_transform expects a UCQ");
    for (const auto& ax : tbox) check_axiom_dialect(ax, Dialect::ElhiBot);
    if (concept_signature(tbox, ucq).count(bot_name))
        throw Error("fresh name '" + bot_name + "' clashes with the input signature");

    QstarTransform out;
    out.bot_name = bot_name;
    for (const auto& ax : tbox) {
        if (ax.kind == Axiom::Kind::ConceptIncl)
            out.tbox.push_back(
                Axiom::concept_incl(ax.lhs_concept, replace_bot(ax.rhs_concept, bot_name)));
        else
            out.tbox.push_back(ax);
    }
    std::vector<CQ> disjuncts = ucq.disjuncts;
    disjuncts.push_back(CQ::of({QueryAtom{bot_name, {Term::var("x")}}}));
    out.query = BooleanQuery::ucq(std::move(disjuncts));
    return out;
}

bool verify_qstar_equivalence(const ABox& abox, const std::vector<Axiom>& tbox,
                              const BooleanQuery& q, int depth_limit) {
    QstarTransform t = qstar_transform(tbox, q);
    for (const auto& a : abox)
        if (a.kind == Assertion::Kind::Concept && a.predicate == t.bot_name)
            throw Error("ABox mentions the fresh name " + t.bot_name);
    Verdict lhs = entails(abox, tbox, q, depth_limit);
    Verdict rhs = entails(abox, t.tbox, t.query, depth_limit);
    if (lhs == Verdict::Unknown || rhs == Verdict::Unknown)
        throw OracleUnknownError("equivalence check inconclusive");
    return lhs == rhs;
}

QstarIdentity qstar_identity(const ProbabilisticABox& d, const std::vector<Axiom>& tbox,
                             const BooleanQuery& q, const std::string& bot_name, int depth_limit) {
    QstarTransform t = qstar_transform(tbox, q, bot_name);
    QstarIdentity out;
    out.pr_qstar = pqe_exact(d, t.tbox, t.query, depth_limit);
    BooleanQuery bot_query = BooleanQuery::ucq({CQ::of({QueryAtom{bot_name, {Term::var("x")}}})});
    out.pr_bot = pqe_exact(d, {}, bot_query, depth_limit);
    out.pr_q = pqe_exact(d, tbox, q, depth_limit);
    return out;
}

}  // namespace shapql

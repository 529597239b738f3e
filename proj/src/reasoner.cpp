#include "shapql/reasoner.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "shapql/errors.hpp"

namespace shapql {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "yes";
        case Verdict::No: return "no";
        default: return "unknown";
    }
}

std::string to_string(Consistency c) {
    switch (c) {
        case Consistency::Consistent: return "consistent";
        case Consistency::Inconsistent: return "inconsistent";
        default: return "unknown";
    }
}

// ------------------------------------------------------------ NormalizedTBox

int NormalizedTBox::concept_id(const std::string& name) const {
    auto it = concept_ids_.find(name);
    return it == concept_ids_.end() ? -1 : it->second;
}

int NormalizedTBox::role_id(const std::string& name) const {
    auto it = role_ids_.find(name);
    return it == role_ids_.end() ? -1 : it->second;
}

int NormalizedTBox::intern_concept(const std::string& name) {
    auto it = concept_ids_.find(name);
    if (it != concept_ids_.end()) return it->second;
    int id = static_cast<int>(concept_names.size());
    concept_names.push_back(name);
    concept_ids_[name] = id;
    return id;
}

int NormalizedTBox::intern_role(const std::string& name) {
    auto it = role_ids_.find(name);
    if (it != role_ids_.end()) return it->second;
    int id = static_cast<int>(role_names.size());
    role_names.push_back(name);
    role_ids_[name] = id;
    return id;
}

const std::set<NormalizedTBox::SignedRole>& NormalizedTBox::supers(const SignedRole& r) const {
    static const std::set<SignedRole> empty;
    auto it = role_closure.find(r);
    return it == role_closure.end() ? empty : it->second;
}

namespace {

using SignedRole = NormalizedTBox::SignedRole;

class Normalizer {
  public:
    explicit Normalizer(std::optional<Dialect> dialect) : dialect_(dialect) {
        out_.intern_concept("top");  // id 0
    }

    NormalizedTBox run(const std::vector<Axiom>& axioms) {
        if (dialect_)
            for (const auto& a : axioms) check_axiom_dialect(a, *dialect_);
        for (const auto& a : axioms) add_axiom(a);
        close_roles();
        sort_rules();
        return std::move(out_);
    }

  private:
    void add_axiom(const Axiom& ax) {
        if (ax.kind == Axiom::Kind::RoleIncl) {
            SignedRole lhs = sign(ax.lhs_role);
            SignedRole rhs = sign(ax.rhs_role);
            if (ax.negated_rhs)
                out_.role_disjoint.push_back({lhs, rhs});
            else
                base_incl_.push_back({lhs, rhs});
            return;
        }
        const Concept& c = ax.lhs_concept;
        const Concept& d = ax.rhs_concept;
        if (c.kind() == Concept::Kind::Bot) return;  // vacuous
        if (c.contains_not())
            throw DialectError("negation cannot appear on a left-hand side: " + to_string(ax));
        // Keep the already-normal shapes intact when possible.
        if (d.kind() == Concept::Kind::Name || d.kind() == Concept::Kind::Top) {
            if (d.kind() == Concept::Kind::Top) return;  // vacuous
            int b = out_.intern_concept(d.concept_name());
            if (c.kind() == Concept::Kind::And && is_atomic(c.left()) && is_atomic(c.right())) {
                int a1 = atomic_id(c.left()), a2 = atomic_id(c.right());
                out_.conjs.push_back({std::min(a1, a2), std::max(a1, a2), b});
                return;
            }
            if (c.kind() == Concept::Kind::Exists && is_atomic(c.filler())) {
                out_.exists_lhs.push_back({sign(c.role()), atomic_id(c.filler()), b});
                return;
            }
        }
        emit_sub(lhs_id(c), d);
    }

    static bool is_atomic(const Concept& c) {
        return c.kind() == Concept::Kind::Name || c.kind() == Concept::Kind::Top;
    }

    int atomic_id(const Concept& c) {
        return c.kind() == Concept::Kind::Top ? NormalizedTBox::kTop
                                              : out_.intern_concept(c.concept_name());
    }

    SignedRole sign(const Role& r) { return SignedRole{out_.intern_role(r.name), r.inverted}; }

    // Returns a concept id implied by membership in c (for left-hand sides).
    int lhs_id(const Concept& c) {
        switch (c.kind()) {
            case Concept::Kind::Top:
            case Concept::Kind::Name: return atomic_id(c);
            case Concept::Kind::And: {
                int a1 = lhs_id(c.left());
                int a2 = lhs_id(c.right());
                int x = fresh(c);
                out_.conjs.push_back({std::min(a1, a2), std::max(a1, a2), x});
                return x;
            }
            case Concept::Kind::Exists: {
                int a = lhs_id(c.filler());
                int x = fresh(c);
                out_.exists_lhs.push_back({sign(c.role()), a, x});
                return x;
            }
            default:
                throw DialectError("concept not allowed on a left-hand side: " + to_string(c));
        }
    }

    // Emits rules making concept id `a` imply the right-hand side d.
    void emit_sub(int a, const Concept& d) {
        switch (d.kind()) {
            case Concept::Kind::Top: return;
            case Concept::Kind::Bot: out_.falsum.push_back(a); return;
            case Concept::Kind::Name: out_.subs.push_back({a, atomic_id(d)}); return;
            case Concept::Kind::And:
                emit_sub(a, d.left());
                emit_sub(a, d.right());
                return;
            case Concept::Kind::Exists: {
                const Concept& filler = d.filler();
                int b = is_atomic(filler) ? atomic_id(filler) : fresh(filler);
                out_.exists_rhs.push_back({a, sign(d.role()), b});
                if (!is_atomic(filler)) emit_sub(b, filler);
                return;
            }
            case Concept::Kind::Not: {
                // a sub not B  ~~>  a n B' sub bot, with B' naming the basic B.
                int b = lhs_id(d.inner());
                int z = fresh(d);
                out_.conjs.push_back({std::min(a, b), std::max(a, b), z});
                out_.falsum.push_back(z);
                return;
            }
        }
    }

    int fresh(const Concept& source) {
        std::string name;
        do {
            name = "@N" + std::to_string(++fresh_counter_);
        } while (out_.concept_id(name) >= 0);
        int id = out_.intern_concept(name);
        out_.fresh_names.emplace(name, source);
        return id;
    }

    void close_roles() {
        // Inverse closure of the base inclusions, then reflexive-transitive
        // closure over every signed role mentioned anywhere.
        std::set<SignedRole> all;
        for (int r = 0; r < static_cast<int>(out_.role_names.size()); ++r) {
            all.insert({r, false});
            all.insert({r, true});
        }
        std::map<SignedRole, std::set<SignedRole>> direct;
        for (const auto& [lhs, rhs] : base_incl_) {
            direct[lhs].insert(rhs);
            direct[SignedRole{lhs.role, !lhs.inverted}].insert(SignedRole{rhs.role, !rhs.inverted});
        }
        for (const auto& r : all) {
            std::set<SignedRole> reach{r};
            std::deque<SignedRole> todo{r};
            while (!todo.empty()) {
                SignedRole cur = todo.front();
                todo.pop_front();
                for (const auto& nxt : direct[cur])
                    if (reach.insert(nxt).second) todo.push_back(nxt);
            }
            out_.role_closure[r] = std::move(reach);
        }
    }

    void sort_rules() {
        auto sort_unique = [](auto& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        sort_unique(out_.subs);
        sort_unique(out_.conjs);
        sort_unique(out_.exists_lhs);
        sort_unique(out_.exists_rhs);
        sort_unique(out_.falsum);
        sort_unique(out_.role_disjoint);
    }

    std::optional<Dialect> dialect_;
    NormalizedTBox out_;
    std::vector<std::pair<SignedRole, SignedRole>> base_incl_;
    int fresh_counter_ = 0;
};

}  // namespace

NormalizedTBox normalize_tbox(const std::vector<Axiom>& axioms, std::optional<Dialect> dialect) {
    return Normalizer(dialect).run(axioms);
}

// ------------------------------------------------------------ chase

bool CanonicalStructure::has_label(int element, int concept) const {
    if (concept == NormalizedTBox::kTop) return true;
    return labels[element].count(concept) > 0;
}

namespace {

// Facts shared by the chase and the countermodel search.
struct Interpretation {
    std::vector<std::set<int>> labels;
    std::set<std::array<int, 3>> edges;  // {role, src, dst}

    bool has_label(int x, int c) const {
        return c == NormalizedTBox::kTop || labels[x].count(c) > 0;
    }
    bool add_label(int x, int c) {
        if (c == NormalizedTBox::kTop) return false;
        return labels[x].insert(c).second;
    }
    bool has_edge_signed(const SignedRole& r, int x, int y) const {
        return r.inverted ? edges.count({r.role, y, x}) > 0 : edges.count({r.role, x, y}) > 0;
    }
    bool add_edge_signed(const SignedRole& r, int x, int y) {
        return r.inverted ? edges.insert({r.role, y, x}).second : edges.insert({r.role, x, y}).second;
    }
    // All y with a signed-r edge from x.
    std::vector<int> successors(const SignedRole& r, int x) const {
        std::vector<int> out;
        for (const auto& e : edges) {
            if (e[0] != r.role) continue;
            if (!r.inverted && e[1] == x) out.push_back(e[2]);
            if (r.inverted && e[2] == x) out.push_back(e[1]);
        }
        return out;
    }
};

// Applies every non-existential rule to fixpoint. Returns false on clash.
bool saturate(Interpretation& st, const NormalizedTBox& t) {
    int n = static_cast<int>(st.labels.size());
    bool changed = true;
    while (changed) {
        changed = false;
        // role hierarchy; supers of the forward polarity cover the inverse
        // reading too because the closure is inverse-closed
        std::vector<std::array<int, 3>> to_add;
        for (const auto& e : st.edges) {
            for (const auto& s : t.supers(SignedRole{e[0], false})) {
                int src = s.inverted ? e[2] : e[1];
                int dst = s.inverted ? e[1] : e[2];
                if (!st.edges.count({s.role, src, dst})) to_add.push_back({s.role, src, dst});
            }
        }
        for (const auto& e : to_add) {
            st.edges.insert(e);
            changed = true;
        }
        for (const auto& r : t.subs)
            for (int x = 0; x < n; ++x)
                if (st.has_label(x, r.a) && st.add_label(x, r.b)) changed = true;
        for (const auto& r : t.conjs)
            for (int x = 0; x < n; ++x)
                if (st.has_label(x, r.a1) && st.has_label(x, r.a2) && st.add_label(x, r.b))
                    changed = true;
        for (const auto& r : t.exists_lhs) {
            for (const auto& e : st.edges) {
                if (e[0] != r.r.role) continue;
                int x = r.r.inverted ? e[2] : e[1];
                int y = r.r.inverted ? e[1] : e[2];
                if (st.has_label(y, r.a) && st.add_label(x, r.b)) changed = true;
            }
        }
        for (int a : t.falsum)
            for (int x = 0; x < n; ++x)
                if (st.has_label(x, a)) return false;
        for (const auto& [r1, r2] : t.role_disjoint)
            for (const auto& e : st.edges) {
                if (e[0] != r1.role) continue;
                int x = r1.inverted ? e[2] : e[1];
                int y = r1.inverted ? e[1] : e[2];
                if (st.has_edge_signed(r2, x, y)) return false;
            }
    }
    return true;
}

}  // namespace

CanonicalStructure chase(const ABox& abox, const NormalizedTBox& tbox, int depth_limit) {
    CanonicalStructure cs;
    NormalizedTBox names = tbox;  // local copy so ABox symbols can be interned
    cs.depth_limit = depth_limit;

    for (const auto& ind : abox.individuals()) {
        cs.individual_ids[ind] = static_cast<int>(cs.element_names.size());
        cs.element_names.push_back(ind);
        cs.depth.push_back(0);
        cs.parent.push_back(-1);
    }
    if (cs.element_names.empty()) {
        // Interpretation domains are non-empty; seed one anonymous element so
        // that top-level rules (e.g. top sub A) take effect.
        cs.element_names.push_back("~seed");
        cs.depth.push_back(0);
        cs.parent.push_back(-1);
    }

    Interpretation st;
    st.labels.resize(cs.element_names.size());
    for (const auto& a : abox) {
        if (a.kind == Assertion::Kind::Concept) {
            st.labels[cs.individual_ids.at(a.subject)].insert(names.intern_concept(a.predicate));
        } else {
            st.edges.insert({names.intern_role(a.predicate), cs.individual_ids.at(a.subject),
                             cs.individual_ids.at(a.object)});
        }
    }

    int null_counter = 0;
    while (true) {
        if (!saturate(st, names)) {
            cs.inconsistent = true;
            break;
        }
        // Restricted chase step: first applicable existential in element/rule
        // order, provided the element is below the depth cutoff.
        bool fired = false;
        for (int x = 0; x < static_cast<int>(st.labels.size()) && !fired; ++x) {
            if (cs.depth[x] >= depth_limit) continue;
            for (const auto& r : names.exists_rhs) {
                if (!st.has_label(x, r.a)) continue;
                bool witnessed = false;
                for (int y : st.successors(r.r, x))
                    if (st.has_label(y, r.b)) {
                        witnessed = true;
                        break;
                    }
                if (witnessed) continue;
                int z = static_cast<int>(st.labels.size());
                cs.element_names.push_back("~n" + std::to_string(++null_counter));
                cs.depth.push_back(cs.depth[x] + 1);
                cs.parent.push_back(x);
                st.labels.emplace_back();
                st.add_label(z, r.b);
                st.add_edge_signed(r.r, x, z);
                fired = true;
                break;
            }
        }
        if (!fired) break;
    }

    cs.labels = std::move(st.labels);
    cs.edges = std::move(st.edges);
    cs.concept_names = names.concept_names;
    cs.role_names = names.role_names;

    if (!cs.inconsistent) {
        // Saturated iff no existential demand was suppressed by the cutoff.
        cs.saturated = true;
        Interpretation view{cs.labels, cs.edges};
        for (int x = 0; x < static_cast<int>(cs.labels.size()) && cs.saturated; ++x) {
            if (cs.depth[x] < depth_limit) continue;
            for (const auto& r : names.exists_rhs) {
                if (!view.has_label(x, r.a)) continue;
                bool witnessed = false;
                for (int y : view.successors(r.r, x))
                    if (view.has_label(y, r.b)) {
                        witnessed = true;
                        break;
                    }
                if (!witnessed) {
                    cs.saturated = false;
                    break;
                }
            }
        }
    }
    return cs;
}

int default_depth_limit(const NormalizedTBox& tbox, const BooleanQuery& q) {
    int atoms = 0;
    switch (q.kind) {
        case BooleanQuery::Kind::Ucq:
            for (const auto& d : q.disjuncts) atoms += static_cast<int>(d.atoms.size());
            break;
        case BooleanQuery::Kind::Reach: atoms = 1; break;
        case BooleanQuery::Kind::AxiomGoal: {
            std::function<int(const Concept&)> sz = [&](const Concept& c) -> int {
                switch (c.kind()) {
                    case Concept::Kind::And: return sz(c.left()) + sz(c.right());
                    case Concept::Kind::Exists: return 1 + sz(c.filler());
                    case Concept::Kind::Not: return sz(c.inner());
                    default: return 1;
                }
            };
            if (q.goal && q.goal->kind == Axiom::Kind::ConceptIncl)
                atoms = sz(q.goal->lhs_concept) + sz(q.goal->rhs_concept);
            else
                atoms = 2;
            break;
        }
    }
    return atoms + static_cast<int>(tbox.concept_names.size());
}

// ------------------------------------------------------------ CQ matching

namespace {

// Generic backtracking C-homomorphism search from a CQ into a labeled graph.
// `individual_of` resolves constant names; concept/role ids resolve through
// the provided tables (-1 = absent, hence unmatchable).
struct CqMatcher {
    const std::vector<std::set<int>>& labels;
    const std::set<std::array<int, 3>>& edges;
    const std::map<std::string, int>& individual_ids;
    const std::map<std::string, int>& concept_ids;
    const std::map<std::string, int>& role_ids;

    bool match(const CQ& q) const {
        std::vector<std::string> vars;
        for (const auto& v : q.variables()) vars.push_back(v);
        std::map<std::string, int> assignment;
        for (const auto& c : q.constants()) {
            auto it = individual_ids.find(c);
            if (it == individual_ids.end()) return false;
            assignment[c] = it->second;
        }
        return search(q, vars, 0, assignment);
    }

  private:
    bool atom_ok(const QueryAtom& at, const std::map<std::string, int>& asg) const {
        std::vector<int> ids;
        for (const auto& t : at.args) {
            auto it = asg.find(t.name);
            if (it == asg.end()) return true;  // not fully bound yet
            ids.push_back(it->second);
        }
        if (at.args.size() == 1) {
            auto c = concept_ids.find(at.predicate);
            return c != concept_ids.end() && labels[ids[0]].count(c->second) > 0;
        }
        auto r = role_ids.find(at.predicate);
        return r != role_ids.end() && edges.count({r->second, ids[0], ids[1]}) > 0;
    }

    bool all_atoms_ok(const CQ& q, const std::map<std::string, int>& asg) const {
        for (const auto& at : q.atoms)
            if (!atom_ok(at, asg)) return false;
        return true;
    }

    bool search(const CQ& q, const std::vector<std::string>& vars, std::size_t idx,
                std::map<std::string, int>& asg) const {
        if (!all_atoms_ok(q, asg)) return false;
        if (idx == vars.size()) return true;
        for (int cand = 0; cand < static_cast<int>(labels.size()); ++cand) {
            asg[vars[idx]] = cand;
            if (search(q, vars, idx + 1, asg)) return true;
        }
        asg.erase(vars[idx]);
        return false;
    }
};

std::map<std::string, int> index_names(const std::vector<std::string>& names) {
    std::map<std::string, int> out;
    for (int i = 0; i < static_cast<int>(names.size()); ++i) out[names[i]] = i;
    return out;
}

bool matches_ucq(const CanonicalStructure& cs, const std::vector<CQ>& disjuncts) {
    auto cids = index_names(cs.concept_names);
    auto rids = index_names(cs.role_names);
    CqMatcher m{cs.labels, cs.edges, cs.individual_ids, cids, rids};
    for (const auto& d : disjuncts)
        if (m.match(d)) return true;
    return false;
}

// Unfolds a concept into assertions rooted at `root`, using fresh helper
// individuals (valid for ELHI-bot shapes: no bot / not).
void unfold_concept(const Concept& c, const std::string& root, ABox& out, int& counter) {
    switch (c.kind()) {
        case Concept::Kind::Top: return;
        case Concept::Kind::Name: out.insert(Assertion::concept(c.concept_name(), root)); return;
        case Concept::Kind::And:
            unfold_concept(c.left(), root, out, counter);
            unfold_concept(c.right(), root, out, counter);
            return;
        case Concept::Kind::Exists: {
            std::string child = "~ax" + std::to_string(++counter);
            out.insert(Assertion::role(c.role(), root, child));
            unfold_concept(c.filler(), child, out, counter);
            return;
        }
        default: throw Error("cannot instantiate concept as data: " + to_string(c));
    }
}

// Folds a concept into a tree-shaped CQ rooted at the given term.
void fold_concept(const Concept& c, const Term& root, std::vector<QueryAtom>& atoms, int& counter) {
    switch (c.kind()) {
        case Concept::Kind::Top: return;
        case Concept::Kind::Name:
            atoms.push_back(QueryAtom{c.concept_name(), {root}});
            return;
        case Concept::Kind::And:
            fold_concept(c.left(), root, atoms, counter);
            fold_concept(c.right(), root, atoms, counter);
            return;
        case Concept::Kind::Exists: {
            Term child = Term::var("~v" + std::to_string(++counter));
            const Role& r = c.role();
            if (r.inverted)
                atoms.push_back(QueryAtom{r.name, {child, root}});
            else
                atoms.push_back(QueryAtom{r.name, {root, child}});
            fold_concept(c.filler(), child, atoms, counter);
            return;
        }
        default: throw Error("cannot express concept as a query: " + to_string(c));
    }
}

Verdict entails_impl(const ABox& abox, const std::vector<Axiom>& axioms, const NormalizedTBox& ntbox,
                     const BooleanQuery& q, int depth);

// TBox-level axiom entailment via the fresh-individual reduction; the input
// ABox only matters through the trivial-entailment rule, handled by caller.
Verdict tbox_entails_axiom(const std::vector<Axiom>& axioms, const NormalizedTBox& ntbox,
                           const Axiom& goal, int depth) {
    int counter = 0;
    if (goal.kind == Axiom::Kind::RoleIncl) {
        ABox premise;
        premise.insert(Assertion::role(goal.lhs_role, "~c1", "~c2"));
        if (goal.negated_rhs) {
            premise.insert(Assertion::role(goal.rhs_role, "~c1", "~c2"));
            CanonicalStructure cs = chase(premise, ntbox, depth);
            if (cs.inconsistent) return Verdict::Yes;
            return cs.saturated ? Verdict::No : Verdict::Unknown;
        }
        Role s = goal.rhs_role;
        QueryAtom at = s.inverted ? QueryAtom{s.name, {Term::constant("~c2"), Term::constant("~c1")}}
                                  : QueryAtom{s.name, {Term::constant("~c1"), Term::constant("~c2")}};
        return entails_impl(premise, axioms, ntbox, BooleanQuery::ucq({CQ::of({at})}), depth);
    }
    const Concept& lhs = goal.lhs_concept;
    const Concept& rhs = goal.rhs_concept;
    if (lhs.kind() == Concept::Kind::Bot) return Verdict::Yes;
    ABox premise;
    unfold_concept(lhs, "~c0", premise, counter);
    if (premise.individuals().empty()) premise.insert(Assertion::concept("@Seed", "~c0"));
    bool negative = rhs.kind() == Concept::Kind::Not || rhs.kind() == Concept::Kind::Bot;
    if (negative) {
        if (rhs.kind() == Concept::Kind::Not) unfold_concept(rhs.inner(), "~c0", premise, counter);
        CanonicalStructure cs = chase(premise, ntbox, depth);
        if (cs.inconsistent) return Verdict::Yes;
        return cs.saturated ? Verdict::No : Verdict::Unknown;
    }
    std::vector<QueryAtom> atoms;
    fold_concept(rhs, Term::constant("~c0"), atoms, counter);
    return entails_impl(premise, axioms, ntbox, BooleanQuery::ucq({CQ::of(std::move(atoms))}), depth);
}

Verdict entails_impl(const ABox& abox, const std::vector<Axiom>& axioms, const NormalizedTBox& ntbox,
                     const BooleanQuery& q, int depth) {
    if (q.kind == BooleanQuery::Kind::AxiomGoal) {
        Verdict tb = tbox_entails_axiom(axioms, ntbox, *q.goal, depth);
        if (tb == Verdict::Yes) return Verdict::Yes;
        // A consistent KB entails an axiom iff the TBox alone does.
        CanonicalStructure cs = chase(abox, ntbox, depth);
        if (cs.inconsistent) return Verdict::Yes;
        if (!cs.saturated && ntbox.has_clash_rules()) return Verdict::Unknown;
        return tb;
    }
    CanonicalStructure cs = chase(abox, ntbox, depth);
    if (cs.inconsistent) return Verdict::Yes;
    if (q.kind == BooleanQuery::Kind::Ucq) {
        if (matches_ucq(cs, q.disjuncts)) return Verdict::Yes;
        return cs.saturated ? Verdict::No : Verdict::Unknown;
    }
    // Reach: directed reachability over the given role, restricted to named
    // individuals. A zero-length path counts.
    if (q.reach_source == q.reach_target) return Verdict::Yes;
    auto sit = cs.individual_ids.find(q.reach_source);
    auto tit = cs.individual_ids.find(q.reach_target);
    auto rids = index_names(cs.role_names);
    auto rit = rids.find(q.reach_role);
    bool found = false;
    if (sit != cs.individual_ids.end() && tit != cs.individual_ids.end() && rit != rids.end()) {
        int named = static_cast<int>(cs.individual_ids.size());
        std::vector<char> seen(cs.element_names.size(), 0);
        std::deque<int> todo{sit->second};
        seen[sit->second] = 1;
        while (!todo.empty() && !found) {
            int x = todo.front();
            todo.pop_front();
            if (x == tit->second) found = true;
            for (const auto& e : cs.edges) {
                if (e[0] != rit->second || e[1] != x) continue;
                if (e[2] >= named) continue;  // stay on named individuals
                if (!seen[e[2]]) {
                    seen[e[2]] = 1;
                    todo.push_back(e[2]);
                }
            }
        }
    }
    if (found) return Verdict::Yes;
    return cs.saturated ? Verdict::No : Verdict::Unknown;
}

}  // namespace

Consistency is_consistent(const ABox& abox, const std::vector<Axiom>& tbox, int depth_limit) {
    NormalizedTBox ntbox = normalize_tbox(tbox);
    if (!ntbox.has_clash_rules()) return Consistency::Consistent;
    if (depth_limit < 0)
        depth_limit = default_depth_limit(ntbox, BooleanQuery::ucq({CQ::of({})}));
    CanonicalStructure cs = chase(abox, ntbox, depth_limit);
    if (cs.inconsistent) return Consistency::Inconsistent;
    return cs.saturated ? Consistency::Consistent : Consistency::Unknown;
}

Verdict entails(const ABox& abox, const std::vector<Axiom>& tbox, const BooleanQuery& q,
                int depth_limit) {
    NormalizedTBox ntbox = normalize_tbox(tbox);
    if (depth_limit < 0) depth_limit = default_depth_limit(ntbox, q);
    return entails_impl(abox, tbox, ntbox, q, depth_limit);
}

// ------------------------------------------------------------ FiniteModel

std::set<int> FiniteModel::interpret(const Concept& c) const {
    int n = static_cast<int>(element_names.size());
    std::set<int> out;
    switch (c.kind()) {
        case Concept::Kind::Top:
            for (int i = 0; i < n; ++i) out.insert(i);
            return out;
        case Concept::Kind::Bot: return out;
        case Concept::Kind::Name:
            for (int i = 0; i < n; ++i)
                if (labels[i].count(c.concept_name())) out.insert(i);
            return out;
        case Concept::Kind::And: {
            auto l = interpret(c.left());
            auto r = interpret(c.right());
            for (int x : l)
                if (r.count(x)) out.insert(x);
            return out;
        }
        case Concept::Kind::Exists: {
            auto f = interpret(c.filler());
            const Role& r = c.role();
            for (const auto& [role, src, dst] : edges) {
                if (role != r.name) continue;
                int from = r.inverted ? dst : src;
                int to = r.inverted ? src : dst;
                if (f.count(to)) out.insert(from);
            }
            return out;
        }
        case Concept::Kind::Not: {
            auto inner = interpret(c.inner());
            for (int i = 0; i < n; ++i)
                if (!inner.count(i)) out.insert(i);
            return out;
        }
    }
    return out;
}

bool FiniteModel::satisfies(const ABox& abox) const {
    for (const auto& a : abox) {
        if (a.kind == Assertion::Kind::Concept) {
            auto it = individual_ids.find(a.subject);
            if (it == individual_ids.end() || !labels[it->second].count(a.predicate)) return false;
        } else {
            auto s = individual_ids.find(a.subject);
            auto o = individual_ids.find(a.object);
            if (s == individual_ids.end() || o == individual_ids.end()) return false;
            if (!edges.count({a.predicate, s->second, o->second})) return false;
        }
    }
    return true;
}

bool FiniteModel::satisfies(const std::vector<Axiom>& tbox) const {
    for (const auto& ax : tbox) {
        if (ax.kind == Axiom::Kind::ConceptIncl) {
            auto l = interpret(ax.lhs_concept);
            auto r = interpret(ax.rhs_concept);
            for (int x : l)
                if (!r.count(x)) return false;
        } else {
            auto signed_pairs = [&](const Role& r) {
                std::set<std::pair<int, int>> out;
                for (const auto& [role, src, dst] : edges)
                    if (role == r.name) out.insert(r.inverted ? std::pair{dst, src} : std::pair{src, dst});
                return out;
            };
            auto l = signed_pairs(ax.lhs_role);
            auto r = signed_pairs(ax.rhs_role);
            for (const auto& p : l) {
                bool in_rhs = r.count(p) > 0;
                if (ax.negated_rhs ? in_rhs : !in_rhs) return false;
            }
        }
    }
    return true;
}

bool FiniteModel::satisfies_ucq(const BooleanQuery& q) const {
    if (q.kind != BooleanQuery::Kind::Ucq) throw Error("satisfies_ucq expects a UCQ");
    // Reuse the generic matcher by building id tables over the names used.
    std::map<std::string, int> cids, rids;
    std::vector<std::set<int>> lab(labels.size());
    std::set<std::array<int, 3>> eds;
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (const auto& name : labels[i]) {
            auto [it, _] = cids.emplace(name, static_cast<int>(cids.size()));
            lab[i].insert(it->second);
        }
    for (const auto& [role, src, dst] : edges) {
        auto [it, _] = rids.emplace(role, static_cast<int>(rids.size()));
        eds.insert({it->second, src, dst});
    }
    CqMatcher m{lab, eds, individual_ids, cids, rids};
    for (const auto& d : q.disjuncts)
        if (m.match(d)) return true;
    return false;
}

// ------------------------------------------------------------ countermodel

namespace {

struct ModelSearch {
    const NormalizedTBox& tbox;
    const std::vector<CQ>& disjuncts;
    int max_domain;
    std::vector<std::string> individual_names;
    std::set<std::string> visited;
    std::optional<Interpretation> found;
    int found_size = 0;

    std::string encode(const Interpretation& st) const {
        std::ostringstream os;
        os << st.labels.size() << "|";
        for (const auto& l : st.labels) {
            for (int c : l) os << c << ",";
            os << ";";
        }
        for (const auto& e : st.edges) os << e[0] << ":" << e[1] << ":" << e[2] << ",";
        return os.str();
    }

    bool violates_query(const Interpretation& st) const {
        std::map<std::string, int> inds;
        for (int i = 0; i < static_cast<int>(individual_names.size()); ++i)
            inds[individual_names[i]] = i;
        auto cids = std::map<std::string, int>{};
        for (int i = 0; i < static_cast<int>(tbox.concept_names.size()); ++i)
            cids[tbox.concept_names[i]] = i;
        auto rids = std::map<std::string, int>{};
        for (int i = 0; i < static_cast<int>(tbox.role_names.size()); ++i)
            rids[tbox.role_names[i]] = i;
        CqMatcher m{st.labels, st.edges, inds, cids, rids};
        for (const auto& d : disjuncts)
            if (m.match(d)) return false;
        return true;
    }

    void search(Interpretation st) {
        if (found) return;
        if (!saturate(st, tbox)) return;  // clash, dead branch
        if (!visited.insert(encode(st)).second) return;
        // First unsatisfied existential demand, in deterministic order.
        int n = static_cast<int>(st.labels.size());
        for (int x = 0; x < n; ++x) {
            for (const auto& r : tbox.exists_rhs) {
                if (!st.has_label(x, r.a)) continue;
                bool witnessed = false;
                for (int y : st.successors(r.r, x))
                    if (st.has_label(y, r.b)) {
                        witnessed = true;
                        break;
                    }
                if (witnessed) continue;
                // Branch over all witnesses: existing elements, then a fresh one.
                for (int y = 0; y < n; ++y) {
                    Interpretation next = st;
                    next.add_edge_signed(r.r, x, y);
                    next.add_label(y, r.b);
                    search(std::move(next));
                    if (found) return;
                }
                if (n < max_domain) {
                    Interpretation next = st;
                    next.labels.emplace_back();
                    next.add_edge_signed(r.r, x, n);
                    next.add_label(n, r.b);
                    search(std::move(next));
                }
                return;  // all branches for the first demand explored
            }
        }
        // Saturated model of (abox, tbox); keep it if it falsifies the query.
        if (violates_query(st)) {
            found = st;
            found_size = n;
        }
    }
};

}  // namespace

std::optional<FiniteModel> find_countermodel(const ABox& abox, const std::vector<Axiom>& tbox,
                                             const BooleanQuery& q, int max_domain) {
    if (q.kind != BooleanQuery::Kind::Ucq) throw Error("find_countermodel expects a UCQ");
    NormalizedTBox ntbox = normalize_tbox(tbox);
    auto individuals = abox.individuals();
    if (static_cast<int>(individuals.size()) > max_domain)
        throw Error("max_domain is smaller than the number of ABox individuals");

    std::vector<std::string> names(individuals.begin(), individuals.end());
    if (names.empty()) names.push_back("~m0");  // domains are non-empty

    Interpretation init;
    init.labels.resize(names.size());
    std::map<std::string, int> ids;
    for (int i = 0; i < static_cast<int>(names.size()); ++i) ids[names[i]] = i;
    for (const auto& a : abox) {
        if (a.kind == Assertion::Kind::Concept)
            init.labels[ids.at(a.subject)].insert(ntbox.intern_concept(a.predicate));
        else
            init.edges.insert(
                {ntbox.intern_role(a.predicate), ids.at(a.subject), ids.at(a.object)});
    }

    ModelSearch ms{ntbox, q.disjuncts, std::max(max_domain, 1), names, {}, std::nullopt, 0};
    ms.search(std::move(init));
    if (!ms.found) return std::nullopt;

    FiniteModel m;
    for (int i = 0; i < ms.found_size; ++i) {
        std::string nm = i < static_cast<int>(names.size()) ? names[i] : "~m" + std::to_string(i);
        m.element_names.push_back(nm);
        if (i < static_cast<int>(individuals.size())) m.individual_ids[nm] = i;
    }
    m.labels.resize(ms.found_size);
    for (int i = 0; i < ms.found_size; ++i)
        for (int c : ms.found->labels[i]) {
            const std::string& name = ntbox.concept_names[c];
            if (!ntbox.fresh_names.count(name)) m.labels[i].insert(name);
        }
    for (const auto& e : ms.found->edges) m.edges.insert({ntbox.role_names[e[0]], e[1], e[2]});
    return m;
}

bool embeds_into(const CanonicalStructure& cs, const FiniteModel& m) {
    // Named individuals are pinned; nulls are assigned by backtracking.
    int n = static_cast<int>(cs.element_names.size());
    int dom = static_cast<int>(m.element_names.size());
    std::vector<int> image(n, -1);
    for (const auto& [name, idx] : cs.individual_ids) {
        auto it = m.individual_ids.find(name);
        if (it == m.individual_ids.end()) return false;
        image[idx] = it->second;
    }
    auto label_ok = [&](int x, int y) {
        for (int c : cs.labels[x]) {
            const std::string& name = cs.concept_names[c];
            if (name.rfind("@N", 0) == 0) continue;  // generated helper name
            if (!m.labels[y].count(name)) return false;
        }
        return true;
    };
    auto edges_ok = [&](const std::vector<int>& img) {
        for (const auto& e : cs.edges) {
            if (img[e[1]] < 0 || img[e[2]] < 0) continue;
            if (!m.edges.count({cs.role_names[e[0]], img[e[1]], img[e[2]]})) return false;
        }
        return true;
    };
    std::function<bool(int)> go = [&](int x) -> bool {
        while (x < n && image[x] >= 0) ++x;
        if (x == n) return edges_ok(image);
        for (int y = 0; y < dom; ++y) {
            if (!label_ok(x, y)) continue;
            image[x] = y;
            if (edges_ok(image) && go(x + 1)) return true;
            image[x] = -1;
        }
        return false;
    };
    for (const auto& [name, idx] : cs.individual_ids)
        if (!label_ok(idx, image[idx])) return false;
    return go(0);
}

}  // namespace shapql

#include "shapql/kb.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "shapql/errors.hpp"

namespace shapql {

std::string to_string(Dialect d) { return d == Dialect::ElhiBot ? "elhi-bot" : "dl-lite"; }

std::string to_string(const Role& r) { return r.inverted ? "inv(" + r.name + ")" : r.name; }

// ---------------------------------------------------------------- Concept

Concept Concept::top() { return Concept(Kind::Top, "", Role{}, {}); }
Concept Concept::bot() { return Concept(Kind::Bot, "", Role{}, {}); }
Concept Concept::name(std::string n) { return Concept(Kind::Name, std::move(n), Role{}, {}); }

Concept Concept::conj(Concept lhs, Concept rhs) {
    return Concept(Kind::And, "", Role{},
                   {std::make_shared<Concept>(std::move(lhs)), std::make_shared<Concept>(std::move(rhs))});
}

Concept Concept::exists(Role r, Concept filler) {
    return Concept(Kind::Exists, "", std::move(r), {std::make_shared<Concept>(std::move(filler))});
}

Concept Concept::negation(Concept inner) {
    return Concept(Kind::Not, "", Role{}, {std::make_shared<Concept>(std::move(inner))});
}

bool Concept::contains_bot() const {
    if (kind_ == Kind::Bot) return true;
    for (const auto& c : children_)
        if (c->contains_bot()) return true;
    return false;
}

bool Concept::contains_not() const {
    if (kind_ == Kind::Not) return true;
    for (const auto& c : children_)
        if (c->contains_not()) return true;
    return false;
}

bool Concept::is_dllite_basic() const {
    if (kind_ == Kind::Name) return true;
    return kind_ == Kind::Exists && filler().kind() == Kind::Top;
}

int Concept::compare(const Concept& other) const {
    if (kind_ != other.kind_) return kind_ < other.kind_ ? -1 : 1;
    if (int c = name_.compare(other.name_); c != 0) return c;
    if (role_ != other.role_) return role_ < other.role_ ? -1 : 1;
    if (children_.size() != other.children_.size())
        return children_.size() < other.children_.size() ? -1 : 1;
    for (std::size_t i = 0; i < children_.size(); ++i)
        if (int c = children_[i]->compare(*other.children_[i]); c != 0) return c;
    return 0;
}

std::string to_string(const Concept& c) {
    switch (c.kind()) {
        case Concept::Kind::Top: return "top";
        case Concept::Kind::Bot: return "bot";
        case Concept::Kind::Name: return c.concept_name();
        case Concept::Kind::And: {
            auto wrap = [](const Concept& x) {
                std::string s = to_string(x);
                return x.kind() == Concept::Kind::And ? "(" + s + ")" : s;
            };
            return wrap(c.left()) + " and " + wrap(c.right());
        }
        case Concept::Kind::Exists: {
            std::string f = to_string(c.filler());
            if (c.filler().kind() == Concept::Kind::And || c.filler().kind() == Concept::Kind::Not)
                f = "(" + f + ")";
            return "exists " + to_string(c.role()) + "." + f;
        }
        case Concept::Kind::Not: {
            std::string f = to_string(c.inner());
            if (c.inner().kind() == Concept::Kind::And) f = "(" + f + ")";
            return "not " + f;
        }
    }
    return "";
}

// ---------------------------------------------------------------- Axiom

Axiom Axiom::concept_incl(Concept lhs, Concept rhs) {
    Axiom a;
    a.kind = Kind::ConceptIncl;
    a.lhs_concept = std::move(lhs);
    a.rhs_concept = std::move(rhs);
    return a;
}

Axiom Axiom::role_incl(Role lhs, Role rhs, bool negated) {
    Axiom a;
    a.kind = Kind::RoleIncl;
    a.lhs_role = std::move(lhs);
    a.rhs_role = std::move(rhs);
    a.negated_rhs = negated;
    return a;
}

int Axiom::compare(const Axiom& other) const {
    if (kind != other.kind) return kind < other.kind ? -1 : 1;
    if (kind == Kind::ConceptIncl) {
        if (int c = lhs_concept.compare(other.lhs_concept); c != 0) return c;
        return rhs_concept.compare(other.rhs_concept);
    }
    auto lhs = std::tie(lhs_role, rhs_role, negated_rhs);
    auto rhs = std::tie(other.lhs_role, other.rhs_role, other.negated_rhs);
    return lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
}

std::string to_string(const Axiom& a) {
    if (a.kind == Axiom::Kind::ConceptIncl)
        return to_string(a.lhs_concept) + " sub " + to_string(a.rhs_concept);
    return to_string(a.lhs_role) + " sub " + (a.negated_rhs ? "not " : "") + to_string(a.rhs_role);
}

void check_axiom_dialect(const Axiom& a, Dialect d) {
    if (d == Dialect::ElhiBot) {
        if (a.kind == Axiom::Kind::RoleIncl) {
            if (a.negated_rhs)
                throw DialectError("negative role inclusion not allowed in elhi-bot: " + to_string(a));
            return;
        }
        const Concept& l = a.lhs_concept;
        const Concept& r = a.rhs_concept;
        if (l.contains_not() || r.contains_not())
            throw DialectError("negation not allowed in elhi-bot: " + to_string(a));
        if (l.contains_bot())
            throw DialectError("bot may only appear as a right-hand side: " + to_string(a));
        if (r.contains_bot() && r.kind() != Concept::Kind::Bot)
            throw DialectError("bot may only appear as the whole right-hand side: " + to_string(a));
        return;
    }
    // DL-Lite_R
    if (a.kind == Axiom::Kind::RoleIncl) return;
    const Concept& l = a.lhs_concept;
    Concept r = a.rhs_concept;
    if (!l.is_dllite_basic())
        throw DialectError("dl-lite lhs must be a name or exists R.top: " + to_string(a));
    bool negated = r.kind() == Concept::Kind::Not;
    const Concept& base = negated ? r.inner() : r;
    if (base.kind() == Concept::Kind::Bot) return;  // B sub bot is accepted as a negative inclusion
    if (!base.is_dllite_basic())
        throw DialectError("dl-lite rhs must be a (possibly negated) name or exists R.top: " + to_string(a));
}

// ---------------------------------------------------------------- Assertion

Assertion Assertion::concept(std::string concept_name, std::string individual) {
    Assertion a;
    a.kind = Kind::Concept;
    a.predicate = std::move(concept_name);
    a.subject = std::move(individual);
    return a;
}

Assertion Assertion::role(const Role& r, std::string subject, std::string object) {
    Assertion a;
    a.kind = Kind::Role;
    a.predicate = r.name;
    a.inverted = r.inverted;
    a.subject = std::move(subject);
    a.object = std::move(object);
    return a.normalized();
}

Assertion Assertion::normalized() const {
    if (kind == Kind::Role && inverted) {
        Assertion a = *this;
        a.inverted = false;
        std::swap(a.subject, a.object);
        return a;
    }
    return *this;
}

std::vector<std::string> Assertion::individuals() const {
    if (kind == Kind::Concept) return {subject};
    return {subject, object};
}

int Assertion::compare(const Assertion& other) const {
    auto self = normalized();
    auto that = other.normalized();
    auto lhs = std::tie(self.kind, self.predicate, self.subject, self.object);
    auto rhs = std::tie(that.kind, that.predicate, that.subject, that.object);
    return lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
}

std::string to_string(const Assertion& a) {
    Assertion n = a.normalized();
    if (n.kind == Assertion::Kind::Concept) return n.predicate + "(" + n.subject + ")";
    return n.predicate + "(" + n.subject + "," + n.object + ")";
}

Assertion normalize_assertion(const Assertion& a) { return a.normalized(); }

// ---------------------------------------------------------------- ABox

ABox::ABox(std::initializer_list<Assertion> init) {
    for (const auto& a : init) insert(a);
}

void ABox::insert(const Assertion& a) { assertions_.insert(a.normalized()); }

void ABox::insert_all(const ABox& other) {
    for (const auto& a : other) assertions_.insert(a);
}

void ABox::erase(const Assertion& a) { assertions_.erase(a.normalized()); }

bool ABox::contains(const Assertion& a) const { return assertions_.count(a.normalized()) > 0; }

std::set<std::string> ABox::individuals() const {
    std::set<std::string> out;
    for (const auto& a : assertions_)
        for (const auto& i : a.individuals()) out.insert(i);
    return out;
}

std::vector<ABox> connected_components(const ABox& a) {
    std::map<std::string, std::string> parent;
    std::function<std::string(const std::string&)> find = [&](const std::string& x) -> std::string {
        auto it = parent.find(x);
        if (it == parent.end() || it->second == x) return x;
        std::string root = find(it->second);
        parent[x] = root;
        return root;
    };
    auto unite = [&](const std::string& x, const std::string& y) {
        std::string rx = find(x), ry = find(y);
        if (rx != ry) parent[std::max(rx, ry)] = std::min(rx, ry);
    };
    for (const auto& as : a) {
        auto inds = as.individuals();
        parent.emplace(inds.front(), inds.front());
        for (std::size_t i = 1; i < inds.size(); ++i) {
            parent.emplace(inds[i], inds[i]);
            unite(inds.front(), inds[i]);
        }
    }
    std::map<std::string, ABox> groups;  // keyed by smallest individual, hence sorted
    for (const auto& as : a) groups[find(as.individuals().front())].insert(as);
    std::vector<ABox> out;
    out.reserve(groups.size());
    for (auto& [root, box] : groups) out.push_back(std::move(box));
    return out;
}

namespace {

struct HomSearch {
    const std::vector<Assertion>& source_facts;
    const ABox& target;
    std::vector<std::string> vars;  // source individuals in deterministic order
    std::vector<std::string> candidates;
    Homomorphism assignment;

    bool consistent_so_far() const {
        for (const auto& f : source_facts) {
            bool all_bound = true;
            Assertion image = f;
            auto map_term = [&](std::string& t) {
                auto it = assignment.find(t);
                if (it == assignment.end()) {
                    all_bound = false;
                    return;
                }
                t = it->second;
            };
            map_term(image.subject);
            if (f.is_role()) map_term(image.object);
            if (all_bound && !target.contains(image)) return false;
        }
        return true;
    }

    bool search(std::size_t idx) {
        if (idx == vars.size()) return consistent_so_far();
        for (const auto& cand : candidates) {
            assignment[vars[idx]] = cand;
            if (consistent_so_far() && search(idx + 1)) return true;
        }
        assignment.erase(vars[idx]);
        return false;
    }
};

}  // namespace

std::optional<Homomorphism> find_c_homomorphism(const ABox& source, const ABox& target,
                                                const std::set<std::string>& fixed) {
    std::vector<Assertion> facts(source.begin(), source.end());
    Homomorphism assignment;
    std::vector<std::string> vars;
    for (const auto& ind : source.individuals()) {
        if (fixed.count(ind))
            assignment[ind] = ind;
        else
            vars.push_back(ind);
    }
    auto targets = target.individuals();
    HomSearch hs{facts, target, std::move(vars),
                 std::vector<std::string>(targets.begin(), targets.end()), std::move(assignment)};
    if (!hs.consistent_so_far()) return std::nullopt;
    if (!hs.search(0)) return std::nullopt;
    return hs.assignment;
}

ABox apply_homomorphism(const ABox& a, const Homomorphism& h) {
    ABox out;
    auto image = [&](const std::string& x) {
        auto it = h.find(x);
        if (it == h.end()) throw Error("homomorphism is missing a mapping for individual '" + x + "'");
        return it->second;
    };
    for (const auto& as : a) {
        Assertion b = as;
        b.subject = image(b.subject);
        if (b.is_role()) b.object = image(b.object);
        out.insert(b);
    }
    return out;
}

// ---------------------------------------------------------------- Queries

CQ CQ::of(std::vector<QueryAtom> atoms) {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    return CQ{std::move(atoms)};
}

std::set<std::string> CQ::variables() const {
    std::set<std::string> out;
    for (const auto& at : atoms)
        for (const auto& t : at.args)
            if (t.is_variable) out.insert(t.name);
    return out;
}

std::set<std::string> CQ::constants() const {
    std::set<std::string> out;
    for (const auto& at : atoms)
        for (const auto& t : at.args)
            if (!t.is_variable) out.insert(t.name);
    return out;
}

std::vector<CQ> CQ::connected_components() const {
    // Atoms are connected when they share a term; constants connect too
    // (R(x,c), S(c,y) forms a single component).
    std::vector<int> comp(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) comp[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    std::map<Term, int> seen;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        for (const auto& t : atoms[i].args) {
            auto [it, fresh] = seen.emplace(t, static_cast<int>(i));
            if (!fresh) comp[find(static_cast<int>(i))] = find(it->second);
        }
    }
    std::map<int, std::vector<QueryAtom>> groups;
    for (std::size_t i = 0; i < atoms.size(); ++i) groups[find(static_cast<int>(i))].push_back(atoms[i]);
    std::vector<CQ> out;
    out.reserve(groups.size());
    for (auto& [root, ats] : groups) out.push_back(CQ::of(std::move(ats)));
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_string(const CQ& q) {
    std::ostringstream os;
    os << "q :-";
    bool first = true;
    for (const auto& at : q.atoms) {
        os << (first ? " " : ", ") << at.predicate << "(";
        for (std::size_t i = 0; i < at.args.size(); ++i) {
            if (i) os << ",";
            os << (at.args[i].is_variable ? "?" : "") << at.args[i].name;
        }
        os << ")";
        first = false;
    }
    os << ".";
    return os.str();
}

BooleanQuery BooleanQuery::ucq(std::vector<CQ> disjuncts) {
    BooleanQuery q;
    q.kind = Kind::Ucq;
    q.disjuncts = std::move(disjuncts);
    return q;
}

BooleanQuery BooleanQuery::reach(std::string role, std::string source, std::string target) {
    BooleanQuery q;
    q.kind = Kind::Reach;
    q.reach_role = std::move(role);
    q.reach_source = std::move(source);
    q.reach_target = std::move(target);
    return q;
}

BooleanQuery BooleanQuery::axiom_goal(Axiom a) {
    BooleanQuery q;
    q.kind = Kind::AxiomGoal;
    q.goal = std::move(a);
    return q;
}

std::set<std::string> BooleanQuery::constants() const {
    std::set<std::string> out;
    if (kind == Kind::Ucq) {
        for (const auto& d : disjuncts)
            for (const auto& c : d.constants()) out.insert(c);
    } else if (kind == Kind::Reach) {
        out.insert(reach_source);
        out.insert(reach_target);
    }
    return out;
}

std::string to_string(const BooleanQuery& q) {
    switch (q.kind) {
        case BooleanQuery::Kind::Ucq: {
            std::string s;
            for (const auto& d : q.disjuncts) {
                if (!s.empty()) s += " ";
                s += to_string(d);
            }
            return s.empty() ? "q :- ." : s;
        }
        case BooleanQuery::Kind::Reach:
            return "reach(" + q.reach_role + ", " + q.reach_source + ", " + q.reach_target + ").";
        case BooleanQuery::Kind::AxiomGoal:
            return "axiom " + to_string(*q.goal) + ".";
    }
    return "";
}

// ---------------------------------------------------------------- PartitionedKB

ABox PartitionedKB::full_abox() const {
    ABox all = abox_exo;
    all.insert_all(abox_endo);
    return all;
}

std::vector<Axiom> PartitionedKB::full_tbox() const {
    std::vector<Axiom> all = tbox_exo;
    all.insert(all.end(), tbox_endo.begin(), tbox_endo.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

void PartitionedKB::validate() const {
    for (const auto& a : abox_endo)
        if (abox_exo.contains(a))
            throw Error("assertion present in both endogenous and exogenous ABox: " + to_string(a));
    for (const auto& t : tbox_endo)
        if (std::binary_search(tbox_exo.begin(), tbox_exo.end(), t))
            throw Error("axiom present in both endogenous and exogenous TBox: " + to_string(t));
    for (const auto& t : tbox_endo) check_axiom_dialect(t, dialect);
    for (const auto& t : tbox_exo) check_axiom_dialect(t, dialect);
}

}  // namespace shapql

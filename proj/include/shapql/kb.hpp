#ifndef SHAPQL_KB_HPP
#define SHAPQL_KB_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace shapql {

enum class Dialect { ElhiBot, DlLite };

std::string to_string(Dialect d);

// A role name with an optional inversion flag. Double inversion is never
// stored; inverse() just flips the flag.
struct Role {
    std::string name;
    bool inverted = false;

    Role inverse() const { return Role{name, !inverted}; }
    auto operator<=>(const Role&) const = default;
};

std::string to_string(const Role& r);

// Concept expression tree for ELHI-bot / DL-Lite_R. Immutable value type;
// children are shared.
class Concept {
  public:
    enum class Kind { Top, Bot, Name, And, Exists, Not };

    static Concept top();
    static Concept bot();
    static Concept name(std::string n);
    static Concept conj(Concept lhs, Concept rhs);
    static Concept exists(Role r, Concept filler);
    static Concept negation(Concept inner);

    Kind kind() const { return kind_; }
    const std::string& concept_name() const { return name_; }
    const Role& role() const { return role_; }
    const Concept& left() const { return *children_[0]; }
    const Concept& right() const { return *children_[1]; }
    const Concept& filler() const { return *children_[0]; }
    const Concept& inner() const { return *children_[0]; }

    bool contains_bot() const;
    bool contains_not() const;
    // true for the DL-Lite basic shapes B := A | exists R.top
    bool is_dllite_basic() const;

    int compare(const Concept& other) const;
    bool operator==(const Concept& o) const { return compare(o) == 0; }
    bool operator<(const Concept& o) const { return compare(o) < 0; }

  private:
    Concept(Kind k, std::string n, Role r, std::vector<std::shared_ptr<const Concept>> ch)
        : kind_(k), name_(std::move(n)), role_(std::move(r)), children_(std::move(ch)) {}

    Kind kind_ = Kind::Top;
    std::string name_;
    Role role_;
    std::vector<std::shared_ptr<const Concept>> children_;
};

std::string to_string(const Concept& c);

struct Axiom {
    enum class Kind { ConceptIncl, RoleIncl };

    Kind kind = Kind::ConceptIncl;
    Concept lhs_concept = Concept::top();
    Concept rhs_concept = Concept::top();
    Role lhs_role;
    Role rhs_role;
    bool negated_rhs = false;  // DL-Lite only, role inclusions r sub not s

    static Axiom concept_incl(Concept lhs, Concept rhs);
    static Axiom role_incl(Role lhs, Role rhs, bool negated = false);

    int compare(const Axiom& other) const;
    bool operator==(const Axiom& o) const { return compare(o) == 0; }
    bool operator<(const Axiom& o) const { return compare(o) < 0; }
};

std::string to_string(const Axiom& a);

// Throws DialectError if the axiom is not well-formed in the given dialect.
void check_axiom_dialect(const Axiom& a, Dialect d);

// ABox fact. Role assertions may be built with an inverted role; they are
// normalized to the forward form on construction of an ABox (or explicitly
// via normalize_assertion).
struct Assertion {
    enum class Kind { Concept, Role };

    Kind kind = Kind::Concept;
    std::string predicate;  // concept name or role name
    std::string subject;
    std::string object;        // empty for concept assertions
    bool inverted = false;     // pre-normalization flag on role assertions

    static Assertion concept(std::string concept_name, std::string individual);
    static Assertion role(const Role& r, std::string subject, std::string object);

    bool is_role() const { return kind == Kind::Role; }
    Assertion normalized() const;
    std::vector<std::string> individuals() const;

    int compare(const Assertion& other) const;
    bool operator==(const Assertion& o) const { return compare(o) == 0; }
    bool operator<(const Assertion& o) const { return compare(o) < 0; }
};

std::string to_string(const Assertion& a);

Assertion normalize_assertion(const Assertion& a);

// Finite set of assertions with set semantics; role assertions are kept in
// forward-normalized form. Iteration order is the lexicographic assertion
// order, so every traversal is deterministic.
class ABox {
  public:
    ABox() = default;
    explicit ABox(std::initializer_list<Assertion> init);

    void insert(const Assertion& a);
    void insert_all(const ABox& other);
    void erase(const Assertion& a);
    bool contains(const Assertion& a) const;

    std::size_t size() const { return assertions_.size(); }
    bool empty() const { return assertions_.empty(); }
    std::set<std::string> individuals() const;

    auto begin() const { return assertions_.begin(); }
    auto end() const { return assertions_.end(); }

    bool operator==(const ABox&) const = default;
    bool operator<(const ABox& o) const { return assertions_ < o.assertions_; }

  private:
    std::set<Assertion> assertions_;
};

// Partition of the assertion set by the undirected incidence graph over
// individuals; ordered by smallest member individual.
std::vector<ABox> connected_components(const ABox& a);

using Homomorphism = std::map<std::string, std::string>;

// Backtracking search for a homomorphism h from source to target with
// h(c) = c for all c in fixed. Deterministic variable order.
std::optional<Homomorphism> find_c_homomorphism(const ABox& source, const ABox& target,
                                                const std::set<std::string>& fixed);

// Image ABox under h; throws Error if h misses an individual of a.
ABox apply_homomorphism(const ABox& a, const Homomorphism& h);

// Query terms and Boolean conjunctive queries.
struct Term {
    bool is_variable = false;
    std::string name;

    static Term var(std::string n) { return Term{true, std::move(n)}; }
    static Term constant(std::string n) { return Term{false, std::move(n)}; }
    auto operator<=>(const Term&) const = default;
};

struct QueryAtom {
    std::string predicate;
    std::vector<Term> args;  // arity 1 (concept) or 2 (role)
    auto operator<=>(const QueryAtom&) const = default;
};

struct CQ {
    std::vector<QueryAtom> atoms;  // kept sorted and deduplicated

    static CQ of(std::vector<QueryAtom> atoms);

    std::set<std::string> variables() const;
    std::set<std::string> constants() const;
    // Maximal subqueries connected through shared terms (constants included).
    std::vector<CQ> connected_components() const;

    auto operator<=>(const CQ&) const = default;
};

std::string to_string(const CQ& q);

// The three score-oracle query kinds: UCQ entailment, directed reachability
// between two constants, and TBox-axiom entailment.
struct BooleanQuery {
    enum class Kind { Ucq, Reach, AxiomGoal };

    Kind kind = Kind::Ucq;
    std::vector<CQ> disjuncts;
    std::string reach_role, reach_source, reach_target;
    std::optional<Axiom> goal;

    static BooleanQuery ucq(std::vector<CQ> disjuncts);
    static BooleanQuery reach(std::string role, std::string source, std::string target);
    static BooleanQuery axiom_goal(Axiom a);

    std::set<std::string> constants() const;
};

std::string to_string(const BooleanQuery& q);

// KB with endogenous/exogenous split; the endogenous elements are the game
// players. Parts are disjoint within ABox and TBox.
struct PartitionedKB {
    Dialect dialect = Dialect::ElhiBot;
    ABox abox_endo;
    ABox abox_exo;
    std::vector<Axiom> tbox_endo;  // sorted, unique
    std::vector<Axiom> tbox_exo;

    ABox full_abox() const;
    std::vector<Axiom> full_tbox() const;
    void validate() const;  // throws Error on endo/exo overlap or dialect violation
};

}  // namespace shapql

#endif

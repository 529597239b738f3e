#ifndef SHAPQL_REASONER_HPP
#define SHAPQL_REASONER_HPP

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shapql/kb.hpp"

namespace shapql {

enum class Verdict { Yes, No, Unknown };
enum class Consistency { Consistent, Inconsistent, Unknown };

std::string to_string(Verdict v);
std::string to_string(Consistency c);

// TBox in normal form. Concept ids: kTop = 0, names from 1; fresh names
// introduced by the structural transformation are recorded in fresh_names.
// Rule forms: A1 n A2 sub B | exists R.A sub B | A sub exists R.B | A sub B |
// A sub bot | role inclusions (kept as a saturated signed-role closure).
class NormalizedTBox {
  public:
    static constexpr int kTop = 0;

    struct SignedRole {
        int role = 0;
        bool inverted = false;
        auto operator<=>(const SignedRole&) const = default;
    };
    struct SubRule {
        int a, b;
        auto operator<=>(const SubRule&) const = default;
    };
    struct ConjRule {
        int a1, a2, b;  // a1 <= a2
        auto operator<=>(const ConjRule&) const = default;
    };
    struct ExistsLhsRule {
        SignedRole r;
        int a, b;  // exists r.a sub b
        auto operator<=>(const ExistsLhsRule&) const = default;
    };
    struct ExistsRhsRule {
        int a;
        SignedRole r;
        int b;  // a sub exists r.b
        auto operator<=>(const ExistsRhsRule&) const = default;
    };

    std::vector<SubRule> subs;
    std::vector<ConjRule> conjs;
    std::vector<ExistsLhsRule> exists_lhs;
    std::vector<ExistsRhsRule> exists_rhs;
    std::vector<int> falsum;                                  // A sub bot
    std::map<SignedRole, std::set<SignedRole>> role_closure;  // reflexive-transitive, inverse-closed
    std::vector<std::pair<SignedRole, SignedRole>> role_disjoint;

    std::vector<std::string> concept_names;  // index 0 is "top"
    std::vector<std::string> role_names;
    std::map<std::string, Concept> fresh_names;

    int concept_id(const std::string& name) const;  // -1 when absent
    int role_id(const std::string& name) const;
    bool has_clash_rules() const { return !falsum.empty() || !role_disjoint.empty(); }
    const std::set<SignedRole>& supers(const SignedRole& r) const;

    // Internal interning helpers (used by the normalizer and the chase).
    int intern_concept(const std::string& name);
    int intern_role(const std::string& name);

  private:
    std::map<std::string, int> concept_ids_;
    std::map<std::string, int> role_ids_;
};

// Conservative structural transformation into the normal forms above.
// Validates against the dialect when one is given, otherwise accepts any
// well-formed mix (negation is always translated through bot).
NormalizedTBox normalize_tbox(const std::vector<Axiom>& axioms,
                              std::optional<Dialect> dialect = std::nullopt);

// Result of the bounded restricted chase. Elements 0..k are the ABox
// individuals (sorted), followed by generated nulls; nulls form trees whose
// roots hang off depth-0 elements.
struct CanonicalStructure {
    std::vector<std::string> element_names;
    std::vector<int> depth;
    std::vector<int> parent;  // -1 for depth-0 elements
    std::map<std::string, int> individual_ids;
    std::vector<std::set<int>> labels;       // concept ids, top implicit
    std::set<std::array<int, 3>> edges;      // {role, src, dst}
    std::vector<std::string> concept_names;  // copied from the normalized TBox
    std::vector<std::string> role_names;
    bool saturated = true;
    bool inconsistent = false;
    int depth_limit = 0;

    bool has_label(int element, int concept) const;
    bool has_edge(int role, int src, int dst) const { return edges.count({role, src, dst}) > 0; }
};

CanonicalStructure chase(const ABox& abox, const NormalizedTBox& tbox, int depth_limit);

// Pragmatic default bound: number of query atoms plus number of concept
// names in the normalized TBox.
int default_depth_limit(const NormalizedTBox& tbox, const BooleanQuery& q);

Consistency is_consistent(const ABox& abox, const std::vector<Axiom>& tbox, int depth_limit = -1);

// Entailment oracle. `yes` and `no` are definitive; `unknown` is returned
// when the chase hit the depth cutoff and the query was not found.
Verdict entails(const ABox& abox, const std::vector<Axiom>& tbox, const BooleanQuery& q,
                int depth_limit = -1);

// A finite interpretation, used as a certificate of non-entailment.
struct FiniteModel {
    std::vector<std::string> element_names;  // individuals first, then anonymous
    std::map<std::string, int> individual_ids;
    std::vector<std::set<std::string>> labels;              // concept names
    std::set<std::tuple<std::string, int, int>> edges;      // (role name, src, dst)

    bool satisfies(const ABox& abox) const;
    bool satisfies(const std::vector<Axiom>& tbox) const;
    bool satisfies_ucq(const BooleanQuery& q) const;
    std::set<int> interpret(const Concept& c) const;
};

// Exhaustive search for a model of (abox, tbox) with at most max_domain
// elements that falsifies the UCQ q. A returned model certifies
// non-entailment; absence certifies nothing.
std::optional<FiniteModel> find_countermodel(const ABox& abox, const std::vector<Axiom>& tbox,
                                             const BooleanQuery& q, int max_domain);

// C-homomorphism (C = named individuals) from the canonical structure into a
// finite model; used to test chase canonicity.
bool embeds_into(const CanonicalStructure& cs, const FiniteModel& m);

}  // namespace shapql

#endif

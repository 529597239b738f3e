#ifndef SHAPQL_PQE_HPP
#define SHAPQL_PQE_HPP

#include <map>
#include <string>
#include <vector>

#include "shapql/kb.hpp"
#include "shapql/rational.hpp"
#include "shapql/textio.hpp"

namespace shapql {

// Tuple-independent probabilistic ABox: every fact carries an exact rational
// probability in (0,1].
struct ProbabilisticABox {
    std::map<Assertion, Rational> facts;

    static ProbabilisticABox from_document(const KbDocument& doc);  // missing prob = 1
    ABox certain() const;  // facts with probability exactly 1
    std::vector<std::pair<Assertion, Rational>> uncertain() const;
};

enum class Regime { Half, HalfOne, SingleProper, Any };

std::optional<Regime> parse_regime(const std::string& name);
bool validate_regime(const ProbabilisticABox& d, Regime regime);

// Exact possible-worlds evaluation: sum over subsets of the uncertain facts,
// enumerated in Gray-code order with incremental weight updates.
Rational pqe_exact(const ProbabilisticABox& d, const std::vector<Axiom>& tbox,
                   const BooleanQuery& q, int depth_limit = -1, int uncertain_limit = 20);

// T* / q* transformation: bot is replaced by a fresh concept name and the
// query gains the disjunct "exists x. A_bot(x)".
struct QstarTransform {
    std::vector<Axiom> tbox;
    BooleanQuery query;
    std::string bot_name;
};
QstarTransform qstar_transform(const std::vector<Axiom>& tbox, const BooleanQuery& ucq,
                               const std::string& bot_name = "A_bot");

// Checks (A,T) |= q  iff  (A,T*) |= q* on one ABox not mentioning the fresh name.
bool verify_qstar_equivalence(const ABox& abox, const std::vector<Axiom>& tbox,
                              const BooleanQuery& q, int depth_limit = -1);

// The three quantities related by the probability identity in the Q*
// construction, each computed independently by brute force:
//   pr_qstar  = Pr(D |= (T*, q*))
//   pr_bot    = Pr(some A_bot fact present) = 1 - prod (1 - pi)
//   pr_q      = Pr(D |= (T, q))
// The engine exposes them as data; the tested identity is
// pr_qstar = pr_bot + (1 - pr_bot) * pr_q.
struct QstarIdentity {
    Rational pr_qstar;
    Rational pr_bot;
    Rational pr_q;
};
QstarIdentity qstar_identity(const ProbabilisticABox& d, const std::vector<Axiom>& tbox,
                             const BooleanQuery& q, const std::string& bot_name = "A_bot",
                             int depth_limit = -1);

}  // namespace shapql

#endif

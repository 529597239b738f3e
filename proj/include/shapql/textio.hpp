#ifndef SHAPQL_TEXTIO_HPP
#define SHAPQL_TEXTIO_HPP

#include <map>
#include <string>

#include "shapql/kb.hpp"
#include "shapql/rational.hpp"

namespace shapql {

// Parsed .kbq document: dialect header, endo/exo TBox and ABox blocks, and
// optional per-assertion probabilities (exact fractions in (0,1]).
struct KbDocument {
    Dialect dialect = Dialect::ElhiBot;
    std::vector<Axiom> tbox_endo;
    std::vector<Axiom> tbox_exo;
    ABox abox_endo;
    ABox abox_exo;
    std::map<Assertion, Rational> probabilities;

    PartitionedKB to_partitioned_kb() const;

    bool operator==(const KbDocument&) const = default;
};

KbDocument parse_kb(const std::string& text);
std::string serialize(const KbDocument& doc);

BooleanQuery parse_query(const std::string& text);

KbDocument load_kb_file(const std::string& path);
BooleanQuery load_query_file(const std::string& path);

}  // namespace shapql

#endif

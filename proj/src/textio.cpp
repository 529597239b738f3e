#include "shapql/textio.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "shapql/errors.hpp"

namespace shapql {

namespace {

// Character-level scanner shared by the KB and query grammars. Tracks
// line/column for error reporting; '#' starts a comment until end of line.
class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    bool eof() {
        skip_ws();
        return pos_ >= text_.size();
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool try_consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            advance();
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!try_consume(c)) fail(std::string("expected '") + c + "'");
    }

    bool peek_word(const std::string& w) {
        skip_ws();
        if (text_.compare(pos_, w.size(), w) != 0) return false;
        std::size_t after = pos_ + w.size();
        if (after < text_.size() && is_ident_char(text_[after])) return false;
        return true;
    }

    bool try_word(const std::string& w) {
        if (!peek_word(w)) return false;
        for (std::size_t i = 0; i < w.size(); ++i) advance();
        return true;
    }

    void expect_word(const std::string& w) {
        if (!try_word(w)) fail("expected '" + w + "'");
    }

    std::string identifier() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) advance();
        if (pos_ == start) fail("expected identifier");
        return text_.substr(start, pos_ - start);
    }

    std::string number() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
        if (pos_ == start) fail("expected number");
        return text_.substr(start, pos_ - start);
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line_, col_); }

    static bool is_ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '~' || c == ':';
    }

  private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

bool starts_upper(const std::string& s) {
    return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

// role := name | inv(name)
Role parse_role(Lexer& lx) {
    std::string id = lx.identifier();
    if (id == "inv") {
        lx.expect('(');
        std::string name = lx.identifier();
        lx.expect(')');
        if (starts_upper(name)) lx.fail("role names must start lowercase: " + name);
        return Role{name, true};
    }
    if (starts_upper(id)) lx.fail("role names must start lowercase: " + id);
    return Role{id, false};
}

Concept parse_concept(Lexer& lx);

Concept parse_concept_primary(Lexer& lx) {
    if (lx.try_consume('(')) {
        Concept c = parse_concept(lx);
        lx.expect(')');
        return c;
    }
    if (lx.try_word("top")) return Concept::top();
    if (lx.try_word("bot")) return Concept::bot();
    if (lx.try_word("not")) return Concept::negation(parse_concept_primary(lx));
    if (lx.try_word("exists")) {
        Role r = parse_role(lx);
        lx.expect('.');
        return Concept::exists(r, parse_concept_primary(lx));
    }
    std::string id = lx.identifier();
    if (!starts_upper(id)) lx.fail("concept names must start uppercase: " + id);
    return Concept::name(id);
}

Concept parse_concept(Lexer& lx) {
    Concept c = parse_concept_primary(lx);
    while (lx.try_word("and")) c = Concept::conj(std::move(c), parse_concept_primary(lx));
    return c;
}

// One tbox statement: `C sub D.` or a role inclusion.
Axiom parse_axiom(Lexer& lx, std::optional<Dialect> dialect) {
    // Role inclusions start with a lowercase identifier; concept inclusions
    // with anything else. Peek by position of the first identifier char.
    char c = lx.peek();
    if (std::islower(static_cast<unsigned char>(c)) && !lx.peek_word("top") && !lx.peek_word("bot") &&
        !lx.peek_word("exists") && !lx.peek_word("not")) {
        Role lhs = parse_role(lx);
        lx.expect_word("sub");
        bool negated = lx.try_word("not");
        Role rhs = parse_role(lx);
        lx.expect('.');
        Axiom a = Axiom::role_incl(lhs, rhs, negated);
        if (dialect) check_axiom_dialect(a, *dialect);
        return a;
    }
    Concept lhs = parse_concept(lx);
    lx.expect_word("sub");
    Concept rhs = parse_concept(lx);
    lx.expect('.');
    Axiom a = Axiom::concept_incl(std::move(lhs), std::move(rhs));
    if (dialect) check_axiom_dialect(a, *dialect);
    return a;
}

// One abox statement: `A(c).` or `r(c,d).`, optional `@ p/q` suffix.
std::pair<Assertion, std::optional<Rational>> parse_assertion(Lexer& lx) {
    std::string pred = lx.identifier();
    lx.expect('(');
    std::string first = lx.identifier();
    Assertion a;
    if (lx.try_consume(',')) {
        std::string second = lx.identifier();
        if (starts_upper(pred)) lx.fail("role names must start lowercase: " + pred);
        a = Assertion::role(Role{pred, false}, first, second);
    } else {
        if (!starts_upper(pred)) lx.fail("concept names must start uppercase: " + pred);
        a = Assertion::concept(pred, first);
    }
    lx.expect(')');
    std::optional<Rational> prob;
    if (lx.try_consume('@')) {
        std::string num = lx.number();
        std::string frac = num;
        if (lx.try_consume('/')) frac += "/" + lx.number();
        auto p = parse_rational(frac);
        if (!p || *p <= 0 || *p > 1) lx.fail("probability must be a rational in (0,1]: " + frac);
        prob = *p;
    }
    lx.expect('.');
    return {a, prob};
}

}  // namespace

PartitionedKB KbDocument::to_partitioned_kb() const {
    PartitionedKB pk;
    pk.dialect = dialect;
    pk.abox_endo = abox_endo;
    pk.abox_exo = abox_exo;
    pk.tbox_endo = tbox_endo;
    pk.tbox_exo = tbox_exo;
    pk.validate();
    return pk;
}

KbDocument parse_kb(const std::string& text) {
    Lexer lx(text);
    KbDocument doc;
    lx.expect_word("dialect");
    if (lx.try_word("elhi-bot"))
        doc.dialect = Dialect::ElhiBot;
    else if (lx.try_word("dl-lite"))
        doc.dialect = Dialect::DlLite;
    else
        lx.fail("expected dialect 'elhi-bot' or 'dl-lite'");
    lx.expect('.');

    while (!lx.eof()) {
        bool is_tbox;
        if (lx.try_word("tbox"))
            is_tbox = true;
        else if (lx.try_word("abox"))
            is_tbox = false;
        else
            lx.fail("expected 'tbox' or 'abox' block");
        bool endo;
        if (lx.try_word("endo"))
            endo = true;
        else if (lx.try_word("exo"))
            endo = false;
        else
            lx.fail("expected 'endo' or 'exo'");
        lx.expect('{');
        while (!lx.try_consume('}')) {
            if (lx.eof()) lx.fail("unterminated block");
            if (is_tbox) {
                Axiom a = parse_axiom(lx, doc.dialect);
                auto& dst = endo ? doc.tbox_endo : doc.tbox_exo;
                dst.push_back(a);
            } else {
                auto [a, prob] = parse_assertion(lx);
                if (doc.abox_endo.contains(a) || doc.abox_exo.contains(a))
                    lx.fail("duplicate assertion across blocks: " + to_string(a));
                (endo ? doc.abox_endo : doc.abox_exo).insert(a);
                if (prob) doc.probabilities[a.normalized()] = *prob;
            }
        }
    }
    for (auto* tb : {&doc.tbox_endo, &doc.tbox_exo}) {
        std::sort(tb->begin(), tb->end());
        tb->erase(std::unique(tb->begin(), tb->end()), tb->end());
    }
    for (const auto& t : doc.tbox_endo)
        if (std::binary_search(doc.tbox_exo.begin(), doc.tbox_exo.end(), t))
            throw ParseError("axiom present in both endo and exo tbox: " + to_string(t), 1, 1);
    return doc;
}

std::string serialize(const KbDocument& doc) {
    std::ostringstream os;
    os << "dialect " << to_string(doc.dialect) << ".\n\n";
    auto tbox_block = [&](const char* tag, const std::vector<Axiom>& axs) {
        os << "tbox " << tag << " {\n";
        for (const auto& a : axs) os << "  " << to_string(a) << ".\n";
        os << "}\n\n";
    };
    auto abox_block = [&](const char* tag, const ABox& box) {
        os << "abox " << tag << " {\n";
        for (const auto& a : box) {
            os << "  " << to_string(a);
            if (auto it = doc.probabilities.find(a); it != doc.probabilities.end())
                os << " @ " << it->second.get_num().get_str() << "/" << it->second.get_den().get_str();
            os << ".\n";
        }
        os << "}\n\n";
    };
    tbox_block("endo", doc.tbox_endo);
    tbox_block("exo", doc.tbox_exo);
    abox_block("endo", doc.abox_endo);
    abox_block("exo", doc.abox_exo);
    return os.str();
}

BooleanQuery parse_query(const std::string& text) {
    Lexer lx(text);
    std::vector<CQ> disjuncts;
    std::optional<BooleanQuery> other;
    while (!lx.eof()) {
        if (lx.try_word("reach")) {
            lx.expect('(');
            std::string role = lx.identifier();
            lx.expect(',');
            std::string src = lx.identifier();
            lx.expect(',');
            std::string dst = lx.identifier();
            lx.expect(')');
            lx.expect('.');
            if (other || !disjuncts.empty()) lx.fail("reach cannot be combined with other query forms");
            other = BooleanQuery::reach(role, src, dst);
            continue;
        }
        if (lx.try_word("axiom")) {
            Axiom a = parse_axiom(lx, std::nullopt);  // goals are not restricted to a dialect
            if (other || !disjuncts.empty()) lx.fail("axiom goal cannot be combined with other query forms");
            other = BooleanQuery::axiom_goal(a);
            continue;
        }
        if (!lx.try_word("q")) lx.fail("expected 'q :-', 'reach(...)' or 'axiom ...'");
        if (other) lx.fail("cannot mix query forms");
        lx.expect(':');
        lx.expect('-');
        std::vector<QueryAtom> atoms;
        if (!lx.try_consume('.')) {
            do {
                std::string pred = lx.identifier();
                lx.expect('(');
                auto term = [&]() -> Term {
                    if (lx.try_consume('?')) return Term::var(lx.identifier());
                    std::string id = lx.identifier();
                    if (starts_upper(id)) lx.fail("individuals must start lowercase: " + id);
                    return Term::constant(id);
                };
                QueryAtom at;
                at.predicate = pred;
                at.args.push_back(term());
                if (lx.try_consume(',')) at.args.push_back(term());
                lx.expect(')');
                if (starts_upper(pred) && at.args.size() != 1)
                    lx.fail("concept atoms are unary: " + pred);
                if (!starts_upper(pred) && at.args.size() != 2)
                    lx.fail("role atoms are binary: " + pred);
                atoms.push_back(std::move(at));
            } while (lx.try_consume(','));
            lx.expect('.');
        }
        disjuncts.push_back(CQ::of(std::move(atoms)));
    }
    if (other) return *other;
    if (disjuncts.empty()) throw ParseError("empty query", 1, 1);
    return BooleanQuery::ucq(std::move(disjuncts));
}

namespace {
std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path, 0, 0);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}
}  // namespace

KbDocument load_kb_file(const std::string& path) { return parse_kb(read_file(path)); }
BooleanQuery load_query_file(const std::string& path) { return parse_query(read_file(path)); }

}  // namespace shapql

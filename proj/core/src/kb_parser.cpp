#include "aluni/kb_parser.hpp"

#include <array>
#include <string_view>

#include "lexer.hpp"

namespace aluni {

namespace {

using detail::Lexer;
using detail::Token;

constexpr std::array<std::string_view, 13> kKeywords = {
    "concept", "role",    "NOT",  "AND", "OR",     "ALL", "ATLEAST",
    "ATMOST",  "EXACTLY", "SOME", "TOP", "BOTTOM", "INV"};

bool is_keyword(std::string_view s) {
  for (auto k : kKeywords)
    if (k == s) return true;
  return false;
}

/// Recursive-descent parser over the expr/term/factor grammar.
class KbParser {
public:
  KbParser(const std::string& text, KnowledgeBase& kb, bool autodeclare)
      : lex_(text), kb_(kb), autodeclare_(autodeclare) {}

  void parse_file() {
    while (!lex_.at_end()) {
      if (lex_.accept("concept")) {
        declare_symbol(/*is_role=*/false);
      } else if (lex_.accept("role")) {
        declare_symbol(/*is_role=*/true);
      } else {
        parse_assertion();
      }
    }
  }

  ConceptPtr parse_single_expr() {
    ConceptPtr c = parse_expr();
    if (!lex_.at_end()) lex_.fail("trailing input after expression");
    return c;
  }

private:
  void declare_symbol(bool is_role) {
    std::string name = lex_.expect_ident();
    if (is_keyword(name)) lex_.fail("reserved word used as name: " + name);
    if (is_role)
      kb_.add_role(name);
    else
      kb_.add_concept(name);
    lex_.expect(";");
  }

  void parse_assertion() {
    std::string lhs = lex_.expect_ident("concept name");
    require_concept(lhs);
    lex_.expect("<=");
    ConceptPtr rhs = parse_expr();
    lex_.expect(";");
    kb_.assertions.push_back({std::move(lhs), std::move(rhs)});
  }

  ConceptPtr parse_expr() {
    std::vector<ConceptPtr> terms{parse_term()};
    while (lex_.accept("OR")) terms.push_back(parse_term());
    return ConceptExpr::disj(std::move(terms));
  }

  ConceptPtr parse_term() {
    std::vector<ConceptPtr> factors{parse_factor()};
    while (lex_.accept("AND")) factors.push_back(parse_factor());
    return ConceptExpr::conj(std::move(factors));
  }

  ConceptPtr parse_factor() {
    if (lex_.accept("TOP")) return ConceptExpr::top();
    if (lex_.accept("BOTTOM")) return ConceptExpr::bottom();
    if (lex_.accept("NOT")) {
      std::string name = lex_.expect_ident("atomic concept after NOT");
      require_concept(name);
      return ConceptExpr::neg_atomic(std::move(name));
    }
    if (lex_.accept("ALL")) {
      RoleExpr role = parse_role();
      lex_.expect(".");
      return ConceptExpr::forall(std::move(role), parse_factor());
    }
    if (lex_.accept("ATLEAST")) {
      unsigned n = lex_.expect_number();
      return ConceptExpr::at_least(n, parse_role());
    }
    if (lex_.accept("ATMOST")) {
      unsigned n = lex_.expect_number();
      return ConceptExpr::at_most(n, parse_role());
    }
    if (lex_.accept("EXACTLY")) {
      unsigned n = lex_.expect_number();
      return ConceptExpr::exactly(n, parse_role());
    }
    if (lex_.accept("SOME")) return ConceptExpr::some(parse_role());
    if (lex_.accept("(")) {
      ConceptPtr inner = parse_expr();
      lex_.expect(")");
      return inner;
    }
    std::string name = lex_.expect_ident("concept expression");
    if (is_keyword(name)) lex_.fail("unexpected keyword '" + name + "'");
    require_concept(name);
    return ConceptExpr::atomic(std::move(name));
  }

  RoleExpr parse_role() {
    // Accepts P, INV P, and the parenthesized form (INV P).
    if (lex_.accept("(")) {
      lex_.expect("INV");
      std::string name = lex_.expect_ident("role name");
      lex_.expect(")");
      require_role(name);
      return RoleExpr(std::move(name), /*inverted=*/true);
    }
    bool inverted = lex_.accept("INV");
    std::string name = lex_.expect_ident("role name");
    require_role(name);
    return RoleExpr(std::move(name), inverted);
  }

  void require_concept(const std::string& name) {
    if (kb_.has_concept(name)) return;
    if (!autodeclare_) lex_.fail("undeclared concept '" + name + "'");
    kb_.add_concept(name);
  }

  void require_role(const std::string& name) {
    if (kb_.has_role(name)) return;
    if (!autodeclare_) lex_.fail("undeclared role '" + name + "'");
    kb_.add_role(name);
  }

  Lexer lex_;
  KnowledgeBase& kb_;
  bool autodeclare_;
};

}  // namespace

KnowledgeBase parse_kb(const std::string& text, bool autodeclare) {
  KnowledgeBase kb;
  KbParser(text, kb, autodeclare).parse_file();
  return kb;
}

ConceptPtr parse_concept_expr(const std::string& text,
                              const KnowledgeBase& signature) {
  KnowledgeBase scratch = signature;  // parser records nothing new
  return KbParser(text, scratch, /*autodeclare=*/false).parse_single_expr();
}

}  // namespace aluni

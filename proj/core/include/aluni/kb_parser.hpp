// ============================================================================
//  kb_parser.hpp -- textual .kb format reader
// ============================================================================
//
//  Grammar (ASCII, `#` line comments, newline-insensitive):
//
//    kb        ::= { declaration | assertion }
//    declaration ::= "concept" NAME ";" | "role" NAME ";"
//    assertion ::= NAME "<=" expr ";"
//    expr      ::= term { "OR" term }
//    term      ::= factor { "AND" factor }
//    factor    ::= "ALL" role "." factor | "ATLEAST" n role
//                | "ATMOST" n role | "EXACTLY" n role | "SOME" role
//                | "NOT" NAME | "TOP" | "BOTTOM" | "(" expr ")" | NAME
//    role      ::= NAME | "INV" NAME | "(" "INV" NAME ")"
//
//  AND binds tighter than OR; the body of ALL is a factor, so
//  "ALL P.A AND B" reads as (ALL P.A) AND B.
//
// ============================================================================

#pragma once

#include <string>

#include "aluni/kb.hpp"

namespace aluni {

/// Parses a whole knowledge base.  With `autodeclare` unset (the default),
/// every symbol must be declared before use and violations raise ParseError;
/// with it set, symbols are added to the signature on first use.
KnowledgeBase parse_kb(const std::string& text, bool autodeclare = false);

/// Parses a single concept expression (the `expr` production) against an
/// existing signature; undeclared symbols raise ParseError.
ConceptPtr parse_concept_expr(const std::string& text,
                              const KnowledgeBase& signature);

}  // namespace aluni

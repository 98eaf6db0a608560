// ============================================================================
//  diagnostics.hpp -- error types shared by every module of the library
// ============================================================================
//
//  All failures surface as exceptions derived from aluni::Error so callers
//  (notably the command-line driver) can distinguish "your input is bad"
//  from internal guard violations with a single catch clause.
//
// ============================================================================

#pragma once

#include <stdexcept>
#include <string>

namespace aluni {

// ── Base class ──────────────────────────────────────────────────────────────

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ── Concrete error categories ───────────────────────────────────────────────

/// Syntax error while reading one of the textual formats (.kb/.frm/.ers/.oos)
/// or a JSON payload.  Carries a 1-based source position when known.
class ParseError : public Error {
public:
  ParseError(const std::string& message, int line, int column)
      : Error(message + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  explicit ParseError(const std::string& message)
      : Error(message), line_(0), column_(0) {}

  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

/// A symbol is missing from (or clashes with) the ambient signature:
/// undeclared names, extensions for unknown atoms, goals over foreign
/// vocabulary, and similar mismatches.
class SignatureError : public Error {
public:
  explicit SignatureError(const std::string& message) : Error(message) {}
};

/// A guarded construction (e.g. the conflict-elimination copy machinery)
/// would exceed its configured resource bound.
class BlowupError : public Error {
public:
  explicit BlowupError(const std::string& message) : Error(message) {}
};

}  // namespace aluni

#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace utiliproc {

enum class Severity { Error, Warning };

// Stable diagnostic codes. Tests and downstream tooling match on these.
namespace codes {
inline constexpr const char* kParse = "PARSE_ERROR";
inline constexpr const char* kDuplicateDecl = "DUPLICATE_DECL";
inline constexpr const char* kUnknownName = "UNKNOWN_NAME";
inline constexpr const char* kReservedName = "RESERVED_NAME";
inline constexpr const char* kNoQueries = "NO_QUERIES";
inline constexpr const char* kMonoidLaw = "MONOID_LAW";
inline constexpr const char* kMuProducedInvalid = "MU_PRODUCED_INVALID";
inline constexpr const char* kMuSplitOverlap = "MU_SPLIT_OVERLAP";
inline constexpr const char* kMuHomomorphism = "MU_HOMOMORPHISM";
inline constexpr const char* kIllFormedTerm = "ILL_FORMED_TERM";
inline constexpr const char* kUnguardedRecursion = "UNGUARDED_RECURSION";
inline constexpr const char* kRespectsBisim = "RESPECTS_BISIM";
inline constexpr const char* kAccordanceC1 = "ACCORDANCE_C1";
inline constexpr const char* kAccordanceC2 = "ACCORDANCE_C2";
inline constexpr const char* kAccordanceC3 = "ACCORDANCE_C3";
inline constexpr const char* kAccordanceC4 = "ACCORDANCE_C4";
inline constexpr const char* kValuationNotClosed = "VALUATION_NOT_CLOSED";
inline constexpr const char* kQueryInvalid = "QUERY_INVALID";
}  // namespace codes

struct Diagnostic {
  Severity severity = Severity::Error;
  int line = 0;
  int col = 0;
  std::string code;
  std::string message;

  std::string str() const {
    std::string out = severity == Severity::Error ? "error" : "warning";
    out += " [" + code + "] ";
    if (line > 0) out += std::to_string(line) + ":" + std::to_string(col) + ": ";
    out += message;
    return out;
  }
};

struct Diagnostics {
  std::vector<Diagnostic> items;

  void error(int line, int col, std::string code, std::string message) {
    items.push_back({Severity::Error, line, col, std::move(code), std::move(message)});
  }
  void warning(int line, int col, std::string code, std::string message) {
    items.push_back({Severity::Warning, line, col, std::move(code), std::move(message)});
  }

  bool has_errors() const {
    return std::any_of(items.begin(), items.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
  }

  bool has_code(const std::string& code) const {
    return std::any_of(items.begin(), items.end(),
                       [&](const Diagnostic& d) { return d.code == code; });
  }

  // Deterministic report order: by location, then code.
  void sort() {
    std::stable_sort(items.begin(), items.end(), [](const Diagnostic& a, const Diagnostic& b) {
      if (a.line != b.line) return a.line < b.line;
      if (a.col != b.col) return a.col < b.col;
      return a.code < b.code;
    });
  }
};

}  // namespace utiliproc

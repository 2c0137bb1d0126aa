#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace causalbounds {

/// Machine-readable failure categories. The CLI and service map these onto
/// exit codes and HTTP statuses.
enum class ErrorKind {
  Syntax,
  Validation,
  Infeasible,
  Timeout,
  Cancelled,
  Internal,
};

/// Position inside a text input, 1-based. Zero means "unknown".
struct SourceLocation {
  int line = 0;
  int column = 0;
};

struct Violation {
  std::string code;
  std::string message;
  std::string element;  // offending variable, edge or term

  bool operator==(const Violation&) const = default;
};

/// A list of violations; ok() iff the list is empty.
struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(const std::string& code) const {
    for (const auto& v : violations)
      if (v.code == code) return true;
    return false;
  }
  void add(std::string code, std::string message, std::string element = {}) {
    violations.push_back({std::move(code), std::move(message), std::move(element)});
  }
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message,
        SourceLocation where = {}, std::vector<Violation> violations = {})
      : std::runtime_error(message),
        kind_(kind),
        code_(std::move(code)),
        where_(where),
        violations_(std::move(violations)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& code() const { return code_; }
  SourceLocation where() const { return where_; }
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  ErrorKind kind_;
  std::string code_;
  SourceLocation where_;
  std::vector<Violation> violations_;
};

inline Error syntax_error(const std::string& message, SourceLocation where) {
  std::string full = message;
  if (where.line > 0)
    full = "line " + std::to_string(where.line) + ", column " + std::to_string(where.column) + ": " +
           message;
  return Error(ErrorKind::Syntax, "SYNTAX_ERROR", full, where);
}

inline Error validation_error(const ValidationReport& report) {
  std::string msg = "validation failed";
  for (const auto& v : report.violations) msg += "; " + v.code + ": " + v.message;
  return Error(ErrorKind::Validation, report.violations.empty() ? "INVALID" : report.violations.front().code,
               msg, {}, report.violations);
}

}  // namespace causalbounds

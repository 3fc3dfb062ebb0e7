#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bnenum {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A network that parsed but violates a structural or numeric invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& problems) {
    std::string out = "invalid network";
    for (const auto& p : problems) out += "\n  " + p;
    return out;
  }
  std::vector<std::string> problems_;
};

/// A configured size limit (oracle enumeration cap, cutset cap, --max-instances).
class CapExceededError : public Error {
 public:
  using Error::Error;
};

/// The graph is not singly connected where a polytree is required.
class StructureError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bnenum

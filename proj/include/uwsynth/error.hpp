#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace uwsynth {

/// Broad failure classes. The CLI maps each one to an exit code and prints
/// the category name as the machine-parsable prefix of its error line.
enum class ErrorCategory {
  usage,
  parse,
  load,
  domain,
  numerical,
  contract,
  config,
  capacity,
  ingest,
  io,
  lookup,
  validation,
};

std::string_view to_string(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Parse failure tied to a 1-based position of a text input, reported as
/// "<unit> <index>: <message>" (e.g. "row 2: ..." or "line 5: ...").
class ParseError : public Error {
 public:
  ParseError(std::size_t index, const std::string& message, std::string_view unit = "line")
      : Error(ErrorCategory::parse,
              std::string(unit) + " " + std::to_string(index) + ": " + message),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace uwsynth

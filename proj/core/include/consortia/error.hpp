#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace consortia {

enum class ErrorCode {
  EmptyAuthors,
  EmptyFields,
  NegativeCitations,
  EmptyArticleId,
  EmptyAuthorId,
  DuplicateAuthorId,
  InvalidParams,
  MalformedLine,
  DuplicateArticleId,
  TooLarge,
  MissingStratum,
  UnknownArticleId,
  OutOfRange,
  LengthMismatch,
  TooShort,
  ConstantInput,
  InvalidSpec,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library surfaces as an Error. `line` is set by the
// ingest layer (1-based input line) and `record` names the offending
// article when one is known.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::optional<std::size_t> line = {},
        std::string record = {});

  ErrorCode code() const noexcept { return code_; }
  const std::optional<std::size_t>& line() const noexcept { return line_; }
  const std::string& record() const noexcept { return record_; }
  // Message without the code/line prefix.
  const std::string& detail() const noexcept { return detail_; }

  // Copy of this error annotated with an input line number.
  Error at_line(std::size_t line) const;

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
  std::string record_;
  std::string detail_;
};

}  // namespace consortia

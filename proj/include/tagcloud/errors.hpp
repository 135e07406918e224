#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tagcloud {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A tag, resource or other named entity does not exist.
class NotFoundError : public Error {
  public:
    using Error::Error;
};

class InvalidArgumentError : public Error {
  public:
    explicit InvalidArgumentError(const std::string& message, std::string field = {})
        : Error(message), field_(std::move(field)) {}

    /// Name of the offending parameter, empty when not tied to one.
    const std::string& field() const noexcept { return field_; }

  private:
    std::string field_;
};

/// Two inputs that must describe the same tag set disagree.
class InconsistentInputError : public Error {
  public:
    using Error::Error;
};

/// A malformed input record; `line` is 1-based.
class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string& message, const std::string& file = {})
        : Error((file.empty() ? "" : file + ": ") + "line " + std::to_string(line) + ": " + message), line_(line),
          detail_(message) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }

  private:
    std::size_t line_;
    std::string detail_;
};

} // namespace tagcloud

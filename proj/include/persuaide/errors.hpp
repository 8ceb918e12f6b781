#ifndef PERSUAIDE_ERRORS_HPP
#define PERSUAIDE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace persuaide {

// Malformed input text (CoNLL-U streams and other line-oriented sources).
// line is 1-based within the offending stream.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Malformed resource file (matrix files, WordNet databases, embeddings,
// index directories). Carries the source name and a position: a line
// number for line-oriented formats, a byte offset for WordNet data files.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string source, std::string message, std::size_t position)
      : std::runtime_error(source + ":" + std::to_string(position) + ": " +
                           message),
        source_(std::move(source)),
        position_(position) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t position() const noexcept { return position_; }

 private:
  std::string source_;
  std::size_t position_;
};

// External parser adapter failure. diagnostic holds whatever the adapter
// produced on its error channel (stderr, HTTP body, ...).
class AdapterError : public std::runtime_error {
 public:
  AdapterError(std::string message, std::string diagnostic = "")
      : std::runtime_error(diagnostic.empty() ? message
                                              : message + ": " + diagnostic),
        diagnostic_(std::move(diagnostic)) {}

  const std::string& diagnostic() const noexcept { return diagnostic_; }

 private:
  std::string diagnostic_;
};

// Invalid or incomplete configuration (missing paths, empty lexicons,
// contradictory settings).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message)
      : std::runtime_error(message) {}
};

}  // namespace persuaide

#endif  // PERSUAIDE_ERRORS_HPP

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ftdetect {

/// Escapes a field for the line-oriented text formats. Backslash, tab, LF and
/// CR become `\\`, `\t`, `\n`, `\r`; any other byte outside 0x20-0x7E becomes
/// `\xHH`. The result never contains a tab or newline.
std::string escape_field(std::string_view raw);

/// Inverse of escape_field. Throws DataError on a malformed escape.
std::string unescape_field(std::string_view escaped);

/// Splits one line on tab characters (no unescaping).
std::vector<std::string_view> split_tabs(std::string_view line);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_real(double value);

/// Strict parsers: the whole field must be consumed. Throw DataError.
double parse_real(std::string_view field);
std::uint64_t parse_count(std::string_view field);

/// Sequential access to the lines of a text buffer. A trailing newline does
/// not produce an extra empty line; CR before LF is kept.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  std::size_t line_number() const { return line_; }

  /// Next line without its newline. Throws DataError past the end.
  std::string_view next();

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

}  // namespace ftdetect

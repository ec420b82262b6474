#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ftdetect {

/// Stand-in character for every byte >= 0x80 after decoding. It sits outside
/// the ASCII range, so it can never collide with a decoded ASCII byte.
inline constexpr char kNonAsciiPlaceholder = '\x80';

enum class CharClass { kWord, kPunctuation, kSpace };

/// Classification of a decoded character. Alphanumerics and `_` are word
/// characters; the 31 remaining ASCII punctuation marks and the non-ASCII
/// placeholder are punctuation; everything else (blank, tab, newlines and
/// other control codes) separates tokens without producing one.
CharClass classify(char c);

struct TokenStream {
  std::vector<std::string> tokens;
  std::string source_digest;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  bool operator==(const TokenStream&) const = default;
};

/// Maps ASCII bytes to themselves and every other byte to
/// kNonAsciiPlaceholder. The result has exactly one character per byte.
std::string decode(std::string_view content);

/// Splits decoded text into tokens: each punctuation character stands alone,
/// maximal runs of word characters form one token, whitespace is dropped.
/// Case is preserved.
TokenStream tokenize(std::string_view text);

/// decode + tokenize, with the content digest recorded on the stream.
TokenStream tokenize_content(std::string_view content);

/// Drops up to `head` tokens from the front and `tail` from the back.
TokenStream trim_affixes(TokenStream stream, std::size_t head, std::size_t tail);

struct TrimSettings {
  std::size_t head = 10;
  std::size_t tail = 10;

  bool operator==(const TrimSettings&) const = default;
};

}  // namespace ftdetect

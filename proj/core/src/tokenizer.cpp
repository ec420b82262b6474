#include "ftdetect/tokenizer.hpp"

#include "ftdetect/digest.hpp"

namespace ftdetect {

CharClass classify(char c) {
  const auto byte = static_cast<unsigned char>(c);
  if ((byte >= '0' && byte <= '9') || (byte >= 'a' && byte <= 'z') ||
      (byte >= 'A' && byte <= 'Z') || byte == '_') {
    return CharClass::kWord;
  }
  if (byte >= 0x21 && byte <= 0x7E) return CharClass::kPunctuation;
  if (c == kNonAsciiPlaceholder) return CharClass::kPunctuation;
  return CharClass::kSpace;
}

std::string decode(std::string_view content) {
  std::string text(content.size(), '\0');
  for (std::size_t i = 0; i < content.size(); ++i) {
    const auto byte = static_cast<unsigned char>(content[i]);
    text[i] = byte < 0x80 ? content[i] : kNonAsciiPlaceholder;
  }
  return text;
}

TokenStream tokenize(std::string_view text) {
  TokenStream stream;
  std::size_t i = 0;
  while (i < text.size()) {
    switch (classify(text[i])) {
      case CharClass::kSpace:
        ++i;
        break;
      case CharClass::kPunctuation:
        stream.tokens.emplace_back(1, text[i]);
        ++i;
        break;
      case CharClass::kWord: {
        const std::size_t start = i;
        while (i < text.size() && classify(text[i]) == CharClass::kWord) ++i;
        stream.tokens.emplace_back(text.substr(start, i - start));
        break;
      }
    }
  }
  return stream;
}

TokenStream tokenize_content(std::string_view content) {
  TokenStream stream = tokenize(decode(content));
  stream.source_digest = sha256_hex(content);
  return stream;
}

TokenStream trim_affixes(TokenStream stream, std::size_t head, std::size_t tail) {
  auto& tokens = stream.tokens;
  if (head + tail >= tokens.size()) {
    tokens.clear();
    return stream;
  }
  tokens.erase(tokens.end() - static_cast<std::ptrdiff_t>(tail), tokens.end());
  tokens.erase(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(head));
  return stream;
}

}  // namespace ftdetect

#include "textknn/preprocess.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>

namespace textknn {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    out.push_back(c < 0 ? kReplacement : static_cast<char32_t>(c));
  }
  return out;
}

void append_utf8(std::string& out, char32_t c) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t n = 0;
  UBool error = false;
  U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
  if (error) {
    n = 0;
    U8_APPEND_UNSAFE(buf, n, kReplacement);
  }
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

}  // namespace

TokenSet::TokenSet(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  std::sort(tokens_.begin(), tokens_.end());
  tokens_.erase(std::unique(tokens_.begin(), tokens_.end()), tokens_.end());
}

bool TokenSet::contains(std::string_view token) const {
  return std::binary_search(tokens_.begin(), tokens_.end(), token,
                            [](std::string_view a, std::string_view b) { return a < b; });
}

std::size_t TokenSet::intersection_size(const TokenSet& other) const {
  std::size_t count = 0;
  auto a = tokens_.begin();
  auto b = other.tokens_.begin();
  while (a != tokens_.end() && b != other.tokens_.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++count;
      ++a;
      ++b;
    }
  }
  return count;
}

std::size_t TokenSet::union_size(const TokenSet& other) const {
  return size() + other.size() - intersection_size(other);
}

bool is_split_whitespace(char32_t c) {
  if ((c >= 0x09 && c <= 0x0D) || (c >= 0x1C && c <= 0x20)) return true;
  if (c < 0x85) return false;
  switch (c) {
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

std::size_t utf8_length(std::string_view text) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  std::size_t count = 0;
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    ++count;
  }
  return count;
}

std::vector<std::string> split_tokens(std::string_view text, const PreprocessConfig& config) {
  std::u32string chars = decode_utf8(text);
  if (config.normalize) {
    const std::u32string punctuation = decode_utf8(config.punctuation_to_space);
    for (char32_t& c : chars) {
      if (punctuation.find(c) != std::u32string::npos) {
        c = U' ';
      } else if (config.lowercase) {
        c = static_cast<char32_t>(u_foldCase(static_cast<UChar32>(c), U_FOLD_CASE_DEFAULT));
      }
    }
  }

  std::vector<std::string> tokens;
  std::string current;
  for (char32_t c : chars) {
    if (is_split_whitespace(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      append_utf8(current, c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

TokenSet string_to_set(std::string_view text, const PreprocessConfig& config) {
  std::vector<std::string> tokens = split_tokens(text, config);
  const std::size_t n = config.min_token_len_exclusive;
  const bool keep_longer = config.length_filter == LengthFilter::KeepLonger;
  std::erase_if(tokens, [&](const std::string& t) { return (utf8_length(t) > n) != keep_longer; });
  return TokenSet(std::move(tokens));
}

}  // namespace textknn

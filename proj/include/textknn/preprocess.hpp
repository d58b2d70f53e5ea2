#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace textknn {

enum class LengthFilter {
  KeepLonger,  // keep tokens with length > n
  KeepAtMost,  // keep tokens with length <= n
};

// Settings for turning raw text into a set of tokens. The defaults reproduce
// the basic bag-of-words normalization: `.` `,` `?` `!` become spaces, text is
// case folded, split on whitespace, and tokens of at most 3 characters are
// dropped.
struct PreprocessConfig {
  // UTF-8; every code point in this string is replaced by a space.
  std::string punctuation_to_space = ".,?!";
  bool lowercase = true;
  // Token lengths are counted in Unicode scalar values.
  std::size_t min_token_len_exclusive = 3;
  LengthFilter length_filter = LengthFilter::KeepLonger;
  // When false, punctuation replacement and lowercasing are skipped; only
  // splitting and length filtering run.
  bool normalize = true;

  bool operator==(const PreprocessConfig&) const = default;
};

// Deduplicated set of tokens, stored sorted by byte order.
class TokenSet {
 public:
  TokenSet() = default;
  // Sorts and deduplicates.
  explicit TokenSet(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  bool contains(std::string_view token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

  auto begin() const { return tokens_.begin(); }
  auto end() const { return tokens_.end(); }

  std::size_t intersection_size(const TokenSet& other) const;
  std::size_t union_size(const TokenSet& other) const;

  bool operator==(const TokenSet&) const = default;

 private:
  std::vector<std::string> tokens_;
};

// Whitespace as understood by Python's str.split(): ASCII controls 0x09-0x0D
// and 0x1C-0x1F, space, U+0085, U+00A0, U+1680, U+2000-U+200A, U+2028,
// U+2029, U+202F, U+205F and U+3000.
bool is_split_whitespace(char32_t c);

// Number of Unicode scalar values in a UTF-8 string. Each malformed
// sequence counts as one replacement character.
std::size_t utf8_length(std::string_view text);

// Split on runs of whitespace after optional normalization, without length
// filtering. Tokens are returned in order of appearance, duplicates kept.
std::vector<std::string> split_tokens(std::string_view text, const PreprocessConfig& config);

TokenSet string_to_set(std::string_view text, const PreprocessConfig& config = {});

}  // namespace textknn

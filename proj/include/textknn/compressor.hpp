#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace textknn {

class CompressorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// gzip-format DEFLATE (RFC 1952 framing, zero mtime, no file name) backed by
// zlib. Stateless between calls and safe to share across threads.
class GzipCompressor {
 public:
  static constexpr int kDefaultLevel = 6;

  // level in [0, 9]; throws std::invalid_argument otherwise.
  explicit GzipCompressor(int level = kDefaultLevel);

  int level() const { return level_; }

  std::string compress(std::string_view data) const;

  // Size of compress(data) in bytes; always positive because of the framing.
  std::size_t compressed_len(std::string_view data) const;

 private:
  int level_;
};

}  // namespace textknn

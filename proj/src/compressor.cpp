#include "textknn/compressor.hpp"

#include <zlib.h>

#include <array>
#include <memory>
#include <vector>

namespace textknn {

namespace {

constexpr int kGzipWindowBits = 15 + 16;
constexpr int kMemLevel = 8;

class DeflateStream {
 public:
  explicit DeflateStream(int level) {
    if (deflateInit2(&stream_, level, Z_DEFLATED, kGzipWindowBits, kMemLevel, Z_DEFAULT_STRATEGY) != Z_OK) {
      throw CompressorError("deflateInit2 failed");
    }
  }
  ~DeflateStream() { deflateEnd(&stream_); }
  DeflateStream(const DeflateStream&) = delete;
  DeflateStream& operator=(const DeflateStream&) = delete;

  z_stream* get() { return &stream_; }

 private:
  z_stream stream_{};
};

// Compresses `data` into a thread-local scratch buffer and returns the number
// of bytes produced.
std::size_t deflate_into_scratch(int level, std::string_view data, const unsigned char** out) {
  thread_local std::vector<unsigned char> scratch;
  thread_local std::array<std::unique_ptr<DeflateStream>, 10> streams;
  auto& stream = streams[static_cast<std::size_t>(level)];
  if (!stream) stream = std::make_unique<DeflateStream>(level);
  z_stream* z = stream->get();
  if (deflateReset(z) != Z_OK) throw CompressorError("deflateReset failed");
  const auto bound = deflateBound(z, static_cast<uLong>(data.size()));
  if (scratch.size() < bound) scratch.resize(bound);

  z->next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  z->avail_in = static_cast<uInt>(data.size());
  z->next_out = scratch.data();
  z->avail_out = static_cast<uInt>(scratch.size());
  if (deflate(z, Z_FINISH) != Z_STREAM_END) {
    throw CompressorError("deflate did not finish within deflateBound");
  }
  *out = scratch.data();
  return static_cast<std::size_t>(z->total_out);
}

}  // namespace

GzipCompressor::GzipCompressor(int level) : level_(level) {
  if (level < 0 || level > 9) {
    throw std::invalid_argument("gzip compression level must be in [0, 9], got " + std::to_string(level));
  }
}

std::string GzipCompressor::compress(std::string_view data) const {
  const unsigned char* bytes = nullptr;
  const std::size_t n = deflate_into_scratch(level_, data, &bytes);
  return std::string(reinterpret_cast<const char*>(bytes), n);
}

std::size_t GzipCompressor::compressed_len(std::string_view data) const {
  const unsigned char* bytes = nullptr;
  return deflate_into_scratch(level_, data, &bytes);
}

}  // namespace textknn

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "textknn/compressor.hpp"
#include "textknn/document.hpp"
#include "textknn/preprocess.hpp"

namespace textknn {

// 1 - |a ∩ b| / |a ∪ b|, with 0 for two empty sets.
double jaccard_distance(const TokenSet& a, const TokenSet& b);

// The same quantity written as a compression distance in which a TokenSet is
// the "compressed" document, its cardinality the compressed length and the
// union the compressed concatenation: 2 - (|a| + |b|) / |a ∪ b|.
// Throws std::domain_error when the union is empty.
double jaccard_distance_compression_form(const TokenSet& a, const TokenSet& b);

struct NcdConfig {
  int level = GzipCompressor::kDefaultLevel;
  // Join the two texts with a single space before compressing the pair;
  // plain byte concatenation otherwise.
  bool space_separator = true;

  bool operator==(const NcdConfig&) const = default;
};

// (C(xy) - min(C(x), C(y))) / max(C(x), C(y))
double normalized_compression_distance(std::size_t cx, std::size_t cy, std::size_t cxy);

// Compressed lengths C(x) for a fixed list of documents, addressed by
// document index.
class CompressedLengthCache {
 public:
  explicit CompressedLengthCache(GzipCompressor compressor) : compressor_(compressor) {}
  CompressedLengthCache(GzipCompressor compressor, std::span<const Document> docs);

  const GzipCompressor& compressor() const { return compressor_; }
  std::size_t size() const { return lengths_.size(); }
  // Appends the compressed length of `text` and returns its index.
  std::size_t add(std::string_view text);
  std::size_t at(std::size_t index) const { return lengths_.at(index); }

 private:
  GzipCompressor compressor_;
  std::vector<std::size_t> lengths_;
};

// NCD with C(x) and C(y) supplied by the caller; only C(xy) is compressed.
double ncd_distance(std::string_view x, std::size_t cx, std::string_view y, std::size_t cy,
                    const GzipCompressor& compressor, bool space_separator);

// Uncached NCD: compresses x, y and their concatenation.
double ncd_distance(std::string_view x, std::string_view y, const NcdConfig& config = {});

enum class Method { Simple, Gzip };

std::string_view to_string(Method method);
// Accepts "simple" or "gzip"; throws std::invalid_argument otherwise.
Method parse_method(std::string_view name);

// Per-corpus precomputed state: a TokenSet per document for `simple`, the
// compressed length of every document for `gzip`. Immutable once built and
// safe to share across threads.
class DistanceContext {
 public:
  virtual ~DistanceContext() = default;

  virtual std::size_t size() const = 0;
  // Writes distance(query, doc[i]) into out[i] for every prepared document.
  // out.size() must equal size().
  virtual void distances_from(std::string_view query, std::span<double> out) const = 0;
  // Distance between two prepared documents.
  virtual double distance(std::size_t i, std::size_t j) const = 0;
};

class DistanceFunction {
 public:
  virtual ~DistanceFunction() = default;

  virtual Method method() const = 0;
  // Uncached distance between two raw texts.
  virtual double distance(std::string_view a, std::string_view b) const = 0;
  virtual std::unique_ptr<DistanceContext> prepare(std::span<const Document> docs) const = 0;
};

class SimpleDistance final : public DistanceFunction {
 public:
  explicit SimpleDistance(PreprocessConfig config = {}) : config_(std::move(config)) {}

  Method method() const override { return Method::Simple; }
  const PreprocessConfig& config() const { return config_; }
  double distance(std::string_view a, std::string_view b) const override;
  std::unique_ptr<DistanceContext> prepare(std::span<const Document> docs) const override;

 private:
  PreprocessConfig config_;
};

class SimpleDistanceContext final : public DistanceContext {
 public:
  SimpleDistanceContext(PreprocessConfig config, std::span<const Document> docs);

  std::size_t size() const override { return doc_tokens_.size(); }
  void distances_from(std::string_view query, std::span<double> out) const override;
  double distance(std::size_t i, std::size_t j) const override;

  TokenSet token_set(std::size_t index) const;

 private:
  PreprocessConfig config_;
  std::vector<std::string> vocabulary_;
  // Interned token ids per document, sorted ascending.
  std::vector<std::vector<std::uint32_t>> doc_tokens_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

class GzipDistance final : public DistanceFunction {
 public:
  explicit GzipDistance(NcdConfig config = {});

  Method method() const override { return Method::Gzip; }
  const NcdConfig& config() const { return config_; }
  double distance(std::string_view a, std::string_view b) const override;
  std::unique_ptr<DistanceContext> prepare(std::span<const Document> docs) const override;

 private:
  NcdConfig config_;
  GzipCompressor compressor_;
};

class GzipDistanceContext final : public DistanceContext {
 public:
  GzipDistanceContext(NcdConfig config, std::span<const Document> docs);

  std::size_t size() const override { return texts_.size(); }
  void distances_from(std::string_view query, std::span<double> out) const override;
  double distance(std::size_t i, std::size_t j) const override;

  const CompressedLengthCache& cache() const { return cache_; }

 private:
  NcdConfig config_;
  std::vector<std::string> texts_;
  CompressedLengthCache cache_;
};

struct DistanceSpec {
  Method method = Method::Simple;
  PreprocessConfig preprocess;
  NcdConfig ncd;

  bool operator==(const DistanceSpec&) const = default;
};

std::unique_ptr<DistanceFunction> make_distance(const DistanceSpec& spec);

}  // namespace textknn

#include "textknn/distance.hpp"

#include <algorithm>
#include <stdexcept>

namespace textknn {

namespace {

double jaccard_from_counts(std::size_t intersection, std::size_t union_size) {
  if (union_size == 0) return 0.0;
  return 1.0 - static_cast<double>(intersection) / static_cast<double>(union_size);
}

std::string_view join_pair(std::string_view x, std::string_view y, bool space_separator) {
  thread_local std::string buffer;
  buffer.clear();
  buffer.reserve(x.size() + y.size() + 1);
  buffer.append(x);
  if (space_separator) buffer.push_back(' ');
  buffer.append(y);
  return buffer;
}

}  // namespace

double jaccard_distance(const TokenSet& a, const TokenSet& b) {
  const std::size_t intersection = a.intersection_size(b);
  return jaccard_from_counts(intersection, a.size() + b.size() - intersection);
}

double jaccard_distance_compression_form(const TokenSet& a, const TokenSet& b) {
  const std::size_t joint = a.union_size(b);
  if (joint == 0) {
    throw std::domain_error("compression form of the Jaccard distance is undefined for an empty union");
  }
  return 2.0 - static_cast<double>(a.size() + b.size()) / static_cast<double>(joint);
}

double normalized_compression_distance(std::size_t cx, std::size_t cy, std::size_t cxy) {
  const auto [lo, hi] = std::minmax(cx, cy);
  return (static_cast<double>(cxy) - static_cast<double>(lo)) / static_cast<double>(hi);
}

CompressedLengthCache::CompressedLengthCache(GzipCompressor compressor, std::span<const Document> docs)
    : compressor_(compressor) {
  lengths_.reserve(docs.size());
  for (const Document& doc : docs) add(doc.text);
}

std::size_t CompressedLengthCache::add(std::string_view text) {
  lengths_.push_back(compressor_.compressed_len(text));
  return lengths_.size() - 1;
}

double ncd_distance(std::string_view x, std::size_t cx, std::string_view y, std::size_t cy,
                    const GzipCompressor& compressor, bool space_separator) {
  const std::size_t cxy = compressor.compressed_len(join_pair(x, y, space_separator));
  return normalized_compression_distance(cx, cy, cxy);
}

double ncd_distance(std::string_view x, std::string_view y, const NcdConfig& config) {
  const GzipCompressor compressor(config.level);
  return ncd_distance(x, compressor.compressed_len(x), y, compressor.compressed_len(y), compressor,
                      config.space_separator);
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Simple:
      return "simple";
    case Method::Gzip:
      return "gzip";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "simple") return Method::Simple;
  if (name == "gzip") return Method::Gzip;
  throw std::invalid_argument("unknown method '" + std::string(name) + "' (expected simple or gzip)");
}

// simple

double SimpleDistance::distance(std::string_view a, std::string_view b) const {
  return jaccard_distance(string_to_set(a, config_), string_to_set(b, config_));
}

std::unique_ptr<DistanceContext> SimpleDistance::prepare(std::span<const Document> docs) const {
  return std::make_unique<SimpleDistanceContext>(config_, docs);
}

SimpleDistanceContext::SimpleDistanceContext(PreprocessConfig config, std::span<const Document> docs)
    : config_(std::move(config)) {
  doc_tokens_.reserve(docs.size());
  for (const Document& doc : docs) {
    std::vector<std::uint32_t> ids;
    for (const std::string& token : string_to_set(doc.text, config_)) {
      auto [it, inserted] = ids_.try_emplace(token, static_cast<std::uint32_t>(vocabulary_.size()));
      if (inserted) vocabulary_.push_back(token);
      ids.push_back(it->second);
    }
    std::sort(ids.begin(), ids.end());
    doc_tokens_.push_back(std::move(ids));
  }
}

void SimpleDistanceContext::distances_from(std::string_view query, std::span<double> out) const {
  if (out.size() != size()) throw std::invalid_argument("distance output span has the wrong size");
  const TokenSet query_set = string_to_set(query, config_);

  thread_local std::vector<std::uint8_t> marks;
  if (marks.size() < vocabulary_.size()) marks.resize(vocabulary_.size(), 0);
  std::vector<std::uint32_t> known;
  known.reserve(query_set.size());
  for (const std::string& token : query_set) {
    if (auto it = ids_.find(token); it != ids_.end()) {
      known.push_back(it->second);
      marks[it->second] = 1;
    }
  }

  for (std::size_t i = 0; i < doc_tokens_.size(); ++i) {
    const auto& doc = doc_tokens_[i];
    std::size_t intersection = 0;
    for (std::uint32_t id : doc) intersection += marks[id];
    out[i] = jaccard_from_counts(intersection, query_set.size() + doc.size() - intersection);
  }

  for (std::uint32_t id : known) marks[id] = 0;
}

double SimpleDistanceContext::distance(std::size_t i, std::size_t j) const {
  const auto& a = doc_tokens_.at(i);
  const auto& b = doc_tokens_.at(j);
  std::size_t intersection = 0;
  for (auto x = a.begin(), y = b.begin(); x != a.end() && y != b.end();) {
    if (*x < *y) {
      ++x;
    } else if (*y < *x) {
      ++y;
    } else {
      ++intersection;
      ++x;
      ++y;
    }
  }
  return jaccard_from_counts(intersection, a.size() + b.size() - intersection);
}

TokenSet SimpleDistanceContext::token_set(std::size_t index) const {
  std::vector<std::string> tokens;
  for (std::uint32_t id : doc_tokens_.at(index)) tokens.push_back(vocabulary_[id]);
  return TokenSet(std::move(tokens));
}

// gzip

GzipDistance::GzipDistance(NcdConfig config) : config_(config), compressor_(config.level) {}

double GzipDistance::distance(std::string_view a, std::string_view b) const {
  return ncd_distance(a, b, config_);
}

std::unique_ptr<DistanceContext> GzipDistance::prepare(std::span<const Document> docs) const {
  return std::make_unique<GzipDistanceContext>(config_, docs);
}

GzipDistanceContext::GzipDistanceContext(NcdConfig config, std::span<const Document> docs)
    : config_(config), cache_(GzipCompressor(config.level), docs) {
  texts_.reserve(docs.size());
  for (const Document& doc : docs) texts_.push_back(doc.text);
}

void GzipDistanceContext::distances_from(std::string_view query, std::span<double> out) const {
  if (out.size() != size()) throw std::invalid_argument("distance output span has the wrong size");
  const GzipCompressor& compressor = cache_.compressor();
  const std::size_t cq = compressor.compressed_len(query);
  for (std::size_t i = 0; i < texts_.size(); ++i) {
    out[i] = ncd_distance(query, cq, texts_[i], cache_.at(i), compressor, config_.space_separator);
  }
}

double GzipDistanceContext::distance(std::size_t i, std::size_t j) const {
  return ncd_distance(texts_.at(i), cache_.at(i), texts_.at(j), cache_.at(j), cache_.compressor(),
                      config_.space_separator);
}

std::unique_ptr<DistanceFunction> make_distance(const DistanceSpec& spec) {
  switch (spec.method) {
    case Method::Simple:
      return std::make_unique<SimpleDistance>(spec.preprocess);
    case Method::Gzip:
      return std::make_unique<GzipDistance>(spec.ncd);
  }
  throw std::invalid_argument("unknown distance method");
}

}  // namespace textknn

#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ssas {

/// Sparse term -> weight vector. Ordered storage keeps every downstream
/// artifact (centroids, serialized hierarchies) deterministic.
class FeatureVector {
 public:
  using Map = std::map<std::string, double>;

  FeatureVector() = default;
  explicit FeatureVector(Map weights) : weights_(std::move(weights)) {}

  void add(const std::string& term, double weight) { weights_[term] += weight; }
  double weight(const std::string& term) const;

  bool empty() const { return weights_.empty(); }
  std::size_t size() const { return weights_.size(); }
  Map::const_iterator begin() const { return weights_.begin(); }
  Map::const_iterator end() const { return weights_.end(); }
  const Map& terms() const { return weights_; }

  double norm() const;
  void scale(double factor);

  static double dot(const FeatureVector& a, const FeatureVector& b);

  bool operator==(const FeatureVector& other) const = default;

 private:
  Map weights_;
};

/// Cosine similarity; defined as 0 when either vector is empty or zero.
double cosine_similarity(const FeatureVector& a, const FeatureVector& b);

/// Case-folded alphanumeric tokens, in text order.
std::vector<std::string> tokenize(std::string_view text);

bool is_stopword(const std::string& token);

/// Frequency-weighted keyword vector: case-folded tokens minus a fixed
/// stop list, weight = term count.
FeatureVector extract_features(std::string_view text);

/// Pluggable vector provider for hierarchy construction and scoring.
using FeatureExtractor = std::function<FeatureVector(std::string_view)>;

/// Sentence split on ./!/? and newlines, preserving text order.
std::vector<std::string> split_sentences(std::string_view text);

std::size_t count_tokens(std::string_view text);  // whitespace tokens

}  // namespace ssas

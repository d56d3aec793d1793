#include "ssas/features.hpp"

#include <cctype>
#include <cmath>
#include <unordered_set>

#include "ssas/util.hpp"

namespace ssas {
namespace {

const std::unordered_set<std::string>& stopword_set() {
  static const std::unordered_set<std::string> words = {
      "a",    "an",   "and",  "are",  "as",   "at",   "be",   "but",  "by",
      "for",  "from", "had",  "has",  "have", "he",   "her",  "his",  "i",
      "if",   "in",   "is",   "it",   "its",  "me",   "my",   "no",   "not",
      "of",   "on",   "or",   "our",  "she",  "so",   "that", "the",  "their",
      "them", "then", "there", "they", "this", "to",   "was",  "we",   "were",
      "what", "when", "which", "who",  "will", "with", "would", "you", "your",
  };
  return words;
}

}  // namespace

double FeatureVector::weight(const std::string& term) const {
  auto it = weights_.find(term);
  return it == weights_.end() ? 0.0 : it->second;
}

double FeatureVector::norm() const {
  double sum = 0.0;
  for (const auto& [term, w] : weights_) sum += w * w;
  return std::sqrt(sum);
}

void FeatureVector::scale(double factor) {
  for (auto& [term, w] : weights_) w *= factor;
}

double FeatureVector::dot(const FeatureVector& a, const FeatureVector& b) {
  const FeatureVector& small = a.size() <= b.size() ? a : b;
  const FeatureVector& large = a.size() <= b.size() ? b : a;
  double sum = 0.0;
  for (const auto& [term, w] : small.terms()) {
    sum += w * large.weight(term);
  }
  return sum;
}

double cosine_similarity(const FeatureVector& a, const FeatureVector& b) {
  if (a.empty() || b.empty()) return 0.0;
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return FeatureVector::dot(a, b) / (na * nb);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (c == '\'' && !current.empty()) {
      // keep contractions together ("don't")
      current.push_back('\'');
    } else if (!current.empty()) {
      while (!current.empty() && current.back() == '\'') current.pop_back();
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    }
  }
  while (!current.empty() && current.back() == '\'') current.pop_back();
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

bool is_stopword(const std::string& token) {
  return stopword_set().count(token) > 0;
}

FeatureVector extract_features(std::string_view text) {
  FeatureVector vec;
  for (auto& token : tokenize(text)) {
    if (is_stopword(token)) continue;
    vec.add(token, 1.0);
  }
  return vec;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::string current;
  for (char c : text) {
    if (c == '.' || c == '!' || c == '?' || c == '\n') {
      current.push_back(c == '\n' ? ' ' : c);
      std::string trimmed = trim(current);
      if (!trimmed.empty()) sentences.push_back(std::move(trimmed));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  std::string trimmed = trim(current);
  if (!trimmed.empty()) sentences.push_back(std::move(trimmed));
  return sentences;
}

std::size_t count_tokens(std::string_view text) {
  std::size_t count = 0;
  bool in_token = false;
  for (char raw : text) {
    if (std::isspace(static_cast<unsigned char>(raw))) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++count;
    }
  }
  return count;
}

}  // namespace ssas

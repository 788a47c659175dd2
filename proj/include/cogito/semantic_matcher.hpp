#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cogito/model.hpp"

namespace cogito {

class Embedder;

struct EmbeddingVector {
  std::vector<double> values;

  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<double> v) : values(std::move(v)) {}

  std::size_t dim() const { return values.size(); }

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

struct Ranking {
  std::vector<RankingEntry> entries;  // score descending

  const RankingEntry& top() const { return entries.front(); }
};

// A context sentence to rank: the id/text pair plus its embedding.
struct ContextVector {
  SentenceId id;
  std::string text;  // used for tie-breaking
  EmbeddingVector vector;
};

// dot(a,b) / (|a| |b|), clamped to [-1,1].
// Throws DimensionMismatch or ZeroNorm.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

// Scores every context against the need and sorts descending. Ties go to the
// lexicographically smaller text, then the earlier input position.
// Throws EmptyContext or DimensionMismatch.
Ranking rank_contexts(const EmbeddingVector& need, std::span<const ContextVector> contexts);

struct Match {
  Sentence sentence;
  double score = 0.0;
  Ranking ranking;
};

// Embeds the need and the contexts through the backend and returns the best
// ranked context along with the full ranking.
Match best_match(const Sentence& need, std::span<const Sentence> contexts, Embedder& embedder);

}  // namespace cogito

#include "cogito/semantic_matcher.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cogito/backend.hpp"
#include "cogito/error.hpp"

namespace cogito {

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (!(na > 0.0) || !(nb > 0.0)) throw Error(ErrorCode::ZeroNorm, "embedding has zero norm");
  // sqrt(na * nb) rather than sqrt(na) * sqrt(nb): the product is symmetric
  // in a and b, so cos(a, b) and cos(b, a) are bit-identical.
  const double value = dot / std::sqrt(na * nb);
  return std::clamp(value, -1.0, 1.0);
}

Ranking rank_contexts(const EmbeddingVector& need, std::span<const ContextVector> contexts) {
  if (contexts.empty()) throw Error(ErrorCode::EmptyContext, "no context sentences to rank");

  struct Scored {
    std::size_t index;
    double score;
  };
  std::vector<Scored> scored(contexts.size());
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    scored[i] = {i, cosine_similarity(need, contexts[i].vector)};
  }
  std::sort(scored.begin(), scored.end(), [&](const Scored& x, const Scored& y) {
    if (x.score != y.score) return x.score > y.score;
    const auto& tx = contexts[x.index].text;
    const auto& ty = contexts[y.index].text;
    if (tx != ty) return tx < ty;
    return x.index < y.index;
  });

  Ranking ranking;
  ranking.entries.reserve(scored.size());
  for (const auto& s : scored) ranking.entries.push_back({contexts[s.index].id, s.score});
  return ranking;
}

Match best_match(const Sentence& need, std::span<const Sentence> contexts, Embedder& embedder) {
  if (contexts.empty()) throw Error(ErrorCode::EmptyContext, "no context sentences to match");

  std::vector<std::string> texts;
  texts.reserve(contexts.size() + 1);
  texts.push_back(need.text);
  for (const auto& c : contexts) texts.push_back(c.text);

  auto vectors = embedder.embed(texts);
  if (vectors.size() != texts.size()) {
    throw Error(ErrorCode::MalformedResponse, "embedder returned " + std::to_string(vectors.size()) +
                                                  " vectors for " + std::to_string(texts.size()) + " texts");
  }

  std::vector<ContextVector> items;
  items.reserve(contexts.size());
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    items.push_back({contexts[i].id, contexts[i].text, std::move(vectors[i + 1])});
  }

  Match match;
  match.ranking = rank_contexts(vectors[0], items);
  const auto& top = match.ranking.top();
  auto it = std::find_if(contexts.begin(), contexts.end(), [&](const Sentence& s) { return s.id == top.sentence_id; });
  match.sentence = *it;
  match.score = top.score;
  return match;
}

}  // namespace cogito

#pragma once

#include <string>
#include <vector>

#include "ner/corpus.hpp"
#include "ner/rng.hpp"

namespace ner::test {

/// Random sorted non-overlapping span set over a sentence of length n.
inline std::vector<EntitySpan> random_spans(Rng& rng, int n) {
  std::vector<EntitySpan> spans;
  int pos = 0;
  while (pos < n) {
    if (rng.unit() < 0.4) {
      const int max_len = std::min(4, n - pos);
      const int len = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(max_len)));
      const EntityType type = static_cast<EntityType>(rng.below(kNumEntityTypes));
      spans.push_back({0, pos, pos + len, type});
      pos += len;
    } else {
      ++pos;
    }
  }
  return spans;
}

/// Arbitrary tag sequence, valid or not.
inline std::vector<Tag> random_raw_tags(Rng& rng, int n) {
  std::vector<Tag> tags;
  tags.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const uint64_t pick = rng.below(3);
    const EntityType type = static_cast<EntityType>(rng.below(kNumEntityTypes));
    tags.push_back(pick == 0 ? Tag::o() : pick == 1 ? Tag::b(type) : Tag::i(type));
  }
  return tags;
}

/// Valid IOB2 sequence of length n.
inline std::vector<Tag> random_valid_tags(Rng& rng, int n) {
  return encode_iob(random_spans(rng, n), n);
}

inline Sentence make_sentence(const std::vector<std::string>& surfaces,
                              const std::vector<std::string>& pos = {}) {
  Sentence s;
  for (size_t i = 0; i < surfaces.size(); ++i) {
    Token t;
    t.surface = surfaces[i];
    t.lemma = surfaces[i];
    t.pos = i < pos.size() ? pos[i] : "N";
    t.chunk = "O";
    s.tokens.push_back(std::move(t));
  }
  return s;
}

}  // namespace ner::test

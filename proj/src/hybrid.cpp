#include "ner/hybrid.hpp"

#include "ner/error.hpp"

namespace ner {

std::optional<CombineStrategy> parse_strategy(std::string_view name) {
  if (name == "rule-first") return CombineStrategy::RuleFirst;
  if (name == "stat-first") return CombineStrategy::StatFirst;
  if (name == "stat-then-list") return CombineStrategy::StatThenList;
  return std::nullopt;
}

std::vector<Tag> combine(std::span<const Tag> primary, std::span<const Tag> secondary) {
  if (primary.size() != secondary.size())
    throw DataError("combine: tag sequences differ in length (" +
                    std::to_string(primary.size()) + " vs " + std::to_string(secondary.size()) +
                    ")");
  int bad = -1;
  if (!valid_iob(primary, &bad))
    throw DataError("combine: primary tags invalid at index " + std::to_string(bad));
  if (!valid_iob(secondary, &bad))
    throw DataError("combine: secondary tags invalid at index " + std::to_string(bad));

  std::vector<Tag> out(primary.begin(), primary.end());
  for (const EntitySpan& span : decode_iob(secondary)) {
    bool free = true;
    for (int i = span.start; i < span.end && free; ++i)
      free = primary[static_cast<size_t>(i)].is_o();
    if (!free) continue;
    out[static_cast<size_t>(span.start)] = Tag::b(span.type);
    for (int i = span.start + 1; i < span.end; ++i)
      out[static_cast<size_t>(i)] = Tag::i(span.type);
  }
  return out;
}

std::vector<Tag> run_strategy(CombineStrategy strategy, const Sentence& sentence,
                              const CrfModel& model, const RuleSet& rules,
                              std::span<const Gazetteer> gazetteers) {
  const int n = static_cast<int>(sentence.size());
  switch (strategy) {
    case CombineStrategy::RuleFirst:
      return combine(encode_iob(match_rules(sentence, rules), n),
                     model.decode(sentence, gazetteers));
    case CombineStrategy::StatFirst:
      return combine(model.decode(sentence, gazetteers),
                     encode_iob(match_rules(sentence, rules), n));
    case CombineStrategy::StatThenList:
      return combine(model.decode(sentence, gazetteers),
                     encode_iob(exact_match_spans(sentence, gazetteers), n));
  }
  return model.decode(sentence, gazetteers);
}

}  // namespace ner

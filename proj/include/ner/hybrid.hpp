#pragma once

#include <span>
#include <vector>

#include "ner/corpus.hpp"
#include "ner/crf.hpp"
#include "ner/gazetteer.hpp"
#include "ner/rules.hpp"

namespace ner {

/// Which tagger has priority when two outputs are merged.
enum class CombineStrategy { RuleFirst, StatFirst, StatThenList };

std::optional<CombineStrategy> parse_strategy(std::string_view name);

/// Fill-in merge: every non-O token of `primary` survives unchanged; a
/// span from `secondary` is adopted only if all of its tokens are O in
/// `primary` (whole spans or nothing, so the result needs no repair).
/// Both inputs must be valid IOB2 of equal length.
std::vector<Tag> combine(std::span<const Tag> primary, std::span<const Tag> secondary);

/// Runs the component taggers a strategy needs and merges their output:
/// RuleFirst    = combine(rules, crf)
/// StatFirst    = combine(crf, rules)
/// StatThenList = combine(crf, list matches)
std::vector<Tag> run_strategy(CombineStrategy strategy, const Sentence& sentence,
                              const CrfModel& model, const RuleSet& rules,
                              std::span<const Gazetteer> gazetteers);

}  // namespace ner

#pragma once

#include <map>
#include <memory>
#include <regex>
#include <span>
#include <string>
#include <vector>

#include "ner/corpus.hpp"
#include "ner/gazetteer.hpp"

namespace ner {

/// Predicate over a single token. Regex predicates are anchored to the
/// whole surface form.
struct TokenPredicate {
  enum class Kind : uint8_t { Literals, Pos, Lexicon, Regex };

  Kind kind = Kind::Literals;
  std::vector<std::string> literals;           // Literals: exact-surface alternatives
  std::string pos_tag;                         // Pos
  std::string lexicon;                         // Lexicon: gazetteer name
  const Gazetteer* lex = nullptr;              // resolved at compile time
  std::string regex_src;                       // Regex: source as written
  std::shared_ptr<const std::regex> compiled;  // Regex: after \d expansion

  bool matches(const Token& token) const;
  friend bool operator==(const TokenPredicate& a, const TokenPredicate& b) {
    return a.kind == b.kind && a.literals == b.literals && a.pos_tag == b.pos_tag &&
           a.lexicon == b.lexicon && a.regex_src == b.regex_src;
  }
};

enum class Quantifier : uint8_t { One, Optional, Plus, Star };

struct PatternElement {
  TokenPredicate pred;
  Quantifier quant = Quantifier::One;
  friend bool operator==(const PatternElement&, const PatternElement&) = default;
};

struct TokenPattern {
  std::vector<PatternElement> elements;
  friend bool operator==(const TokenPattern&, const TokenPattern&) = default;
};

/// One cascaded token-sequence rule. The capture range selects which
/// pattern elements' tokens become the emitted span (default: all).
struct Rule {
  std::string id;
  TokenPattern pattern;
  EntityType type = EntityType::PER;
  int priority = 0;
  int capture_begin = 0;  // element index, inclusive
  int capture_end = 0;    // element index, exclusive

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.pattern == b.pattern && a.type == b.type && a.priority == b.priority &&
           a.capture_begin == b.capture_begin && a.capture_end == b.capture_end;
  }
};

/// Character-level regex over one token's surface, anchored to the whole
/// token. `\d` covers ASCII, Persian and Arabic-Indic digits.
struct CharRule {
  std::string id;
  std::string regex_src;
  std::shared_ptr<const std::regex> compiled;
  EntityType type = EntityType::PER;
};

using LexiconMap = std::map<std::string, const Gazetteer*, std::less<>>;

LexiconMap make_lexicon_map(std::span<const Gazetteer> gazetteers);

/// Compiles one DSL line of the form
///   TYPE <- element+ [:capture a..b] [@ priority]
/// with element = "literal" | (alt|alt|...) | [pos:TAG] | [lex:NAME] |
/// [re:REGEX], each optionally followed by ? + *. Throws DataError with a
/// column position on syntax errors, unknown lexicon names or entity types.
Rule compile_rule(std::string_view dsl, const LexiconMap& lexicons, std::string id = "");

/// Inverse of compile_rule up to whitespace: compile(print(r)) == r.
std::string print_rule(const Rule& rule);

/// Compiles "TYPE <~ REGEX".
CharRule compile_char_rule(std::string_view dsl, std::string id = "");

/// Expands \d (outside character classes) into an alternation covering
/// ASCII, Persian and Arabic-Indic digits, then compiles.
std::shared_ptr<const std::regex> compile_token_regex(std::string_view src);

struct RuleSet {
  std::vector<Rule> rules;
  std::vector<CharRule> char_rules;
};

/// One rule per non-comment line; both rule forms may be mixed freely.
/// Errors are aggregated and reported together with line numbers.
RuleSet load_ruleset(const std::string& path, const LexiconMap& lexicons);
RuleSet parse_ruleset(std::string_view text, std::string_view origin,
                      const LexiconMap& lexicons);

/// Runs every rule against the sentence and resolves overlaps
/// deterministically: longest emitted span, then higher priority, then
/// leftmost start, then lowest rule id. Returned spans never overlap and
/// are sorted by start.
std::vector<EntitySpan> match_rules(const Sentence& sentence, std::span<const Rule> rules,
                                    std::span<const CharRule> char_rules);

inline std::vector<EntitySpan> match_rules(const Sentence& sentence, const RuleSet& rs) {
  return match_rules(sentence, rs.rules, rs.char_rules);
}

/// Greedy backtracking match of a rule anchored at `start`: each quantifier
/// consumes maximally subject to the rest of the pattern matching. Returns
/// the emitted (capture) span, or nullopt. Exposed for the brute-force
/// oracle tests.
std::optional<EntitySpan> match_rule_at(const Rule& rule, const Sentence& sentence, int start);

}  // namespace ner

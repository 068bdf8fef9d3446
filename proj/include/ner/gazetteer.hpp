#pragma once

#include <array>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ner/corpus.hpp"

namespace ner {

/// A typed list of entity surface forms. Entries are token sequences;
/// lookups go through a token-level trie so the longest entry starting at a
/// position is found in one walk. Immutable once loaded.
class Gazetteer {
 public:
  Gazetteer(std::string name, EntityType type) : name_(std::move(name)), type_(type) {
    nodes_.emplace_back();
  }

  /// One entry per line, tokens space-separated, '#' comments. Duplicate
  /// lines count once.
  static Gazetteer load(const std::string& path, EntityType type);
  static Gazetteer load(const std::string& path, EntityType type, std::string name);
  static Gazetteer from_entries(std::string name, EntityType type,
                                std::span<const std::vector<std::string>> entries);

  void add_entry(std::span<const std::string> tokens);

  const std::string& name() const { return name_; }
  EntityType type() const { return type_; }
  size_t size() const { return entry_count_; }

  /// Length of the longest entry matching tokens[start..], 0 if none.
  size_t longest_match(std::span<const Token> tokens, size_t start) const;

  bool contains(std::span<const std::string> tokens) const;

  /// Token-level membership, used both as a rule predicate and for the
  /// partial-match CRF features.
  bool is_single_token_entry(std::string_view surface) const {
    return full_.count(std::string(surface)) > 0;
  }
  bool is_entry_prefix_token(std::string_view surface) const {
    return prefix_.count(std::string(surface)) > 0;
  }
  bool is_entry_internal_token(std::string_view surface) const {
    return internal_.count(std::string(surface)) > 0;
  }

  /// All entries, sorted; for dump/round-trip checks.
  std::vector<std::vector<std::string>> entries() const;

 private:
  struct Node {
    std::map<std::string, int, std::less<>> next;
    bool final = false;
  };

  std::string name_;
  EntityType type_;
  std::vector<Node> nodes_;  // nodes_[0] is the root
  size_t entry_count_ = 0;
  std::set<std::string, std::less<>> full_;      // single-token entries
  std::set<std::string, std::less<>> prefix_;    // first token of multi-token entries
  std::set<std::string, std::less<>> internal_;  // later tokens of multi-token entries
};

/// List-based tagging: left-to-right maximal munch over all gazetteers.
/// Equal-length matches of different types are broken by EntityType order.
std::vector<EntitySpan> exact_match_spans(const Sentence& sentence,
                                          std::span<const Gazetteer> gazetteers);

struct PartialFlags {
  bool full = false;      // token alone is an entry
  bool prefix = false;    // token starts some multi-token entry
  bool internal = false;  // token occurs inside some multi-token entry
};

/// Per-type flags, OR-ed over all gazetteers of each type.
std::array<PartialFlags, kNumEntityTypes> partial_match_features(
    const Token& token, std::span<const Gazetteer> gazetteers);

}  // namespace ner

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ner {

// ---------------------------------------------------------------------------
// Entity types and IOB2 tags
// ---------------------------------------------------------------------------

/// The seven entity classes: person, location, organization, date, time,
/// percent, currency. The enum order is also the tie-break order used by
/// list matching and the order of label columns in reports.
enum class EntityType : uint8_t { PER, LOC, ORG, DAT, TIM, PCT, MON };

inline constexpr int kNumEntityTypes = 7;

std::string_view to_string(EntityType t);
std::optional<EntityType> parse_entity_type(std::string_view s);
std::span<const EntityType> all_entity_types();

/// One IOB2 label: O, B-XXX or I-XXX.
struct Tag {
  enum class Kind : uint8_t { O, B, I };

  Kind kind = Kind::O;
  EntityType type = EntityType::PER;  // meaningful only when kind != O

  static Tag o() { return {}; }
  static Tag b(EntityType t) { return {Kind::B, t}; }
  static Tag i(EntityType t) { return {Kind::I, t}; }

  bool is_o() const { return kind == Kind::O; }
  bool is_b() const { return kind == Kind::B; }
  bool is_i() const { return kind == Kind::I; }

  friend bool operator==(const Tag& a, const Tag& b) {
    if (a.kind != b.kind) return false;
    return a.kind == Kind::O || a.type == b.type;
  }

  std::string str() const;
  static std::optional<Tag> parse(std::string_view s);
};

// ---------------------------------------------------------------------------
// Corpus data
// ---------------------------------------------------------------------------

/// One token with its externally supplied annotations. The surface form is
/// non-empty and contains no whitespace; the other columns come from the
/// upstream preprocessor and are treated as opaque strings.
struct Token {
  std::string surface;
  std::string lemma;
  std::string pos;
  std::string chunk;
};

struct Sentence {
  std::vector<Token> tokens;
  std::vector<Tag> gold_tags;  // empty, or one tag per token

  bool has_gold() const { return !gold_tags.empty(); }
  size_t size() const { return tokens.size(); }
};

struct DocMeta {
  std::string source;
  std::string topic;
  int64_t timestamp = 0;
  bool present = false;
};

struct Document {
  std::string id;
  std::vector<Sentence> sentences;
  DocMeta meta;
};

/// Typed half-open token span within one sentence.
struct EntitySpan {
  int sentence = 0;
  int start = 0;  // inclusive
  int end = 0;    // exclusive
  EntityType type = EntityType::PER;

  int length() const { return end - start; }
  friend auto operator<=>(const EntitySpan&, const EntitySpan&) = default;
};

// ---------------------------------------------------------------------------
// IOB2 codec
// ---------------------------------------------------------------------------

/// Spans -> tags. Spans must be sorted by start, non-overlapping and within
/// [0, sentence_len); throws DataError naming the offending span otherwise.
std::vector<Tag> encode_iob(std::span<const EntitySpan> spans, int sentence_len);

/// Tags -> spans (sentence index 0). Throws DataError naming the first
/// offending token index if the sequence is not valid IOB2.
std::vector<EntitySpan> decode_iob(std::span<const Tag> tags);

/// True if tags form a valid IOB2 sequence; on failure *bad_index (when
/// given) is the first offending position.
bool valid_iob(std::span<const Tag> tags, int* bad_index = nullptr);

/// Makes any tag sequence valid IOB2: an I-X that does not continue a
/// B-X/I-X of the same type becomes B-X. Identity on valid input.
std::vector<Tag> repair_iob(std::span<const Tag> tags);

// ---------------------------------------------------------------------------
// Column file I/O
// ---------------------------------------------------------------------------
//
// UTF-8, one token per line, TAB-separated columns
//   surface  lemma  pos  chunk  [tag]
// Sentences are separated by one blank line. A document starts with a line
//   -DOCSTART- <id>
// optionally followed by a comment line
//   # source=... topic=... time=...
// The tag column may be absent (untagged input). A file that begins directly
// with token lines gets one implicit document with id "doc1".

struct ReadOptions {
  /// Reject gold tag sequences that are not valid IOB2. Turned off by the
  /// kappa path, which compares raw per-token annotations.
  bool validate_iob = true;
};

std::vector<Document> read_column_file(const std::string& path, ReadOptions opts = {});
std::vector<Document> parse_column_text(std::string_view text, std::string_view origin,
                                        ReadOptions opts = {});
void write_column_file(std::span<const Document> docs, const std::string& path);
std::string format_column_text(std::span<const Document> docs);

// ---------------------------------------------------------------------------
// Corpus statistics
// ---------------------------------------------------------------------------

struct TypeStats {
  long entities = 0;         // decoded spans of this type
  long tokens = 0;           // tokens covered by those spans
  long unique_entities = 0;  // distinct surface strings (tokens joined by one space)
};

struct CorpusStats {
  std::array<TypeStats, kNumEntityTypes> per_type{};
  long documents = 0;
  long sentences = 0;
  long tokens = 0;
  long entity_tokens = 0;
  long entities = 0;
  long unique_entities = 0;  // sum of per-type unique counts
};

/// Requires gold tags on every sentence; throws DataError otherwise.
CorpusStats corpus_stats(std::span<const Document> docs);

}  // namespace ner

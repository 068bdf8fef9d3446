#include "ner/corpus.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ner/error.hpp"
#include "ner/text.hpp"

namespace ner {

// --- text helpers -----------------------------------------------------------

size_t utf8_length(std::string_view s) {
  size_t n = 0;
  for (size_t i = 0; i < s.size(); i += utf8_seq_len(static_cast<unsigned char>(s[i]))) ++n;
  return n;
}

std::vector<std::string> utf8_chars(std::string_view s) {
  std::vector<std::string> out;
  for (size_t i = 0; i < s.size();) {
    size_t len = utf8_seq_len(static_cast<unsigned char>(s[i]));
    if (i + len > s.size()) len = s.size() - i;
    out.emplace_back(s.substr(i, len));
    i += len;
  }
  return out;
}

std::string utf8_prefix(std::string_view s, size_t n) {
  size_t i = 0, taken = 0;
  while (i < s.size() && taken < n) {
    i += utf8_seq_len(static_cast<unsigned char>(s[i]));
    ++taken;
  }
  return std::string(s.substr(0, std::min(i, s.size())));
}

std::string utf8_suffix(std::string_view s, size_t n) {
  const size_t total = utf8_length(s);
  if (n >= total) return std::string(s);
  size_t skip = total - n, i = 0;
  while (skip > 0 && i < s.size()) {
    i += utf8_seq_len(static_cast<unsigned char>(s[i]));
    --skip;
  }
  return std::string(s.substr(i));
}

bool contains_whitespace(std::string_view s) {
  return s.find_first_of(" \t\r\n\f\v") != std::string_view::npos;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string> split_char(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t p = s.find(sep, start);
    if (p == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, p - start));
    start = p + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// --- entity types and tags ---------------------------------------------------

namespace {
constexpr std::array<EntityType, kNumEntityTypes> kTypes = {
    EntityType::PER, EntityType::LOC, EntityType::ORG, EntityType::DAT,
    EntityType::TIM, EntityType::PCT, EntityType::MON};
constexpr std::array<std::string_view, kNumEntityTypes> kTypeNames = {
    "PER", "LOC", "ORG", "DAT", "TIM", "PCT", "MON"};
}  // namespace

std::string_view to_string(EntityType t) { return kTypeNames[static_cast<size_t>(t)]; }

std::optional<EntityType> parse_entity_type(std::string_view s) {
  for (size_t i = 0; i < kTypeNames.size(); ++i)
    if (s == kTypeNames[i]) return kTypes[i];
  return std::nullopt;
}

std::span<const EntityType> all_entity_types() { return kTypes; }

std::string Tag::str() const {
  switch (kind) {
    case Kind::O: return "O";
    case Kind::B: return "B-" + std::string(to_string(type));
    case Kind::I: return "I-" + std::string(to_string(type));
  }
  return "O";
}

std::optional<Tag> Tag::parse(std::string_view s) {
  if (s == "O") return Tag::o();
  if (s.size() >= 2 && (s[0] == 'B' || s[0] == 'I') && s[1] == '-') {
    auto t = parse_entity_type(s.substr(2));
    if (!t) return std::nullopt;
    return s[0] == 'B' ? Tag::b(*t) : Tag::i(*t);
  }
  return std::nullopt;
}

// --- IOB2 codec --------------------------------------------------------------

namespace {
std::string span_desc(const EntitySpan& s) {
  std::ostringstream os;
  os << to_string(s.type) << "[" << s.start << "," << s.end << ")";
  return os.str();
}
}  // namespace

std::vector<Tag> encode_iob(std::span<const EntitySpan> spans, int sentence_len) {
  std::vector<Tag> tags(static_cast<size_t>(sentence_len), Tag::o());
  int prev_end = 0;
  for (const EntitySpan& s : spans) {
    if (s.start < 0 || s.end > sentence_len || s.start >= s.end)
      throw DataError("encode_iob: span out of bounds: " + span_desc(s) +
                      " in sentence of length " + std::to_string(sentence_len));
    if (s.start < prev_end)
      throw DataError("encode_iob: span overlaps or is out of order: " + span_desc(s));
    prev_end = s.end;
    tags[static_cast<size_t>(s.start)] = Tag::b(s.type);
    for (int i = s.start + 1; i < s.end; ++i) tags[static_cast<size_t>(i)] = Tag::i(s.type);
  }
  return tags;
}

bool valid_iob(std::span<const Tag> tags, int* bad_index) {
  for (size_t i = 0; i < tags.size(); ++i) {
    if (!tags[i].is_i()) continue;
    const bool continues = i > 0 && !tags[i - 1].is_o() && tags[i - 1].type == tags[i].type;
    if (!continues) {
      if (bad_index) *bad_index = static_cast<int>(i);
      return false;
    }
  }
  return true;
}

std::vector<EntitySpan> decode_iob(std::span<const Tag> tags) {
  int bad = -1;
  if (!valid_iob(tags, &bad))
    throw DataError("decode_iob: invalid IOB2 sequence at token index " + std::to_string(bad));
  std::vector<EntitySpan> spans;
  for (size_t i = 0; i < tags.size();) {
    if (!tags[i].is_b()) {
      ++i;
      continue;
    }
    size_t j = i + 1;
    while (j < tags.size() && tags[j].is_i()) ++j;
    spans.push_back({0, static_cast<int>(i), static_cast<int>(j), tags[i].type});
    i = j;
  }
  return spans;
}

std::vector<Tag> repair_iob(std::span<const Tag> tags) {
  std::vector<Tag> out(tags.begin(), tags.end());
  for (size_t i = 0; i < out.size(); ++i) {
    if (!out[i].is_i()) continue;
    const bool continues = i > 0 && !out[i - 1].is_o() && out[i - 1].type == out[i].type;
    if (!continues) out[i].kind = Tag::Kind::B;
  }
  return out;
}

// --- column file I/O ---------------------------------------------------------

namespace {

constexpr std::string_view kDocStart = "-DOCSTART-";

struct Loc {
  std::string_view origin;
  size_t line = 0;
  std::string str() const { return std::string(origin) + ":" + std::to_string(line); }
};

[[noreturn]] void fail(const Loc& loc, const std::string& what) {
  throw DataError(loc.str() + ": " + what);
}

// "# source=... topic=... time=..." meta line; keys may appear in any order.
bool parse_meta_line(std::string_view line, DocMeta& meta, const Loc& loc) {
  std::string_view body = trim(line.substr(1));
  if (body.find('=') == std::string_view::npos) return false;  // plain comment
  DocMeta m;
  for (const std::string& field : split_ws(body)) {
    const size_t eq = field.find('=');
    if (eq == std::string::npos) return false;
    const std::string key = field.substr(0, eq);
    const std::string val = field.substr(eq + 1);
    if (key == "source") {
      m.source = val;
    } else if (key == "topic") {
      m.topic = val;
    } else if (key == "time") {
      try {
        m.timestamp = std::stoll(val);
      } catch (const std::exception&) {
        fail(loc, "bad time value '" + val + "'");
      }
    } else {
      fail(loc, "unknown meta key '" + key + "'");
    }
  }
  m.present = true;
  meta = m;
  return true;
}

}  // namespace

std::vector<Document> parse_column_text(std::string_view text, std::string_view origin,
                                        ReadOptions opts) {
  std::vector<Document> docs;
  std::set<std::string> seen_ids;
  Sentence cur_sentence;
  std::vector<Tag> cur_tags;
  bool doc_open = false;
  bool after_docstart = false;  // meta line only allowed right here
  int file_columns = 0;         // 4 or 5, fixed by first token line
  Loc loc{origin, 0};

  auto open_doc = [&](std::string id, const Loc& where) {
    if (!seen_ids.insert(id).second) fail(where, "duplicate document id '" + id + "'");
    docs.push_back(Document{std::move(id), {}, {}});
    doc_open = true;
  };

  auto flush_sentence = [&](const Loc& where) {
    if (cur_sentence.tokens.empty()) return;
    if (file_columns == 5) {
      if (opts.validate_iob) {
        int bad = -1;
        if (!valid_iob(cur_tags, &bad))
          fail({where.origin, where.line - (cur_tags.size() - static_cast<size_t>(bad))},
               "invalid IOB2 tag sequence (offending tag at sentence position " +
                   std::to_string(bad) + ")");
      }
      cur_sentence.gold_tags = std::move(cur_tags);
    }
    if (!doc_open) open_doc("doc1", where);
    docs.back().sentences.push_back(std::move(cur_sentence));
    cur_sentence = {};
    cur_tags.clear();
  };

  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                          : nl - pos);
    const bool last = nl == std::string_view::npos;
    ++loc.line;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      flush_sentence(loc);
      after_docstart = false;
    } else if (line.substr(0, kDocStart.size()) == kDocStart) {
      flush_sentence(loc);
      std::string_view rest = trim(line.substr(kDocStart.size()));
      if (rest.empty()) fail(loc, "missing document id after -DOCSTART-");
      open_doc(std::string(rest), loc);
      after_docstart = true;
    } else if (line.front() == '#') {
      if (after_docstart && doc_open && docs.back().sentences.empty()) {
        DocMeta meta;
        if (parse_meta_line(line, meta, loc)) docs.back().meta = meta;
      }
      // otherwise: plain comment, skipped
    } else {
      after_docstart = false;
      const std::vector<std::string> cols = split_char(line, '\t');
      if (cols.size() != 4 && cols.size() != 5)
        fail(loc, "expected 4 or 5 TAB-separated columns, got " + std::to_string(cols.size()));
      if (file_columns == 0) file_columns = static_cast<int>(cols.size());
      if (static_cast<int>(cols.size()) != file_columns)
        fail(loc, "inconsistent column count (" + std::to_string(cols.size()) + " vs " +
                      std::to_string(file_columns) + " earlier)");
      if (cols[0].empty()) fail(loc, "empty surface form");
      if (contains_whitespace(cols[0])) fail(loc, "surface form contains whitespace");
      cur_sentence.tokens.push_back(Token{cols[0], cols[1], cols[2], cols[3]});
      if (file_columns == 5) {
        auto tag = Tag::parse(cols[4]);
        if (!tag) fail(loc, "unparsable tag '" + cols[4] + "'");
        cur_tags.push_back(*tag);
      }
    }

    if (last) break;
    pos = nl + 1;
  }
  flush_sentence(loc);
  return docs;
}

std::vector<Document> read_column_file(const std::string& path, ReadOptions opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_column_text(buf.str(), path, opts);
}

std::string format_column_text(std::span<const Document> docs) {
  std::ostringstream out;
  for (const Document& doc : docs) {
    out << kDocStart << " " << doc.id << "\n";
    if (doc.meta.present)
      out << "# source=" << doc.meta.source << " topic=" << doc.meta.topic
          << " time=" << doc.meta.timestamp << "\n";
    for (const Sentence& sent : doc.sentences) {
      if (sent.has_gold() && sent.gold_tags.size() != sent.tokens.size())
        throw DataError("document '" + doc.id + "': gold tag count does not match token count");
      for (size_t i = 0; i < sent.tokens.size(); ++i) {
        const Token& t = sent.tokens[i];
        if (t.surface.empty() || contains_whitespace(t.surface))
          throw DataError("document '" + doc.id + "': bad surface form '" + t.surface + "'");
        out << t.surface << '\t' << t.lemma << '\t' << t.pos << '\t' << t.chunk;
        if (sent.has_gold()) out << '\t' << sent.gold_tags[i].str();
        out << "\n";
      }
      out << "\n";
    }
  }
  return out.str();
}

void write_column_file(std::span<const Document> docs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << format_column_text(docs);
  if (!out) throw DataError("write failed for '" + path + "'");
}

// --- corpus statistics -------------------------------------------------------

CorpusStats corpus_stats(std::span<const Document> docs) {
  CorpusStats stats;
  std::array<std::set<std::string>, kNumEntityTypes> unique;
  for (const Document& doc : docs) {
    ++stats.documents;
    for (const Sentence& sent : doc.sentences) {
      ++stats.sentences;
      stats.tokens += static_cast<long>(sent.size());
      if (!sent.has_gold())
        throw DataError("corpus_stats: document '" + doc.id + "' has an untagged sentence");
      for (const EntitySpan& span : decode_iob(sent.gold_tags)) {
        TypeStats& ts = stats.per_type[static_cast<size_t>(span.type)];
        ++ts.entities;
        ts.tokens += span.length();
        std::string surface;
        for (int i = span.start; i < span.end; ++i) {
          if (i > span.start) surface += ' ';
          surface += sent.tokens[static_cast<size_t>(i)].surface;
        }
        unique[static_cast<size_t>(span.type)].insert(std::move(surface));
      }
    }
  }
  for (size_t i = 0; i < kNumEntityTypes; ++i) {
    stats.per_type[i].unique_entities = static_cast<long>(unique[i].size());
    stats.entities += stats.per_type[i].entities;
    stats.entity_tokens += stats.per_type[i].tokens;
    stats.unique_entities += stats.per_type[i].unique_entities;
  }
  return stats;
}

}  // namespace ner

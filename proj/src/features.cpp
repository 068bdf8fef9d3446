#include <unordered_map>

#include "ner/crf.hpp"
#include "ner/error.hpp"
#include "ner/text.hpp"

namespace ner {

namespace {

const std::string kBos = "<BOS>";
const std::string kEos = "<EOS>";

// Window feature over one annotation column at offsets -1, 0, +1.
void add_window(std::vector<std::string>& out, const char* family, const Sentence& s, int i,
                const std::string Token::* column) {
  const int n = static_cast<int>(s.size());
  for (int off = -1; off <= 1; ++off) {
    const char* slot = off < 0 ? "-1" : (off == 0 ? "0" : "+1");
    const int j = i + off;
    const std::string& value =
        j < 0 ? kBos : (j >= n ? kEos : s.tokens[static_cast<size_t>(j)].*column);
    out.push_back(std::string(family) + "[" + slot + "]=" + value);
  }
}

}  // namespace

std::vector<std::string> extract_features(const Sentence& sentence, int i,
                                          const FeatureConfig& cfg,
                                          std::span<const Gazetteer> gazetteers) {
  if (i < 0 || static_cast<size_t>(i) >= sentence.size())
    throw DataError("extract_features: token index " + std::to_string(i) + " out of range");
  std::vector<std::string> out;
  if (cfg.words) add_window(out, "w", sentence, i, &Token::surface);
  if (cfg.lemmas) add_window(out, "lem", sentence, i, &Token::lemma);
  if (cfg.pos) add_window(out, "pos", sentence, i, &Token::pos);
  if (cfg.chunk) add_window(out, "chk", sentence, i, &Token::chunk);

  const Token& tok = sentence.tokens[static_cast<size_t>(i)];
  if (cfg.affixes) {
    const int cap = std::clamp(cfg.affix_max, 1, 6);
    const size_t len = utf8_length(tok.surface);
    for (int n = 1; n <= cap && static_cast<size_t>(n) <= len; ++n) {
      out.push_back("pre" + std::to_string(n) + "=" +
                    utf8_prefix(tok.surface, static_cast<size_t>(n)));
      out.push_back("suf" + std::to_string(n) + "=" +
                    utf8_suffix(tok.surface, static_cast<size_t>(n)));
    }
  }

  if (cfg.gazetteers && !gazetteers.empty()) {
    const auto flags = partial_match_features(tok, gazetteers);
    for (EntityType t : all_entity_types()) {
      const PartialFlags& f = flags[static_cast<size_t>(t)];
      const std::string prefix = "gaz:" + std::string(to_string(t)) + ":";
      if (f.full) out.push_back(prefix + "full");
      if (f.prefix) out.push_back(prefix + "pre");
      if (f.internal) out.push_back(prefix + "int");
    }
  }
  return out;
}

int FeatureIndex::intern(const std::string& name) {
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  if (frozen_) throw DataError("feature index is frozen; cannot intern '" + name + "'");
  const int id = static_cast<int>(names_.size());
  names_.push_back(name);
  ids_.emplace(name, id);
  return id;
}

std::optional<int> FeatureIndex::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

}  // namespace ner

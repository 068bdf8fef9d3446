#include "ner/gazetteer.hpp"

#include <fstream>
#include <sstream>

#include "ner/error.hpp"
#include "ner/text.hpp"

namespace ner {

Gazetteer Gazetteer::load(const std::string& path, EntityType type) {
  std::string stem = path;
  if (const size_t slash = stem.find_last_of('/'); slash != std::string::npos)
    stem = stem.substr(slash + 1);
  if (const size_t dot = stem.find_last_of('.'); dot != std::string::npos && dot > 0)
    stem = stem.substr(0, dot);
  return load(path, type, stem);
}

Gazetteer Gazetteer::load(const std::string& path, EntityType type, std::string name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open gazetteer '" + path + "'");
  Gazetteer gaz(std::move(name), type);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    gaz.add_entry(split_ws(body));
  }
  return gaz;
}

Gazetteer Gazetteer::from_entries(std::string name, EntityType type,
                                  std::span<const std::vector<std::string>> entries) {
  Gazetteer gaz(std::move(name), type);
  for (const auto& e : entries) gaz.add_entry(e);
  return gaz;
}

void Gazetteer::add_entry(std::span<const std::string> tokens) {
  if (tokens.empty()) return;
  int node = 0;
  for (const std::string& tok : tokens) {
    auto it = nodes_[static_cast<size_t>(node)].next.find(tok);
    if (it == nodes_[static_cast<size_t>(node)].next.end()) {
      const int fresh = static_cast<int>(nodes_.size());
      nodes_[static_cast<size_t>(node)].next.emplace(tok, fresh);
      nodes_.emplace_back();
      node = fresh;
    } else {
      node = it->second;
    }
  }
  if (nodes_[static_cast<size_t>(node)].final) return;  // duplicate line
  nodes_[static_cast<size_t>(node)].final = true;
  ++entry_count_;
  if (tokens.size() == 1) {
    full_.insert(tokens[0]);
  } else {
    prefix_.insert(tokens[0]);
    for (size_t i = 1; i < tokens.size(); ++i) internal_.insert(tokens[i]);
  }
}

size_t Gazetteer::longest_match(std::span<const Token> tokens, size_t start) const {
  size_t best = 0;
  int node = 0;
  for (size_t i = start; i < tokens.size(); ++i) {
    auto it = nodes_[static_cast<size_t>(node)].next.find(tokens[i].surface);
    if (it == nodes_[static_cast<size_t>(node)].next.end()) break;
    node = it->second;
    if (nodes_[static_cast<size_t>(node)].final) best = i - start + 1;
  }
  return best;
}

bool Gazetteer::contains(std::span<const std::string> tokens) const {
  int node = 0;
  for (const std::string& tok : tokens) {
    auto it = nodes_[static_cast<size_t>(node)].next.find(tok);
    if (it == nodes_[static_cast<size_t>(node)].next.end()) return false;
    node = it->second;
  }
  return nodes_[static_cast<size_t>(node)].final;
}

std::vector<std::vector<std::string>> Gazetteer::entries() const {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> path;
  // Iterative DFS keeping map order gives lexicographically sorted entries.
  struct Frame {
    int node;
    std::map<std::string, int, std::less<>>::const_iterator it;
  };
  std::vector<Frame> stack;
  stack.push_back({0, nodes_[0].next.begin()});
  if (nodes_[0].final) out.push_back({});
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.it == nodes_[static_cast<size_t>(top.node)].next.end()) {
      stack.pop_back();
      if (!path.empty()) path.pop_back();
      continue;
    }
    const auto [tok, child] = *top.it;
    ++top.it;
    path.push_back(tok);
    if (nodes_[static_cast<size_t>(child)].final) out.push_back(path);
    stack.push_back({child, nodes_[static_cast<size_t>(child)].next.begin()});
  }
  return out;
}

std::vector<EntitySpan> exact_match_spans(const Sentence& sentence,
                                          std::span<const Gazetteer> gazetteers) {
  std::vector<EntitySpan> spans;
  const std::span<const Token> tokens(sentence.tokens);
  size_t i = 0;
  while (i < tokens.size()) {
    size_t best_len = 0;
    EntityType best_type = EntityType::PER;
    for (const Gazetteer& gaz : gazetteers) {
      const size_t len = gaz.longest_match(tokens, i);
      if (len > best_len || (len == best_len && len > 0 && gaz.type() < best_type)) {
        best_len = len;
        best_type = gaz.type();
      }
    }
    if (best_len == 0) {
      ++i;
      continue;
    }
    spans.push_back({0, static_cast<int>(i), static_cast<int>(i + best_len), best_type});
    i += best_len;
  }
  return spans;
}

std::array<PartialFlags, kNumEntityTypes> partial_match_features(
    const Token& token, std::span<const Gazetteer> gazetteers) {
  std::array<PartialFlags, kNumEntityTypes> flags{};
  for (const Gazetteer& gaz : gazetteers) {
    PartialFlags& f = flags[static_cast<size_t>(gaz.type())];
    f.full = f.full || gaz.is_single_token_entry(token.surface);
    f.prefix = f.prefix || gaz.is_entry_prefix_token(token.surface);
    f.internal = f.internal || gaz.is_entry_internal_token(token.surface);
  }
  return flags;
}

}  // namespace ner

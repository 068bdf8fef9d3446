#include "ner/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "ner/error.hpp"
#include "ner/rng.hpp"

namespace ner {

namespace {

void check_aligned(std::span<const Document> gold, std::span<const Document> pred) {
  if (gold.size() != pred.size())
    throw DataError("eval: corpora differ in document count");
  for (size_t d = 0; d < gold.size(); ++d) {
    if (gold[d].sentences.size() != pred[d].sentences.size())
      throw DataError("eval: document '" + gold[d].id + "' differs in sentence count");
    for (size_t s = 0; s < gold[d].sentences.size(); ++s) {
      const Sentence& gs = gold[d].sentences[s];
      const Sentence& ps = pred[d].sentences[s];
      if (gs.size() != ps.size())
        throw DataError("eval: document '" + gold[d].id + "' sentence " + std::to_string(s) +
                        " differs in token count");
      for (size_t t = 0; t < gs.tokens.size(); ++t)
        if (gs.tokens[t].surface != ps.tokens[t].surface)
          throw DataError("eval: document '" + gold[d].id + "' sentence " + std::to_string(s) +
                          " token " + std::to_string(t) + " differs ('" + gs.tokens[t].surface +
                          "' vs '" + ps.tokens[t].surface + "')");
      if (!gs.has_gold() || !ps.has_gold())
        throw DataError("eval: document '" + gold[d].id + "' sentence " + std::to_string(s) +
                        " is missing tags");
    }
  }
}

}  // namespace

EvalResult entity_prf(std::span<const Document> gold, std::span<const Document> pred) {
  check_aligned(gold, pred);
  EvalResult result;
  for (size_t d = 0; d < gold.size(); ++d) {
    for (size_t s = 0; s < gold[d].sentences.size(); ++s) {
      const std::vector<EntitySpan> gspans = decode_iob(gold[d].sentences[s].gold_tags);
      const std::vector<EntitySpan> pspans = decode_iob(pred[d].sentences[s].gold_tags);
      std::set<EntitySpan> gset(gspans.begin(), gspans.end());
      for (const EntitySpan& span : gspans)
        ++result.per_type[static_cast<size_t>(span.type)].gold;
      for (const EntitySpan& span : pspans) {
        PrfCounts& c = result.per_type[static_cast<size_t>(span.type)];
        ++c.pred;
        if (gset.count(span)) ++c.tp;
      }
    }
  }
  for (const PrfCounts& c : result.per_type) {
    result.micro.tp += c.tp;
    result.micro.pred += c.pred;
    result.micro.gold += c.gold;
  }
  return result;
}

// --- confusion ---------------------------------------------------------------

namespace {
int collapse(const Tag& t) {
  return t.is_o() ? kNumEntityTypes : static_cast<int>(t.type);
}
std::string class_name(int c) {
  return c == kNumEntityTypes ? "O" : std::string(to_string(static_cast<EntityType>(c)));
}
}  // namespace

long Confusion::total() const {
  long n = 0;
  for (const auto& row : counts) n = std::accumulate(row.begin(), row.end(), n);
  return n;
}

std::string Confusion::tsv() const {
  std::ostringstream out;
  out << "pred\\gold";
  for (int c = 0; c < kClasses; ++c) out << '\t' << class_name(c);
  out << '\n';
  for (int r = 0; r < kClasses; ++r) {
    out << class_name(r);
    for (int c = 0; c < kClasses; ++c) out << '\t' << counts[static_cast<size_t>(r)][static_cast<size_t>(c)];
    out << '\n';
  }
  return out.str();
}

std::string Confusion::column_normalized_tsv() const {
  std::array<long, kClasses> col_sum{};
  for (int r = 0; r < kClasses; ++r)
    for (int c = 0; c < kClasses; ++c)
      col_sum[static_cast<size_t>(c)] += counts[static_cast<size_t>(r)][static_cast<size_t>(c)];
  std::ostringstream out;
  out << "pred\\gold";
  for (int c = 0; c < kClasses; ++c) out << '\t' << class_name(c);
  out << '\n';
  for (int r = 0; r < kClasses; ++r) {
    out << class_name(r);
    for (int c = 0; c < kClasses; ++c) {
      const long denom = col_sum[static_cast<size_t>(c)];
      const double v =
          denom == 0 ? 0.0
                     : static_cast<double>(counts[static_cast<size_t>(r)][static_cast<size_t>(c)]) /
                           static_cast<double>(denom);
      char buf[16];
      std::snprintf(buf, sizeof buf, "%.4f", v);
      out << '\t' << buf;
    }
    out << '\n';
  }
  return out.str();
}

Confusion token_confusion(std::span<const Tag> gold, std::span<const Tag> pred) {
  if (gold.size() != pred.size())
    throw DataError("token_confusion: tag sequences differ in length");
  Confusion m;
  for (size_t i = 0; i < gold.size(); ++i)
    ++m.counts[static_cast<size_t>(collapse(pred[i]))][static_cast<size_t>(collapse(gold[i]))];
  return m;
}

Confusion token_confusion(std::span<const Document> gold, std::span<const Document> pred) {
  check_aligned(gold, pred);
  Confusion m;
  for (size_t d = 0; d < gold.size(); ++d)
    for (size_t s = 0; s < gold[d].sentences.size(); ++s) {
      const Confusion part =
          token_confusion(gold[d].sentences[s].gold_tags, pred[d].sentences[s].gold_tags);
      for (int r = 0; r < Confusion::kClasses; ++r)
        for (int c = 0; c < Confusion::kClasses; ++c)
          m.counts[static_cast<size_t>(r)][static_cast<size_t>(c)] +=
              part.counts[static_cast<size_t>(r)][static_cast<size_t>(c)];
    }
  return m;
}

// --- agreement ---------------------------------------------------------------

Agreement agreement(std::span<const Tag> a, std::span<const Tag> b, AgreementMode mode,
                    bool collapse_types) {
  if (a.size() != b.size())
    throw DataError("agreement: annotations differ in length (" + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()) + ")");
  auto key = [collapse_types](const Tag& t) {
    return collapse_types ? std::to_string(collapse(t)) : t.str();
  };

  std::map<std::string, long> dist_a, dist_b;
  Agreement out;
  for (size_t i = 0; i < a.size(); ++i) {
    if (mode == AgreementMode::EntityUnion && a[i].is_o() && b[i].is_o()) continue;
    ++out.universe;
    const std::string ka = key(a[i]), kb = key(b[i]);
    if (ka != kb) ++out.disagreements;
    ++dist_a[ka];
    ++dist_b[kb];
  }
  if (out.universe == 0) {
    out.observed = 1.0;
    out.expected = 0.0;
    out.kappa = 1.0;
    return out;
  }
  out.observed = 1.0 - static_cast<double>(out.disagreements) / static_cast<double>(out.universe);
  double pe = 0.0;
  const double n = static_cast<double>(out.universe);
  for (const auto& [label, ca] : dist_a) {
    auto it = dist_b.find(label);
    if (it == dist_b.end()) continue;
    pe += (static_cast<double>(ca) / n) * (static_cast<double>(it->second) / n);
  }
  out.expected = pe;
  // Both raters constant on the same label: observed == expected == 1.
  out.kappa = pe >= 1.0 ? 1.0 : (out.observed - pe) / (1.0 - pe);
  return out;
}

// --- k-fold ------------------------------------------------------------------

std::vector<std::vector<int>> kfold_split(int num_docs, int k, uint64_t seed) {
  if (k < 1) throw DataError("kfold: k must be at least 1");
  if (k > num_docs)
    throw DataError("kfold: k=" + std::to_string(k) + " exceeds document count " +
                    std::to_string(num_docs));
  std::vector<int> order(static_cast<size_t>(num_docs));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<std::vector<int>> folds(static_cast<size_t>(k));
  const int base = num_docs / k;
  const int extra = num_docs % k;  // first `extra` folds get one more
  size_t pos = 0;
  for (int f = 0; f < k; ++f) {
    const int size = base + (f < extra ? 1 : 0);
    folds[static_cast<size_t>(f)].assign(order.begin() + static_cast<long>(pos),
                                         order.begin() + static_cast<long>(pos) + size);
    pos += static_cast<size_t>(size);
  }
  return folds;
}

// --- report ------------------------------------------------------------------

std::string report_table(const EvalResult& result, bool tsv) {
  // Column order follows the report convention: PER ORG LOC TIM DAT MON PCT.
  static constexpr std::array<EntityType, kNumEntityTypes> order = {
      EntityType::PER, EntityType::ORG, EntityType::LOC, EntityType::TIM,
      EntityType::DAT, EntityType::MON, EntityType::PCT};
  auto fmt = [](double v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"metric"};
  for (EntityType t : order) header.emplace_back(to_string(t));
  header.emplace_back("TOTAL");
  cells.push_back(std::move(header));
  const char* row_names[3] = {"precision", "recall", "f1"};
  for (int r = 0; r < 3; ++r) {
    std::vector<std::string> row{row_names[r]};
    for (EntityType t : order) {
      const PrfCounts& c = result.per_type[static_cast<size_t>(t)];
      row.push_back(fmt(r == 0 ? c.precision() : r == 1 ? c.recall() : c.f1()));
    }
    const PrfCounts& m = result.micro;
    row.push_back(fmt(r == 0 ? m.precision() : r == 1 ? m.recall() : m.f1()));
    cells.push_back(std::move(row));
  }

  std::ostringstream out;
  if (tsv) {
    for (const auto& row : cells) {
      for (size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << row[i];
      out << '\n';
    }
  } else {
    std::vector<size_t> width(cells[0].size(), 0);
    for (const auto& row : cells)
      for (size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    for (const auto& row : cells) {
      for (size_t i = 0; i < row.size(); ++i) {
        out << (i ? "  " : "");
        out << row[i] << std::string(width[i] - row[i].size(), ' ');
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace ner

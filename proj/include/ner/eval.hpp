#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "ner/corpus.hpp"

namespace ner {

// ---------------------------------------------------------------------------
// Entity-level precision / recall / F1
// ---------------------------------------------------------------------------

struct PrfCounts {
  long tp = 0;
  long pred = 0;  // predicted spans
  long gold = 0;  // gold spans

  double precision() const { return pred == 0 ? 0.0 : static_cast<double>(tp) / pred; }
  double recall() const { return gold == 0 ? 0.0 : static_cast<double>(tp) / gold; }
  double f1() const {
    const double p = precision(), r = recall();
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  }
};

struct EvalResult {
  std::array<PrfCounts, kNumEntityTypes> per_type{};
  PrfCounts micro;  // counts summed over all types
};

/// Exact-span, exact-type matching over aligned corpora (same documents,
/// sentences and surfaces). A span counts as TP only when (document,
/// sentence, start, end, type) all agree. 0/0 ratios are 0.
EvalResult entity_prf(std::span<const Document> gold, std::span<const Document> pred);

// ---------------------------------------------------------------------------
// Token-level confusion matrix
// ---------------------------------------------------------------------------

/// 8x8 over {7 entity types, O}; B-X/I-X collapse to X. Rows are predicted
/// labels, columns are gold labels; the total equals the token count.
struct Confusion {
  static constexpr int kClasses = kNumEntityTypes + 1;  // index 7 = O
  std::array<std::array<long, kClasses>, kClasses> counts{};

  long total() const;
  std::string tsv() const;
  /// Each column rescaled to sum 1 (empty columns stay 0).
  std::string column_normalized_tsv() const;
};

Confusion token_confusion(std::span<const Tag> gold, std::span<const Tag> pred);
Confusion token_confusion(std::span<const Document> gold, std::span<const Document> pred);

// ---------------------------------------------------------------------------
// Inter-annotator agreement
// ---------------------------------------------------------------------------

enum class AgreementMode {
  AllTokens,    // every aligned token pair
  EntityUnion,  // only tokens labeled non-O by at least one annotator
};

struct Agreement {
  long universe = 0;        // token pairs compared
  long disagreements = 0;
  double observed = 1.0;    // matching fraction
  double expected = 0.0;    // chance agreement from per-annotator marginals
  double kappa = 1.0;       // (observed - expected) / (1 - expected)
};

/// Tags are compared as full typed B/I strings; collapse_types compares
/// bare entity types instead (B-PER and I-PER become one label).
Agreement agreement(std::span<const Tag> a, std::span<const Tag> b, AgreementMode mode,
                    bool collapse_types = false);

// ---------------------------------------------------------------------------
// K-fold splitting
// ---------------------------------------------------------------------------

/// Partitions document indices 0..n-1 into k folds whose sizes differ by at
/// most one, via a seeded shuffle. Throws DataError when k < 1 or k > n.
std::vector<std::vector<int>> kfold_split(int num_docs, int k, uint64_t seed);

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

/// Per-type columns PER ORG LOC TIM DAT MON PCT plus TOTAL; rows precision,
/// recall, F1, rounded to two decimals.
std::string report_table(const EvalResult& result, bool tsv);

}  // namespace ner

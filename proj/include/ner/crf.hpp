#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ner/corpus.hpp"
#include "ner/gazetteer.hpp"

namespace ner {

// ---------------------------------------------------------------------------
// Generic linear-chain inference
// ---------------------------------------------------------------------------
// Scores are log-potentials:
//   score(y) = sum_t emit[t*L + y_t] + sum_{t>=1} trans[y_{t-1}*L + y_t]
// All dynamic programs run in log space.

/// log sum_y exp(score(y)) over all L^n label sequences.
double log_partition(int n, int num_labels, std::span<const double> emit,
                     std::span<const double> trans);

/// Per-position label marginals p(y_t = l), row-major n x L. Each row sums
/// to 1 up to round-off.
std::vector<double> label_marginals(int n, int num_labels, std::span<const double> emit,
                                    std::span<const double> trans);

/// Optional hard constraints for decoding: label l may start a sequence only
/// if start_allowed[l], and follow l' only if trans_allowed[l'*L + l].
struct TransitionMask {
  std::vector<uint8_t> start_allowed;
  std::vector<uint8_t> trans_allowed;
};

/// Argmax label sequence; ties broken toward the lowest label index.
std::vector<int> viterbi(int n, int num_labels, std::span<const double> emit,
                         std::span<const double> trans, const TransitionMask* mask = nullptr);

// ---------------------------------------------------------------------------
// Objective: L2-regularized conditional log-likelihood
// ---------------------------------------------------------------------------

/// One training sequence in indexed form: active feature ids per position
/// plus the gold label path.
struct IndexedSentence {
  std::vector<std::vector<int>> features;  // per position, deduplicated
  std::vector<int> labels;
};

/// Parameters are one flat vector: emission block [feature*L + label] of
/// size F*L, then the transition block [from*L + to] of size L*L.
struct Objective {
  int num_labels = 0;
  int num_features = 0;
  double sigma2 = 1.0;
  std::vector<IndexedSentence> data;

  size_t dim() const {
    return static_cast<size_t>(num_features) * num_labels +
           static_cast<size_t>(num_labels) * num_labels;
  }

  /// L(w) = sum_s log p(y_s | x_s) - ||w||^2 / (2 sigma2), with its exact
  /// gradient (empirical minus expected counts minus w/sigma2). Gradient
  /// accumulation runs in a fixed sentence order.
  double value_and_gradient(std::span<const double> w, std::span<double> grad) const;

  /// Emission scores for one sentence under w, row-major n x L.
  std::vector<double> emission_scores(const IndexedSentence& s, std::span<const double> w) const;
};

// ---------------------------------------------------------------------------
// Feature extraction
// ---------------------------------------------------------------------------

/// Which feature families are emitted. Window families cover offsets
/// {-1, 0, +1}; boundary offsets produce <BOS>/<EOS> values.
struct FeatureConfig {
  bool words = true;
  bool lemmas = true;
  bool pos = true;
  bool chunk = true;
  bool affixes = true;
  int affix_max = 6;  // character prefix/suffix length cap, 1..6 Unicode scalars
  bool gazetteers = true;
};

/// Emits the feature strings for one token position. Gazetteer flags come
/// from whatever lists are passed in; absent lists simply emit nothing.
std::vector<std::string> extract_features(const Sentence& sentence, int i,
                                          const FeatureConfig& cfg,
                                          std::span<const Gazetteer> gazetteers);

/// Bijection feature string <-> dense id. Ids are contiguous from 0 in
/// interning order; after freeze(), unknown strings map to nullopt.
class FeatureIndex {
 public:
  int intern(const std::string& name);
  std::optional<int> find(std::string_view name) const;
  size_t size() const { return names_.size(); }
  const std::string& name(int id) const { return names_[static_cast<size_t>(id)]; }
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> ids_;
  bool frozen_ = false;
};

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

struct Hyperparams {
  double sigma2 = 1.0;  // L2 variance; smaller means stronger regularization
  int max_iter = 200;
  double tol = 1e-4;  // gradient infinity-norm stop
  uint64_t seed = 0;
};

/// Trained linear-chain CRF over the fixed 15-label IOB2 set.
class CrfModel {
 public:
  static constexpr int kNumLabels = 1 + 2 * kNumEntityTypes;  // O + B/I per type

  /// Label order: O first, then B-X, I-X per entity type. O having index 0
  /// makes the zero-weight model decode to all-O under the tie rule.
  static const std::vector<Tag>& labels();
  static int label_index(const Tag& tag);

  FeatureConfig config;
  Hyperparams hyper;
  FeatureIndex features;
  std::vector<double> emit_w;   // F x L
  std::vector<double> trans_w;  // L x L

  /// Viterbi under hard IOB2 transition constraints; output is always valid
  /// IOB2 with no repair step.
  std::vector<Tag> decode(const Sentence& sentence, std::span<const Gazetteer> gazetteers) const;

  /// Unconstrained per-token label distributions, row-major n x 15.
  std::vector<double> marginals(const Sentence& sentence,
                                std::span<const Gazetteer> gazetteers) const;

  void save(const std::string& path) const;
  static CrfModel load(const std::string& path);

  std::vector<double> emission_scores(const Sentence& sentence,
                                      std::span<const Gazetteer> gazetteers) const;
  static const TransitionMask& iob_mask();
};

/// Public log-likelihood/gradient entry point over labeled sentences, as
/// used by the tests; train() drives the same objective internally.
std::pair<double, std::vector<double>> log_likelihood_and_gradient(
    const CrfModel& model, std::span<const Sentence> batch,
    std::span<const Gazetteer> gazetteers);

struct TrainOptions {
  FeatureConfig config;
  Hyperparams hyper;
  /// Called after every accepted optimizer step with (iteration, objective,
  /// gradient infinity-norm).
  std::function<void(int, double, double)> on_iteration;
  std::ostream* log = nullptr;
};

/// Batch L-BFGS over the full corpus from zero initial weights; throws
/// DataError on an empty corpus, warns (via opts.log) when the corpus
/// carries a single distinct label.
CrfModel train(std::span<const Document> corpus, const TrainOptions& opts,
               std::span<const Gazetteer> gazetteers);

// ---------------------------------------------------------------------------
// Optimizer (exposed for tests)
// ---------------------------------------------------------------------------

struct LbfgsOptions {
  int max_iter = 200;
  double tol = 1e-4;   // gradient infinity-norm
  int history = 10;
  std::function<void(int, double, double)> on_iteration;
};

/// Minimizes f via limited-memory BFGS with Armijo backtracking. Returns
/// the final function value; x holds the argmin. Accepted steps never
/// increase f.
double lbfgs_minimize(std::function<double(std::span<const double>, std::span<double>)> f,
                      std::vector<double>& x, const LbfgsOptions& opts);

}  // namespace ner

#include "ner/crf.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "ner/error.hpp"

namespace ner {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

// alpha[t*L + y] = log sum over paths ending at (t, y)
std::vector<double> forward(int n, int L, std::span<const double> emit,
                            std::span<const double> trans) {
  std::vector<double> alpha(static_cast<size_t>(n) * L);
  std::vector<double> buf(static_cast<size_t>(L));
  for (int y = 0; y < L; ++y) alpha[static_cast<size_t>(y)] = emit[static_cast<size_t>(y)];
  for (int t = 1; t < n; ++t) {
    for (int y = 0; y < L; ++y) {
      for (int p = 0; p < L; ++p)
        buf[static_cast<size_t>(p)] =
            alpha[static_cast<size_t>(t - 1) * L + p] + trans[static_cast<size_t>(p) * L + y];
      alpha[static_cast<size_t>(t) * L + y] =
          emit[static_cast<size_t>(t) * L + y] + log_sum_exp(buf);
    }
  }
  return alpha;
}

// beta[t*L + y] = log sum over path suffixes starting after (t, y)
std::vector<double> backward(int n, int L, std::span<const double> emit,
                             std::span<const double> trans) {
  std::vector<double> beta(static_cast<size_t>(n) * L, 0.0);
  std::vector<double> buf(static_cast<size_t>(L));
  for (int t = n - 2; t >= 0; --t) {
    for (int y = 0; y < L; ++y) {
      for (int q = 0; q < L; ++q)
        buf[static_cast<size_t>(q)] = trans[static_cast<size_t>(y) * L + q] +
                                      emit[static_cast<size_t>(t + 1) * L + q] +
                                      beta[static_cast<size_t>(t + 1) * L + q];
      beta[static_cast<size_t>(t) * L + y] = log_sum_exp(buf);
    }
  }
  return beta;
}

}  // namespace

double log_partition(int n, int L, std::span<const double> emit, std::span<const double> trans) {
  if (n == 0) return 0.0;
  const std::vector<double> alpha = forward(n, L, emit, trans);
  return log_sum_exp(std::span(alpha).subspan(static_cast<size_t>(n - 1) * L, L));
}

std::vector<double> label_marginals(int n, int L, std::span<const double> emit,
                                    std::span<const double> trans) {
  std::vector<double> out(static_cast<size_t>(n) * L, 0.0);
  if (n == 0) return out;
  const std::vector<double> alpha = forward(n, L, emit, trans);
  const std::vector<double> beta = backward(n, L, emit, trans);
  const double log_z = log_sum_exp(std::span(alpha).subspan(static_cast<size_t>(n - 1) * L, L));
  for (size_t i = 0; i < out.size(); ++i) out[i] = std::exp(alpha[i] + beta[i] - log_z);
  return out;
}

std::vector<int> viterbi(int n, int L, std::span<const double> emit,
                         std::span<const double> trans, const TransitionMask* mask) {
  if (n == 0) return {};
  std::vector<double> score(static_cast<size_t>(n) * L, kNegInf);
  std::vector<int> back(static_cast<size_t>(n) * L, -1);
  for (int y = 0; y < L; ++y) {
    if (mask && !mask->start_allowed[static_cast<size_t>(y)]) continue;
    score[static_cast<size_t>(y)] = emit[static_cast<size_t>(y)];
  }
  for (int t = 1; t < n; ++t) {
    for (int y = 0; y < L; ++y) {
      double best = kNegInf;
      int best_prev = -1;
      for (int p = 0; p < L; ++p) {
        if (mask && !mask->trans_allowed[static_cast<size_t>(p) * L + y]) continue;
        const double s =
            score[static_cast<size_t>(t - 1) * L + p] + trans[static_cast<size_t>(p) * L + y];
        if (s > best) {  // strict: ties keep the lowest previous label
          best = s;
          best_prev = p;
        }
      }
      if (best_prev < 0) continue;
      score[static_cast<size_t>(t) * L + y] = best + emit[static_cast<size_t>(t) * L + y];
      back[static_cast<size_t>(t) * L + y] = best_prev;
    }
  }
  int best_y = 0;
  double best = kNegInf;
  for (int y = 0; y < L; ++y) {
    const double s = score[static_cast<size_t>(n - 1) * L + y];
    if (s > best) {
      best = s;
      best_y = y;
    }
  }
  std::vector<int> path(static_cast<size_t>(n));
  path[static_cast<size_t>(n - 1)] = best_y;
  for (int t = n - 1; t > 0; --t)
    path[static_cast<size_t>(t - 1)] = back[static_cast<size_t>(t) * L + path[static_cast<size_t>(t)]];
  return path;
}

// --- objective ---------------------------------------------------------------

std::vector<double> Objective::emission_scores(const IndexedSentence& s,
                                               std::span<const double> w) const {
  const int L = num_labels;
  const size_t n = s.features.size();
  std::vector<double> emit(n * static_cast<size_t>(L), 0.0);
  for (size_t t = 0; t < n; ++t)
    for (int f : s.features[t]) {
      const double* row = w.data() + static_cast<size_t>(f) * L;
      double* dst = emit.data() + t * static_cast<size_t>(L);
      for (int y = 0; y < L; ++y) dst[y] += row[y];
    }
  return emit;
}

double Objective::value_and_gradient(std::span<const double> w, std::span<double> grad) const {
  const int L = num_labels;
  const size_t trans_off = static_cast<size_t>(num_features) * L;
  if (w.size() != dim() || grad.size() != dim())
    throw DataError("objective: parameter vector has wrong dimension");
  std::fill(grad.begin(), grad.end(), 0.0);
  const std::span<const double> trans = w.subspan(trans_off);
  double total = 0.0;

  for (const IndexedSentence& s : data) {
    const int n = static_cast<int>(s.features.size());
    if (n == 0) continue;
    if (s.labels.size() != s.features.size())
      throw DataError("objective: label/feature length mismatch");
    for (int y : s.labels)
      if (y < 0 || y >= L) throw DataError("objective: label outside model label set");

    const std::vector<double> emit = emission_scores(s, w);
    const std::vector<double> alpha = forward(n, L, emit, trans);
    const std::vector<double> beta = backward(n, L, emit, trans);
    const double log_z =
        log_sum_exp(std::span(alpha).subspan(static_cast<size_t>(n - 1) * L, L));

    // gold path score and empirical counts
    double path = 0.0;
    for (int t = 0; t < n; ++t) {
      const int y = s.labels[static_cast<size_t>(t)];
      path += emit[static_cast<size_t>(t) * L + y];
      for (int f : s.features[static_cast<size_t>(t)])
        grad[static_cast<size_t>(f) * L + y] += 1.0;
      if (t > 0) {
        const int p = s.labels[static_cast<size_t>(t - 1)];
        path += trans[static_cast<size_t>(p) * L + y];
        grad[trans_off + static_cast<size_t>(p) * L + y] += 1.0;
      }
    }
    total += path - log_z;

    // expected counts: node marginals for emissions
    for (int t = 0; t < n; ++t) {
      for (int y = 0; y < L; ++y) {
        const double m =
            std::exp(alpha[static_cast<size_t>(t) * L + y] + beta[static_cast<size_t>(t) * L + y] -
                     log_z);
        if (m == 0.0) continue;
        for (int f : s.features[static_cast<size_t>(t)])
          grad[static_cast<size_t>(f) * L + y] -= m;
      }
    }
    // pairwise marginals for transitions
    for (int t = 1; t < n; ++t) {
      for (int p = 0; p < L; ++p) {
        const double a = alpha[static_cast<size_t>(t - 1) * L + p];
        if (a == kNegInf) continue;
        for (int y = 0; y < L; ++y) {
          const double m = std::exp(a + trans[static_cast<size_t>(p) * L + y] +
                                    emit[static_cast<size_t>(t) * L + y] +
                                    beta[static_cast<size_t>(t) * L + y] - log_z);
          grad[trans_off + static_cast<size_t>(p) * L + y] -= m;
        }
      }
    }
  }

  // L2 penalty
  for (size_t i = 0; i < w.size(); ++i) {
    total -= w[i] * w[i] / (2.0 * sigma2);
    grad[i] -= w[i] / sigma2;
  }
  return total;
}

// --- L-BFGS ------------------------------------------------------------------

double lbfgs_minimize(std::function<double(std::span<const double>, std::span<double>)> f,
                      std::vector<double>& x, const LbfgsOptions& opts) {
  const size_t dim = x.size();
  const int m = opts.history;
  std::vector<std::vector<double>> s_hist, y_hist;
  std::vector<double> rho;

  std::vector<double> grad(dim), new_x(dim), new_grad(dim), dir(dim);
  double fx = f(x, grad);

  auto inf_norm = [](std::span<const double> v) {
    double m2 = 0.0;
    for (double a : v) m2 = std::max(m2, std::fabs(a));
    return m2;
  };
  auto dot = [](std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    if (inf_norm(grad) <= opts.tol) break;

    // two-loop recursion
    dir = grad;
    const int k = static_cast<int>(s_hist.size());
    std::vector<double> alpha_coef(static_cast<size_t>(k));
    for (int i = k - 1; i >= 0; --i) {
      alpha_coef[static_cast<size_t>(i)] = rho[static_cast<size_t>(i)] * dot(s_hist[static_cast<size_t>(i)], dir);
      for (size_t j = 0; j < dim; ++j)
        dir[j] -= alpha_coef[static_cast<size_t>(i)] * y_hist[static_cast<size_t>(i)][j];
    }
    if (k > 0) {
      const double yy = dot(y_hist.back(), y_hist.back());
      const double gamma = yy > 0 ? 1.0 / (rho.back() * yy) : 1.0;
      for (double& d : dir) d *= gamma;
    }
    for (int i = 0; i < k; ++i) {
      const double beta = rho[static_cast<size_t>(i)] * dot(y_hist[static_cast<size_t>(i)], dir);
      for (size_t j = 0; j < dim; ++j)
        dir[j] += (alpha_coef[static_cast<size_t>(i)] - beta) * s_hist[static_cast<size_t>(i)][j];
    }
    for (double& d : dir) d = -d;

    double descent = dot(grad, dir);
    if (descent >= 0) {  // not a descent direction; restart from steepest descent
      for (size_t j = 0; j < dim; ++j) dir[j] = -grad[j];
      descent = -dot(grad, grad);
      s_hist.clear();
      y_hist.clear();
      rho.clear();
    }

    // Armijo backtracking
    double step = 1.0;
    double new_f = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (size_t j = 0; j < dim; ++j) new_x[j] = x[j] + step * dir[j];
      new_f = f(new_x, new_grad);
      if (std::isfinite(new_f) && new_f <= fx + 1e-4 * step * descent) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    std::vector<double> s_vec(dim), y_vec(dim);
    for (size_t j = 0; j < dim; ++j) {
      s_vec[j] = new_x[j] - x[j];
      y_vec[j] = new_grad[j] - grad[j];
    }
    const double sy = dot(s_vec, y_vec);
    if (sy > 1e-12) {
      if (static_cast<int>(s_hist.size()) == m) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho.erase(rho.begin());
      }
      s_hist.push_back(std::move(s_vec));
      y_hist.push_back(std::move(y_vec));
      rho.push_back(1.0 / sy);
    }
    x.swap(new_x);
    grad.swap(new_grad);
    fx = new_f;
    if (opts.on_iteration) opts.on_iteration(iter + 1, fx, inf_norm(grad));
  }
  return fx;
}

// --- model -------------------------------------------------------------------

const std::vector<Tag>& CrfModel::labels() {
  static const std::vector<Tag> order = [] {
    std::vector<Tag> v;
    v.push_back(Tag::o());
    for (EntityType t : all_entity_types()) {
      v.push_back(Tag::b(t));
      v.push_back(Tag::i(t));
    }
    return v;
  }();
  return order;
}

int CrfModel::label_index(const Tag& tag) {
  if (tag.is_o()) return 0;
  const int base = 1 + 2 * static_cast<int>(tag.type);
  return tag.is_b() ? base : base + 1;
}

const TransitionMask& CrfModel::iob_mask() {
  static const TransitionMask mask = [] {
    TransitionMask m;
    const auto& labs = labels();
    const int L = kNumLabels;
    m.start_allowed.assign(static_cast<size_t>(L), 1);
    m.trans_allowed.assign(static_cast<size_t>(L) * L, 1);
    for (int y = 0; y < L; ++y) {
      if (!labs[static_cast<size_t>(y)].is_i()) continue;
      m.start_allowed[static_cast<size_t>(y)] = 0;
      for (int p = 0; p < L; ++p) {
        const Tag& prev = labs[static_cast<size_t>(p)];
        const bool ok = !prev.is_o() && prev.type == labs[static_cast<size_t>(y)].type;
        if (!ok) m.trans_allowed[static_cast<size_t>(p) * L + y] = 0;
      }
    }
    return m;
  }();
  return mask;
}

std::vector<double> CrfModel::emission_scores(const Sentence& sentence,
                                              std::span<const Gazetteer> gazetteers) const {
  const int n = static_cast<int>(sentence.size());
  const int L = kNumLabels;
  std::vector<double> emit(static_cast<size_t>(n) * L, 0.0);
  for (int t = 0; t < n; ++t) {
    for (const std::string& feat : extract_features(sentence, t, config, gazetteers)) {
      const auto id = features.find(feat);
      if (!id) continue;  // unseen feature: no weight
      const double* row = emit_w.data() + static_cast<size_t>(*id) * L;
      double* dst = emit.data() + static_cast<size_t>(t) * L;
      for (int y = 0; y < L; ++y) dst[y] += row[y];
    }
  }
  return emit;
}

std::vector<Tag> CrfModel::decode(const Sentence& sentence,
                                  std::span<const Gazetteer> gazetteers) const {
  const int n = static_cast<int>(sentence.size());
  if (n == 0) return {};
  const std::vector<double> emit = emission_scores(sentence, gazetteers);
  const std::vector<int> path = viterbi(n, kNumLabels, emit, trans_w, &iob_mask());
  std::vector<Tag> tags;
  tags.reserve(path.size());
  for (int y : path) tags.push_back(labels()[static_cast<size_t>(y)]);
  return tags;
}

std::vector<double> CrfModel::marginals(const Sentence& sentence,
                                        std::span<const Gazetteer> gazetteers) const {
  const int n = static_cast<int>(sentence.size());
  if (n == 0) return {};
  return label_marginals(n, kNumLabels, emission_scores(sentence, gazetteers), trans_w);
}

// --- training ----------------------------------------------------------------

namespace {

// Lookup against `index`, or intern new ids into `grow` when given.
IndexedSentence index_sentence(const Sentence& sent, const FeatureConfig& cfg,
                               std::span<const Gazetteer> gazetteers,
                               const FeatureIndex& index, FeatureIndex* grow) {
  IndexedSentence out;
  out.features.resize(sent.size());
  for (size_t t = 0; t < sent.size(); ++t) {
    std::vector<int>& ids = out.features[t];
    for (const std::string& feat :
         extract_features(sent, static_cast<int>(t), cfg, gazetteers)) {
      if (grow) {
        ids.push_back(grow->intern(feat));
      } else if (auto id = index.find(feat)) {
        ids.push_back(*id);
      }
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
  return out;
}

}  // namespace

std::pair<double, std::vector<double>> log_likelihood_and_gradient(
    const CrfModel& model, std::span<const Sentence> batch,
    std::span<const Gazetteer> gazetteers) {
  Objective obj;
  obj.num_labels = CrfModel::kNumLabels;
  obj.num_features = static_cast<int>(model.features.size());
  obj.sigma2 = model.hyper.sigma2;
  for (const Sentence& sent : batch) {
    if (!sent.has_gold())
      throw DataError("log_likelihood_and_gradient: sentence without gold tags");
    IndexedSentence is = index_sentence(sent, model.config, gazetteers, model.features, nullptr);
    for (const Tag& tag : sent.gold_tags) is.labels.push_back(CrfModel::label_index(tag));
    obj.data.push_back(std::move(is));
  }
  std::vector<double> w(obj.dim(), 0.0);
  std::copy(model.emit_w.begin(), model.emit_w.end(), w.begin());
  std::copy(model.trans_w.begin(), model.trans_w.end(),
            w.begin() + static_cast<long>(obj.num_features) * CrfModel::kNumLabels);
  std::vector<double> grad(obj.dim(), 0.0);
  const double value = obj.value_and_gradient(w, grad);
  return {value, std::move(grad)};
}

CrfModel train(std::span<const Document> corpus, const TrainOptions& opts,
               std::span<const Gazetteer> gazetteers) {
  CrfModel model;
  model.config = opts.config;
  model.hyper = opts.hyper;

  Objective obj;
  obj.num_labels = CrfModel::kNumLabels;
  obj.sigma2 = opts.hyper.sigma2;
  std::set<int> distinct_labels;
  for (const Document& doc : corpus) {
    for (const Sentence& sent : doc.sentences) {
      if (sent.size() == 0) continue;
      if (!sent.has_gold())
        throw DataError("train: document '" + doc.id + "' has an untagged sentence");
      int bad = -1;
      if (!valid_iob(sent.gold_tags, &bad))
        throw DataError("train: document '" + doc.id + "' has an invalid IOB2 sequence at " +
                        std::to_string(bad));
      IndexedSentence is =
          index_sentence(sent, opts.config, gazetteers, model.features, &model.features);
      for (const Tag& tag : sent.gold_tags) {
        const int y = CrfModel::label_index(tag);
        is.labels.push_back(y);
        distinct_labels.insert(y);
      }
      obj.data.push_back(std::move(is));
    }
  }
  if (obj.data.empty()) throw DataError("train: empty corpus");
  if (distinct_labels.size() < 2 && opts.log)
    *opts.log << "warning: training corpus uses a single label; model will be degenerate\n";
  model.features.freeze();
  obj.num_features = static_cast<int>(model.features.size());

  std::vector<double> w(obj.dim(), 0.0);
  LbfgsOptions lopts;
  lopts.max_iter = opts.hyper.max_iter;
  lopts.tol = opts.hyper.tol;
  lopts.on_iteration = [&](int iter, double f, double gnorm) {
    if (opts.log) *opts.log << "iter " << iter << "  objective " << -f << "  |grad| " << gnorm
                            << "\n";
    if (opts.on_iteration) opts.on_iteration(iter, -f, gnorm);
  };
  lbfgs_minimize(
      [&obj](std::span<const double> x, std::span<double> g) {
        const double v = obj.value_and_gradient(x, g);
        for (double& gi : g) gi = -gi;
        return -v;
      },
      w, lopts);

  const size_t trans_off = static_cast<size_t>(obj.num_features) * CrfModel::kNumLabels;
  model.emit_w.assign(w.begin(), w.begin() + static_cast<long>(trans_off));
  model.trans_w.assign(w.begin() + static_cast<long>(trans_off), w.end());
  return model;
}

// --- serialization -----------------------------------------------------------

namespace {

constexpr std::string_view kModelMagic = "ner-crf-model";
constexpr int kModelVersion = 1;

std::string hex(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double unhex(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw DataError(std::string("model file: bad number for ") + what + ": '" + s + "'");
  return v;
}

}  // namespace

void CrfModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  const int L = kNumLabels;
  out << kModelMagic << " " << kModelVersion << "\n";
  out << "config " << config.words << " " << config.lemmas << " " << config.pos << " "
      << config.chunk << " " << config.affixes << " " << config.affix_max << " "
      << config.gazetteers << "\n";
  out << "hyper " << hex(hyper.sigma2) << " " << hyper.max_iter << " " << hex(hyper.tol) << " "
      << hyper.seed << "\n";
  out << "labels " << L << "\n";
  for (const Tag& t : labels()) out << t.str() << "\n";
  out << "features " << features.size() << "\n";
  for (size_t f = 0; f < features.size(); ++f) out << features.name(static_cast<int>(f)) << "\n";
  out << "emit\n";
  for (size_t f = 0; f < features.size(); ++f) {
    for (int y = 0; y < L; ++y)
      out << (y ? " " : "") << hex(emit_w[f * static_cast<size_t>(L) + static_cast<size_t>(y)]);
    out << "\n";
  }
  out << "trans\n";
  for (int p = 0; p < L; ++p) {
    for (int y = 0; y < L; ++y)
      out << (y ? " " : "") << hex(trans_w[static_cast<size_t>(p) * L + static_cast<size_t>(y)]);
    out << "\n";
  }
  out << "end\n";
  if (!out) throw DataError("write failed for '" + path + "'");
}

CrfModel CrfModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model '" + path + "'");
  auto next_line = [&](const char* what) {
    std::string line;
    if (!std::getline(in, line))
      throw DataError("model file '" + path + "' is truncated (expected " + what + ")");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };

  CrfModel model;
  const int L = kNumLabels;
  {
    std::istringstream head(next_line("header"));
    std::string magic;
    int version = -1;
    head >> magic >> version;
    if (magic != kModelMagic) throw DataError("'" + path + "' is not a model file");
    if (version != kModelVersion)
      throw DataError("model file '" + path + "' has unsupported version " +
                      std::to_string(version));
  }
  {
    std::istringstream cfg(next_line("config"));
    std::string key;
    cfg >> key >> model.config.words >> model.config.lemmas >> model.config.pos >>
        model.config.chunk >> model.config.affixes >> model.config.affix_max >>
        model.config.gazetteers;
    if (key != "config" || !cfg) throw DataError("model file '" + path + "': bad config line");
  }
  {
    std::istringstream hyp(next_line("hyper"));
    std::string key, sigma2, tol;
    hyp >> key >> sigma2 >> model.hyper.max_iter >> tol >> model.hyper.seed;
    if (key != "hyper" || !hyp) throw DataError("model file '" + path + "': bad hyper line");
    model.hyper.sigma2 = unhex(sigma2, "sigma2");
    model.hyper.tol = unhex(tol, "tol");
  }
  {
    std::istringstream lab(next_line("labels"));
    std::string key;
    int count = -1;
    lab >> key >> count;
    if (key != "labels" || count != L)
      throw DataError("model file '" + path + "': expected " + std::to_string(L) + " labels");
    for (int i = 0; i < L; ++i) {
      const std::string line = next_line("label");
      const auto tag = Tag::parse(line);
      if (!tag || !(*tag == labels()[static_cast<size_t>(i)]))
        throw DataError("model file '" + path + "': unexpected label '" + line + "'");
    }
  }
  size_t num_features = 0;
  {
    std::istringstream feat(next_line("features"));
    std::string key;
    feat >> key >> num_features;
    if (key != "features" || !feat)
      throw DataError("model file '" + path + "': bad features line");
    for (size_t i = 0; i < num_features; ++i) model.features.intern(next_line("feature name"));
    model.features.freeze();
  }
  if (next_line("emit") != "emit") throw DataError("model file '" + path + "': missing emit block");
  model.emit_w.resize(num_features * static_cast<size_t>(L));
  for (size_t f = 0; f < num_features; ++f) {
    std::istringstream row(next_line("emission row"));
    std::string cell;
    for (int y = 0; y < L; ++y) {
      if (!(row >> cell))
        throw DataError("model file '" + path + "': short emission row " + std::to_string(f));
      model.emit_w[f * static_cast<size_t>(L) + static_cast<size_t>(y)] = unhex(cell, "weight");
    }
  }
  if (next_line("trans") != "trans")
    throw DataError("model file '" + path + "': missing trans block");
  model.trans_w.resize(static_cast<size_t>(L) * L);
  for (int p = 0; p < L; ++p) {
    std::istringstream row(next_line("transition row"));
    std::string cell;
    for (int y = 0; y < L; ++y) {
      if (!(row >> cell))
        throw DataError("model file '" + path + "': short transition row " + std::to_string(p));
      model.trans_w[static_cast<size_t>(p) * L + static_cast<size_t>(y)] = unhex(cell, "weight");
    }
  }
  if (next_line("end") != "end") throw DataError("model file '" + path + "': missing end marker");
  return model;
}

}  // namespace ner

#include "ner/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ner/error.hpp"
#include "ner/rng.hpp"
#include "ner/text.hpp"

namespace ner {

std::vector<NewsDocMeta> filter_pool(std::span<const NewsDocMeta> pool,
                                     const SamplerConfig& cfg) {
  std::vector<NewsDocMeta> out;
  out.reserve(pool.size());
  for (const NewsDocMeta& doc : pool)
    if (doc.length >= cfg.min_length) out.push_back(doc);
  return out;
}

std::map<std::string, TopicLengthStats> topic_length_stats(std::span<const NewsDocMeta> pool) {
  std::map<std::string, TopicLengthStats> stats;
  std::map<std::string, double> sum, sumsq;
  for (const NewsDocMeta& doc : pool) {
    ++stats[doc.topic].count;
    sum[doc.topic] += static_cast<double>(doc.length);
    sumsq[doc.topic] += static_cast<double>(doc.length) * static_cast<double>(doc.length);
  }
  for (auto& [topic, st] : stats) {
    const double n = static_cast<double>(st.count);
    st.mean = sum[topic] / n;
    if (st.count >= 2) {
      const double var = std::max(0.0, sumsq[topic] / n - st.mean * st.mean);
      st.stddev = std::sqrt(var);
    }
  }
  return stats;
}

namespace {

// Largest-remainder apportionment of `total` over weights, each share also
// clamped by limits[i]; ties go to the lower index. Returns empty when the
// limits cannot absorb the total.
std::vector<int> largest_remainder(const std::vector<long>& weights, int total,
                                   const std::vector<long>& limits) {
  const size_t k = weights.size();
  long wsum = 0;
  for (long w : weights) wsum += w;
  std::vector<int> alloc(k, 0);
  if (wsum == 0 || total == 0) return alloc;

  std::vector<double> exact(k);
  int assigned = 0;
  for (size_t i = 0; i < k; ++i) {
    exact[i] = static_cast<double>(total) * static_cast<double>(weights[i]) /
               static_cast<double>(wsum);
    alloc[i] = static_cast<int>(
        std::max(0L, std::min(static_cast<long>(std::floor(exact[i])), limits[i])));
    assigned += alloc[i];
  }
  while (assigned < total) {
    int best = -1;
    double best_rem = -1.0;
    for (size_t i = 0; i < k; ++i) {
      if (alloc[i] >= limits[i]) continue;
      const double rem = exact[i] - static_cast<double>(alloc[i]);
      if (rem > best_rem + 1e-12) {
        best_rem = rem;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) return {};  // limits saturated
    ++alloc[static_cast<size_t>(best)];
    ++assigned;
  }
  return alloc;
}

double normal_weight(double x, double mean, double stddev) {
  if (stddev <= 0.0) return 1.0;
  const double z = (x - mean) / stddev;
  return std::exp(-0.5 * z * z);
}

}  // namespace

std::vector<std::string> sample_documents(std::span<const NewsDocMeta> pool_in,
                                          const SamplerConfig& cfg) {
  const std::vector<NewsDocMeta> pool = filter_pool(pool_in, cfg);
  const int n = static_cast<int>(pool.size());
  if (cfg.target_n < 0) throw DataError("sample: negative target");
  if (cfg.target_n > n)
    throw DataError("sample: target " + std::to_string(cfg.target_n) + " exceeds pool of " +
                    std::to_string(n) + " usable documents");
  if (cfg.time_bins < 1) throw DataError("sample: time_bins must be at least 1");

  // Topics and sources in first-appearance order keep everything
  // deterministic without depending on hash iteration.
  std::vector<std::string> topics;
  std::map<std::string, int> topic_id;
  std::vector<std::vector<int>> topic_docs;  // indices into pool
  for (int i = 0; i < n; ++i) {
    auto [it, fresh] = topic_id.try_emplace(pool[static_cast<size_t>(i)].topic,
                                            static_cast<int>(topics.size()));
    if (fresh) {
      topics.push_back(pool[static_cast<size_t>(i)].topic);
      topic_docs.emplace_back();
    }
    topic_docs[static_cast<size_t>(it->second)].push_back(i);
  }

  std::vector<long> topic_counts;
  for (const auto& docs : topic_docs) topic_counts.push_back(static_cast<long>(docs.size()));
  const std::vector<int> topic_alloc =
      largest_remainder(topic_counts, cfg.target_n, topic_counts);
  if (topic_alloc.empty()) throw DataError("sample: internal allocation failure");

  const auto length_stats = topic_length_stats(pool);
  const long global_cap =
      static_cast<long>(std::ceil(cfg.source_cap * static_cast<double>(cfg.target_n)));
  std::map<std::string, long> used_global;  // per source, outside the sports exception

  Rng rng(cfg.seed);
  std::vector<std::string> selection;
  selection.reserve(static_cast<size_t>(cfg.target_n));

  for (size_t ti = 0; ti < topics.size(); ++ti) {
    const std::string& topic = topics[ti];
    const int alloc = topic_alloc[ti];
    if (alloc == 0) continue;
    const std::vector<int>& docs = topic_docs[ti];

    // Source shares within this topic.
    std::vector<std::string> sources;
    std::map<std::string, int> source_id;
    std::vector<long> source_count;
    for (int d : docs) {
      auto [it, fresh] = source_id.try_emplace(pool[static_cast<size_t>(d)].source,
                                               static_cast<int>(sources.size()));
      if (fresh) {
        sources.push_back(pool[static_cast<size_t>(d)].source);
        source_count.push_back(0);
      }
      ++source_count[static_cast<size_t>(it->second)];
    }

    const bool is_sports_topic = topic == cfg.sports_topic;
    std::vector<long> limit(sources.size());
    for (size_t si = 0; si < sources.size(); ++si) {
      const bool exception =
          is_sports_topic && !cfg.sports_source.empty() && sources[si] == cfg.sports_source;
      const long cap = exception
                           ? static_cast<long>(std::ceil(cfg.sports_cap * alloc))
                           : std::max<long>(0, global_cap - used_global[sources[si]]);
      limit[si] = std::min(source_count[si], cap);
    }

    const std::vector<int> quota = largest_remainder(source_count, alloc, limit);
    if (quota.empty()) {
      std::ostringstream msg;
      msg << "sample: infeasible for topic '" << topic << "': need " << alloc
          << " documents but caps allow only ";
      long capacity = 0;
      for (long l : limit) capacity += l;
      msg << capacity << ". Binding constraints:";
      for (size_t si = 0; si < sources.size(); ++si)
        if (limit[si] < source_count[si])
          msg << " source '" << sources[si] << "' capped at " << limit[si] << " (has "
              << source_count[si] << ")";
      throw InfeasibleError(msg.str());
    }

    // Timestamp bins over this topic's pool.
    int64_t ts_min = pool[static_cast<size_t>(docs[0])].timestamp;
    int64_t ts_max = ts_min;
    for (int d : docs) {
      ts_min = std::min(ts_min, pool[static_cast<size_t>(d)].timestamp);
      ts_max = std::max(ts_max, pool[static_cast<size_t>(d)].timestamp);
    }
    const int bins = cfg.time_bins;
    auto bin_of = [&](int64_t ts) {
      if (ts_max == ts_min) return 0;
      const double frac = static_cast<double>(ts - ts_min) /
                          (static_cast<double>(ts_max - ts_min) + 1.0);
      return static_cast<int>(frac * bins);
    };
    std::vector<std::vector<int>> bin_docs(static_cast<size_t>(bins));
    for (int d : docs)
      bin_docs[static_cast<size_t>(bin_of(pool[static_cast<size_t>(d)].timestamp))].push_back(d);

    const TopicLengthStats st = length_stats.at(topic);
    std::vector<long> remaining(quota.begin(), quota.end());
    std::vector<char> taken(static_cast<size_t>(n), 0);
    int drawn = 0;
    int bin = 0;
    int empty_visits = 0;
    while (drawn < alloc) {
      if (empty_visits > bins) throw DataError("sample: internal draw failure");
      std::vector<int> eligible;
      std::vector<double> weights;
      for (int d : bin_docs[static_cast<size_t>(bin)]) {
        if (taken[static_cast<size_t>(d)]) continue;
        const int si = source_id.at(pool[static_cast<size_t>(d)].source);
        if (remaining[static_cast<size_t>(si)] <= 0) continue;
        eligible.push_back(d);
        weights.push_back(normal_weight(static_cast<double>(pool[static_cast<size_t>(d)].length),
                                        st.mean, st.stddev));
      }
      if (eligible.empty()) {
        ++empty_visits;
        bin = (bin + 1) % bins;
        continue;
      }
      empty_visits = 0;
      const int d = eligible[rng.weighted(weights)];
      taken[static_cast<size_t>(d)] = 1;
      --remaining[static_cast<size_t>(source_id.at(pool[static_cast<size_t>(d)].source))];
      selection.push_back(pool[static_cast<size_t>(d)].id);
      ++drawn;
      bin = (bin + 1) % bins;
    }

    for (size_t si = 0; si < sources.size(); ++si) {
      const bool exception =
          is_sports_topic && !cfg.sports_source.empty() && sources[si] == cfg.sports_source;
      if (!exception) used_global[sources[si]] += quota[si];
    }
  }
  return selection;
}

std::string sampling_report(std::span<const NewsDocMeta> pool,
                            std::span<const std::string> selected_ids,
                            const SamplerConfig& cfg) {
  std::set<std::string> chosen(selected_ids.begin(), selected_ids.end());
  std::map<std::string, std::pair<long, long>> by_topic, by_source;
  int64_t ts_min = pool.empty() ? 0 : pool[0].timestamp;
  int64_t ts_max = ts_min;
  for (const NewsDocMeta& doc : pool) {
    ts_min = std::min(ts_min, doc.timestamp);
    ts_max = std::max(ts_max, doc.timestamp);
  }
  const int bins = std::max(1, cfg.time_bins);
  std::vector<std::pair<long, long>> by_bin(static_cast<size_t>(bins), {0, 0});
  auto bin_of = [&](int64_t ts) {
    if (ts_max == ts_min) return 0;
    const double frac =
        static_cast<double>(ts - ts_min) / (static_cast<double>(ts_max - ts_min) + 1.0);
    return static_cast<int>(frac * bins);
  };
  for (const NewsDocMeta& doc : pool) {
    const bool sel = chosen.count(doc.id) > 0;
    ++by_topic[doc.topic].first;
    ++by_source[doc.source].first;
    ++by_bin[static_cast<size_t>(bin_of(doc.timestamp))].first;
    if (sel) {
      ++by_topic[doc.topic].second;
      ++by_source[doc.source].second;
      ++by_bin[static_cast<size_t>(bin_of(doc.timestamp))].second;
    }
  }

  std::ostringstream out;
  out << "topic\tpool\tselected\n";
  for (const auto& [topic, c] : by_topic)
    out << topic << '\t' << c.first << '\t' << c.second << '\n';
  out << "\nsource\tpool\tselected\n";
  for (const auto& [source, c] : by_source)
    out << source << '\t' << c.first << '\t' << c.second << '\n';
  out << "\ntime_bin\tpool\tselected\n";
  for (int b = 0; b < bins; ++b)
    out << b << '\t' << by_bin[static_cast<size_t>(b)].first << '\t'
        << by_bin[static_cast<size_t>(b)].second << '\n';
  return out.str();
}

std::vector<NewsDocMeta> read_pool_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open pool file '" + path + "'");
  std::vector<NewsDocMeta> pool;
  std::set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const std::vector<std::string> cols = split_char(line, '\t');
    if (cols.size() != 5)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected 5 TAB-separated columns (id source topic timestamp length)");
    NewsDocMeta doc;
    doc.id = cols[0];
    doc.source = cols[1];
    doc.topic = cols[2];
    try {
      doc.timestamp = std::stoll(cols[3]);
      doc.length = std::stol(cols[4]);
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(line_no) + ": bad number");
    }
    if (doc.length <= 0)
      throw DataError(path + ":" + std::to_string(line_no) + ": length must be positive");
    if (!seen.insert(doc.id).second)
      throw DataError(path + ":" + std::to_string(line_no) + ": duplicate id '" + doc.id + "'");
    pool.push_back(std::move(doc));
  }
  return pool;
}

}  // namespace ner

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ner {

/// Metadata record for one collected news document.
struct NewsDocMeta {
  std::string id;
  std::string source;
  std::string topic;
  int64_t timestamp = 0;
  long length = 0;  // characters
};

struct SamplerConfig {
  int target_n = 0;
  long min_length = 70;
  double source_cap = 0.20;  // ceil(source_cap * target_n) docs per source
  std::string sports_source;
  double sports_cap = 0.30;  // of the sports-topic allocation, for sports_source
  std::string sports_topic = "ورزش";
  int time_bins = 10;
  uint64_t seed = 0;
};

/// Drops documents shorter than min_length, preserving order.
std::vector<NewsDocMeta> filter_pool(std::span<const NewsDocMeta> pool,
                                     const SamplerConfig& cfg);

struct TopicLengthStats {
  double mean = 0.0;
  double stddev = 0.0;  // population; 0 when fewer than 2 docs
  long count = 0;
};

std::map<std::string, TopicLengthStats> topic_length_stats(std::span<const NewsDocMeta> pool);

/// Selects target_n document ids from the pool:
///   - per-topic allocation proportional to the pool's topic distribution
///     (largest-remainder rounding);
///   - within a topic, documents drawn without replacement with weight
///     proportional to the normal pdf of their length under the topic's
///     (mean, stddev); stddev 0 degrades to uniform;
///   - draws round-robin over equal-width timestamp bins so each topic's
///     picks spread over time as evenly as the pool allows;
///   - per-source quotas proportional to the source's share of the topic,
///     capped: no source exceeds ceil(source_cap * target_n) overall,
///     except that sports_source's docs in sports_topic are budgeted
///     separately at ceil(sports_cap * sports allocation). Excess quota is
///     re-normalized greedily among the remaining sources.
/// Deterministic for a fixed (pool, cfg). Throws InfeasibleError with the
/// binding constraints when the caps make the target unreachable, DataError
/// when target_n exceeds the filtered pool.
std::vector<std::string> sample_documents(std::span<const NewsDocMeta> pool,
                                          const SamplerConfig& cfg);

/// Side-by-side pool/selection counts per topic, per source and per time
/// bin, as TSV blocks (the topic block is bar-chart-ready).
std::string sampling_report(std::span<const NewsDocMeta> pool,
                            std::span<const std::string> selected_ids,
                            const SamplerConfig& cfg);

/// TSV columns: id source topic timestamp length. '#' comments allowed.
std::vector<NewsDocMeta> read_pool_tsv(const std::string& path);

}  // namespace ner

#include "ner/gazetteer.hpp"

#include <algorithm>
#include <fstream>

#include "doctest.h"
#include "ner/error.hpp"
#include "ner/rng.hpp"
#include "testutil.hpp"

using namespace ner;

namespace {

Gazetteer make_gaz(const std::string& name, EntityType type,
                   const std::vector<std::vector<std::string>>& entries) {
  return Gazetteer::from_entries(name, type, entries);
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/" + name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

// Window-enumeration oracle for exact_match_spans: at each position take the
// longest matching window over all lists, breaking length ties by type
// order, then jump past it.
std::vector<EntitySpan> oracle_exact_match(const Sentence& sent,
                                           std::span<const Gazetteer> gazetteers) {
  std::vector<EntitySpan> out;
  const int n = static_cast<int>(sent.size());
  int i = 0;
  while (i < n) {
    int best_len = 0;
    EntityType best_type = EntityType::PER;
    for (int end = n; end > i; --end) {
      std::vector<std::string> window;
      for (int k = i; k < end; ++k) window.push_back(sent.tokens[static_cast<size_t>(k)].surface);
      for (const Gazetteer& gaz : gazetteers) {
        if (!gaz.contains(window)) continue;
        const int len = end - i;
        if (len > best_len || (len == best_len && gaz.type() < best_type)) {
          best_len = len;
          best_type = gaz.type();
        }
      }
    }
    if (best_len == 0) {
      ++i;
      continue;
    }
    out.push_back({0, i, i + best_len, best_type});
    i += best_len;
  }
  return out;
}

}  // namespace

TEST_CASE("gazetteer loading") {
  SUBCASE("empty file") {
    const auto path = write_temp("gaz_empty.txt", "");
    CHECK(Gazetteer::load(path, EntityType::ORG).size() == 0);
  }
  SUBCASE("duplicates counted once, comments skipped") {
    const auto path = write_temp("gaz_dup.txt", "تهران\n# یادداشت\nتهران\nشیراز\n\n");
    const Gazetteer gaz = Gazetteer::load(path, EntityType::LOC);
    CHECK(gaz.size() == 2);
    CHECK(gaz.name() == "gaz_dup");
  }
  SUBCASE("multi-token entry builds a trie path") {
    const auto path = write_temp("gaz_multi.txt", "دانشگاه آزاد اسلامی\n");
    const Gazetteer gaz = Gazetteer::load(path, EntityType::ORG);
    CHECK(gaz.size() == 1);
    std::vector<std::string> full = {"دانشگاه", "آزاد", "اسلامی"};
    CHECK(gaz.contains(full));
    std::vector<std::string> partial = {"دانشگاه", "آزاد"};
    CHECK_FALSE(gaz.contains(partial));
    CHECK(gaz.is_entry_prefix_token("دانشگاه"));
    CHECK(gaz.is_entry_internal_token("آزاد"));
    CHECK(gaz.is_entry_internal_token("اسلامی"));
    CHECK_FALSE(gaz.is_single_token_entry("دانشگاه"));
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(Gazetteer::load("/nonexistent/g", EntityType::PER), DataError);
  }
}

TEST_CASE("entries dump is set-identical to the input") {
  std::vector<std::vector<std::string>> entries = {
      {"تهران"}, {"دانشگاه", "تهران"}, {"تهران"}, {"بندر", "عباس"}};
  const Gazetteer gaz = make_gaz("g", EntityType::LOC, entries);
  auto dumped = gaz.entries();
  CHECK(dumped.size() == 3);
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  std::sort(dumped.begin(), dumped.end());
  CHECK(dumped == entries);
}

TEST_CASE("exact match examples") {
  const Gazetteer org = make_gaz("org", EntityType::ORG, {{"دانشگاه", "تهران"}});
  const Gazetteer loc = make_gaz("loc", EntityType::LOC, {{"تهران"}});
  std::vector<Gazetteer> lists;
  lists.push_back(org);
  lists.push_back(loc);

  SUBCASE("two-token list entry found") {
    const Sentence s = test::make_sentence({"در", "دانشگاه", "تهران", "بود"});
    const auto spans = exact_match_spans(s, lists);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0] == EntitySpan{0, 1, 3, EntityType::ORG});
  }
  SUBCASE("longer entry wins over shorter of another type") {
    const Sentence s = test::make_sentence({"دانشگاه", "تهران"});
    const auto spans = exact_match_spans(s, lists);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].type == EntityType::ORG);
  }
  SUBCASE("no list words, no spans") {
    const Sentence s = test::make_sentence({"او", "رفت"});
    CHECK(exact_match_spans(s, lists).empty());
  }
  SUBCASE("equal length tie broken by type order") {
    const Gazetteer per = make_gaz("p", EntityType::PER, {{"نسیم"}});
    const Gazetteer loc2 = make_gaz("l", EntityType::LOC, {{"نسیم"}});
    std::vector<Gazetteer> both;
    both.push_back(loc2);
    both.push_back(per);
    const Sentence s = test::make_sentence({"نسیم"});
    const auto spans = exact_match_spans(s, both);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].type == EntityType::PER);  // PER < LOC
  }
}

TEST_CASE("partial match flags") {
  const Gazetteer org = make_gaz("org", EntityType::ORG, {{"دانشگاه", "تهران"}});
  const Gazetteer loc = make_gaz("loc", EntityType::LOC, {{"تهران"}});
  std::vector<Gazetteer> lists;
  lists.push_back(org);
  lists.push_back(loc);

  Token t1{"دانشگاه", "", "", ""};
  auto f1 = partial_match_features(t1, lists);
  CHECK(f1[static_cast<size_t>(EntityType::ORG)].prefix);
  CHECK_FALSE(f1[static_cast<size_t>(EntityType::ORG)].full);
  CHECK_FALSE(f1[static_cast<size_t>(EntityType::ORG)].internal);

  Token t2{"تهران", "", "", ""};
  auto f2 = partial_match_features(t2, lists);
  CHECK(f2[static_cast<size_t>(EntityType::LOC)].full);
  CHECK(f2[static_cast<size_t>(EntityType::ORG)].internal);

  Token t3{"ناشناخته", "", "", ""};
  auto f3 = partial_match_features(t3, lists);
  for (const PartialFlags& f : f3) {
    CHECK_FALSE(f.full);
    CHECK_FALSE(f.prefix);
    CHECK_FALSE(f.internal);
  }
}

TEST_CASE("partial flags are monotone under adding entries") {
  Rng rng(4242);
  const std::vector<std::string> vocab = {"الف", "ب", "پ", "ت", "ث", "ج"};
  for (int it = 0; it < 200; ++it) {
    std::vector<std::vector<std::string>> entries;
    const int base = 1 + static_cast<int>(rng.below(5));
    for (int e = 0; e < base; ++e) {
      std::vector<std::string> entry;
      const int len = 1 + static_cast<int>(rng.below(3));
      for (int k = 0; k < len; ++k) entry.push_back(vocab[rng.below(vocab.size())]);
      entries.push_back(std::move(entry));
    }
    std::vector<Gazetteer> before;
    before.push_back(make_gaz("g", EntityType::LOC, entries));
    entries.push_back({vocab[rng.below(vocab.size())], vocab[rng.below(vocab.size())]});
    std::vector<Gazetteer> after;
    after.push_back(make_gaz("g", EntityType::LOC, entries));

    for (const std::string& w : vocab) {
      Token tok{w, "", "", ""};
      const auto fb = partial_match_features(tok, before);
      const auto fa = partial_match_features(tok, after);
      for (size_t i = 0; i < fb.size(); ++i) {
        if (fb[i].full) CHECK(fa[i].full);
        if (fb[i].prefix) CHECK(fa[i].prefix);
        if (fb[i].internal) CHECK(fa[i].internal);
      }
    }
  }
}

TEST_CASE("exact match equals window-enumeration oracle") {
  Rng rng(31337);
  const std::vector<std::string> vocab = {"آ", "ب", "پ", "ت"};
  for (int it = 0; it < 500; ++it) {
    std::vector<Gazetteer> lists;
    const int num_lists = 1 + static_cast<int>(rng.below(3));
    for (int g = 0; g < num_lists; ++g) {
      std::vector<std::vector<std::string>> entries;
      const int num_entries = static_cast<int>(rng.below(6));
      for (int e = 0; e < num_entries; ++e) {
        std::vector<std::string> entry;
        const int len = 1 + static_cast<int>(rng.below(3));
        for (int k = 0; k < len; ++k) entry.push_back(vocab[rng.below(vocab.size())]);
        entries.push_back(std::move(entry));
      }
      lists.push_back(make_gaz("g" + std::to_string(g),
                               static_cast<EntityType>(rng.below(kNumEntityTypes)), entries));
    }
    std::vector<std::string> words;
    const int n = static_cast<int>(rng.below(11));
    for (int i = 0; i < n; ++i) words.push_back(vocab[rng.below(vocab.size())]);
    const Sentence sent = test::make_sentence(words);
    CHECK(exact_match_spans(sent, lists) == oracle_exact_match(sent, lists));
  }
}

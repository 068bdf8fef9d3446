#include "ner/corpus.hpp"

#include "doctest.h"
#include "ner/error.hpp"
#include "ner/rng.hpp"
#include "ner/text.hpp"
#include "testutil.hpp"

using namespace ner;

TEST_CASE("tag parse and serialize round-trip") {
  CHECK(Tag::parse("O").value() == Tag::o());
  CHECK(Tag::parse("B-PER").value() == Tag::b(EntityType::PER));
  CHECK(Tag::parse("I-MON").value() == Tag::i(EntityType::MON));
  CHECK_FALSE(Tag::parse("B-XYZ").has_value());
  CHECK_FALSE(Tag::parse("Q").has_value());
  CHECK_FALSE(Tag::parse("").has_value());
  for (EntityType t : all_entity_types()) {
    CHECK(Tag::parse(Tag::b(t).str()).value() == Tag::b(t));
    CHECK(Tag::parse(Tag::i(t).str()).value() == Tag::i(t));
  }
}

TEST_CASE("encode_iob basics") {
  CHECK(encode_iob({}, 3) == std::vector<Tag>{Tag::o(), Tag::o(), Tag::o()});

  // Coordinated phrase: one LOC span covering the whole expression.
  std::vector<EntitySpan> loc = {{0, 0, 4, EntityType::LOC}};
  CHECK(encode_iob(loc, 4) ==
        std::vector<Tag>{Tag::b(EntityType::LOC), Tag::i(EntityType::LOC),
                         Tag::i(EntityType::LOC), Tag::i(EntityType::LOC)});

  // Adjacent spans both start with B.
  std::vector<EntitySpan> adj = {{0, 0, 1, EntityType::PER}, {0, 1, 2, EntityType::LOC}};
  CHECK(encode_iob(adj, 2) == std::vector<Tag>{Tag::b(EntityType::PER), Tag::b(EntityType::LOC)});
}

TEST_CASE("encode_iob rejects bad spans") {
  std::vector<EntitySpan> oob = {{0, 1, 5, EntityType::PER}};
  CHECK_THROWS_WITH_AS(encode_iob(oob, 3), doctest::Contains("PER[1,5)"), DataError);
  std::vector<EntitySpan> overlap = {{0, 0, 2, EntityType::PER}, {0, 1, 3, EntityType::LOC}};
  CHECK_THROWS_WITH_AS(encode_iob(overlap, 4), doctest::Contains("LOC[1,3)"), DataError);
  std::vector<EntitySpan> empty = {{0, 2, 2, EntityType::PER}};
  CHECK_THROWS_AS(encode_iob(empty, 4), DataError);
}

TEST_CASE("decode_iob basics") {
  CHECK(decode_iob(std::vector<Tag>{Tag::o(), Tag::o(), Tag::o()}).empty());

  // A 5-token organization decodes to one span.
  std::vector<Tag> org = {Tag::b(EntityType::ORG), Tag::i(EntityType::ORG),
                          Tag::i(EntityType::ORG), Tag::i(EntityType::ORG),
                          Tag::i(EntityType::ORG)};
  const auto spans = decode_iob(org);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0] == EntitySpan{0, 0, 5, EntityType::ORG});

  std::vector<Tag> switch_under_i = {Tag::b(EntityType::PER), Tag::i(EntityType::LOC)};
  CHECK_THROWS_WITH_AS(decode_iob(switch_under_i), doctest::Contains("index 1"), DataError);
  std::vector<Tag> dangling = {Tag::o(), Tag::i(EntityType::PER)};
  CHECK_THROWS_WITH_AS(decode_iob(dangling), doctest::Contains("index 1"), DataError);
  std::vector<Tag> leading = {Tag::i(EntityType::PER)};
  CHECK_THROWS_WITH_AS(decode_iob(leading), doctest::Contains("index 0"), DataError);
}

TEST_CASE("repair_iob policy") {
  std::vector<Tag> dangling = {Tag::i(EntityType::PER), Tag::i(EntityType::PER)};
  CHECK(repair_iob(dangling) ==
        std::vector<Tag>{Tag::b(EntityType::PER), Tag::i(EntityType::PER)});

  std::vector<Tag> switched = {Tag::b(EntityType::LOC), Tag::i(EntityType::ORG)};
  CHECK(repair_iob(switched) ==
        std::vector<Tag>{Tag::b(EntityType::LOC), Tag::b(EntityType::ORG)});

  std::vector<Tag> valid = {Tag::b(EntityType::DAT), Tag::i(EntityType::DAT), Tag::o()};
  CHECK(repair_iob(valid) == valid);
}

TEST_CASE("iob round-trip and repair properties") {
  Rng rng(20250810);
  for (int it = 0; it < 10000; ++it) {
    const int n = 1 + static_cast<int>(rng.below(12));
    const auto spans = test::random_spans(rng, n);
    const auto tags = encode_iob(spans, n);
    CHECK(decode_iob(tags) == spans);
    CHECK(repair_iob(tags) == tags);  // identity on valid sequences

    const auto raw = test::random_raw_tags(rng, n);
    const auto repaired = repair_iob(raw);
    CHECK(valid_iob(repaired));
    CHECK(repair_iob(repaired) == repaired);  // idempotent
  }
}

namespace {

const char* kSmallFile =
    "-DOCSTART- d1\n"
    "# source=irna topic=politics time=1500000000\n"
    "او\tاو\tPR\tO\tO\n"
    "تهران\tتهران\tN\tB-NP\tB-LOC\n"
    "رفت\tرفتن\tV\tO\tO\n"
    "\n";

}  // namespace

TEST_CASE("column file parse basics") {
  const auto docs = parse_column_text(kSmallFile, "test");
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].id == "d1");
  CHECK(docs[0].meta.present);
  CHECK(docs[0].meta.source == "irna");
  CHECK(docs[0].meta.topic == "politics");
  CHECK(docs[0].meta.timestamp == 1500000000);
  REQUIRE(docs[0].sentences.size() == 1);
  const Sentence& s = docs[0].sentences[0];
  REQUIRE(s.size() == 3);
  CHECK(s.tokens[1].surface == "تهران");
  CHECK(s.tokens[1].pos == "N");
  CHECK(s.gold_tags[1] == Tag::b(EntityType::LOC));
}

TEST_CASE("column file errors carry line numbers") {
  CHECK_THROWS_WITH_AS(parse_column_text("الف\tالف\tN\tO\tB-XYZ\n", "f"),
                       doctest::Contains("f:1"), DataError);
  CHECK_THROWS_WITH_AS(parse_column_text("الف\tالف\tN\n", "f"), doctest::Contains("f:1"),
                       DataError);
  // Dangling I is invalid by default...
  CHECK_THROWS_AS(parse_column_text("الف\tالف\tN\tO\tI-PER\n", "f"), DataError);
  // ...but readable when validation is off (kappa path).
  ReadOptions raw;
  raw.validate_iob = false;
  const auto docs = parse_column_text("الف\tالف\tN\tO\tI-PER\n", "f", raw);
  CHECK(docs[0].sentences[0].gold_tags[0] == Tag::i(EntityType::PER));
}

TEST_CASE("column file without docstart or tags") {
  const auto docs = parse_column_text("الف\tالف\tN\tO\nب\tب\tN\tO\n\n", "f");
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].id == "doc1");
  CHECK_FALSE(docs[0].sentences[0].has_gold());
  CHECK(docs[0].sentences[0].size() == 2);
}

TEST_CASE("column file duplicate ids rejected") {
  const std::string text = "-DOCSTART- a\nx\tx\tN\tO\tO\n\n-DOCSTART- a\ny\ty\tN\tO\tO\n\n";
  CHECK_THROWS_WITH_AS(parse_column_text(text, "f"), doctest::Contains("duplicate"), DataError);
}

TEST_CASE("write then read is a fixed point") {
  Rng rng(7);
  std::vector<Document> docs;
  for (int d = 0; d < 4; ++d) {
    Document doc;
    doc.id = "doc-" + std::to_string(d);
    if (d % 2 == 0) {
      doc.meta = {"mehr", "ورزش", 1400000000 + d, true};
    }
    const int num_sent = 1 + static_cast<int>(rng.below(3));
    for (int s = 0; s < num_sent; ++s) {
      const int n = 1 + static_cast<int>(rng.below(6));
      Sentence sent;
      for (int i = 0; i < n; ++i) {
        sent.tokens.push_back(
            {"کلمه" + std::to_string(i), "لم" + std::to_string(i), "N", "B-NP"});
      }
      sent.gold_tags = test::random_valid_tags(rng, n);
      doc.sentences.push_back(std::move(sent));
    }
    docs.push_back(std::move(doc));
  }
  const std::string once = format_column_text(docs);
  const auto parsed = parse_column_text(once, "mem");
  const std::string twice = format_column_text(parsed);
  CHECK(once == twice);
  REQUIRE(parsed.size() == docs.size());
  CHECK(parsed[0].meta.source == "mehr");
  CHECK(parsed[1].sentences[0].gold_tags == docs[1].sentences[0].gold_tags);
}

TEST_CASE("corpus_stats counts entities, tokens and uniques") {
  SUBCASE("all O") {
    const auto docs = parse_column_text("a\ta\tN\tO\tO\nb\tb\tN\tO\tO\n\n", "f");
    const CorpusStats st = corpus_stats(docs);
    CHECK(st.tokens == 2);
    CHECK(st.entities == 0);
    CHECK(st.entity_tokens == 0);
    for (const TypeStats& t : st.per_type) CHECK(t.entities == 0);
  }

  SUBCASE("two docs, three PER spans, two identical") {
    const std::string text =
        "-DOCSTART- d1\n"
        "علی\tعلی\tN\tB-NP\tB-PER\n"
        "رضایی\tرضایی\tN\tI-NP\tI-PER\n"
        "آمد\tآمدن\tV\tO\tO\n"
        "\n"
        "علی\tعلی\tN\tB-NP\tB-PER\n"
        "رضایی\tرضایی\tN\tI-NP\tI-PER\n"
        "\n"
        "-DOCSTART- d2\n"
        "مریم\tمریم\tN\tB-NP\tB-PER\n"
        "خندید\tخندیدن\tV\tO\tO\n"
        "\n";
    const auto docs = parse_column_text(text, "f");
    const CorpusStats st = corpus_stats(docs);
    CHECK(st.documents == 2);
    CHECK(st.sentences == 3);
    CHECK(st.tokens == 7);
    const TypeStats& per = st.per_type[static_cast<size_t>(EntityType::PER)];
    CHECK(per.entities == 3);
    CHECK(per.tokens == 5);
    CHECK(per.unique_entities == 2);  // "علی رضایی" twice, "مریم" once
    CHECK(st.entity_tokens == 5);
  }

  SUBCASE("missing tags rejected") {
    const auto docs = parse_column_text("a\ta\tN\tO\n\n", "f");
    CHECK_THROWS_AS(corpus_stats(docs), DataError);
  }
}

TEST_CASE("corpus_stats token totals equal span length sums") {
  Rng rng(99);
  std::vector<Document> docs(1);
  docs[0].id = "d";
  long expected_tokens = 0;
  for (int s = 0; s < 50; ++s) {
    const int n = 1 + static_cast<int>(rng.below(10));
    Sentence sent;
    for (int i = 0; i < n; ++i) sent.tokens.push_back({"t" + std::to_string(i), "", "N", ""});
    const auto spans = test::random_spans(rng, n);
    for (const auto& sp : spans) expected_tokens += sp.length();
    sent.gold_tags = encode_iob(spans, n);
    docs[0].sentences.push_back(std::move(sent));
  }
  const CorpusStats st = corpus_stats(docs);
  CHECK(st.entity_tokens == expected_tokens);
}

TEST_CASE("utf8 helpers count scalars") {
  CHECK(utf8_length("تهران") == 5);
  CHECK(utf8_prefix("تهران", 2) == "ته");
  CHECK(utf8_suffix("تهران", 3) == "ران");
  CHECK(utf8_prefix("abc", 10) == "abc");
  CHECK(utf8_chars("ab").size() == 2);
}

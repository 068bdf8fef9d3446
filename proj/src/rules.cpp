#include "ner/rules.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ner/error.hpp"
#include "ner/text.hpp"

namespace ner {

namespace {

// Persian (U+06F0..U+06F9) and Arabic-Indic (U+0660..U+0669) digits as an
// alternation group; multi-byte characters cannot sit inside a byte-level
// regex class, alternation of literals works.
const std::string kDigitAlternation =
    "(?:[0-9]|۰|۱|۲|۳|۴|۵|۶|۷|۸|۹|٠|١|٢|٣|٤|٥|٦|٧|٨|٩)";

std::string expand_digit_classes(std::string_view src) {
  std::string out;
  bool in_class = false;
  for (size_t i = 0; i < src.size(); ++i) {
    const char c = src[i];
    if (c == '\\' && i + 1 < src.size()) {
      if (src[i + 1] == 'd' && !in_class) {
        out += kDigitAlternation;
        ++i;
        continue;
      }
      if (src[i + 1] == 'd' && in_class) {
        out += "0-9";  // class stays byte-level; Persian digits need \d outside classes
        ++i;
        continue;
      }
      out += c;
      out += src[i + 1];
      ++i;
      continue;
    }
    if (c == '[') in_class = true;
    if (c == ']') in_class = false;
    out += c;
  }
  return out;
}

}  // namespace

std::shared_ptr<const std::regex> compile_token_regex(std::string_view src) {
  try {
    return std::make_shared<const std::regex>(expand_digit_classes(src),
                                              std::regex::ECMAScript | std::regex::optimize);
  } catch (const std::regex_error& e) {
    throw DataError("bad regex '" + std::string(src) + "': " + e.what());
  }
}

bool TokenPredicate::matches(const Token& token) const {
  switch (kind) {
    case Kind::Literals:
      return std::find(literals.begin(), literals.end(), token.surface) != literals.end();
    case Kind::Pos:
      return token.pos == pos_tag;
    case Kind::Lexicon:
      return lex != nullptr && lex->is_single_token_entry(token.surface);
    case Kind::Regex:
      return compiled && std::regex_match(token.surface, *compiled);
  }
  return false;
}

LexiconMap make_lexicon_map(std::span<const Gazetteer> gazetteers) {
  LexiconMap map;
  for (const Gazetteer& g : gazetteers) map[g.name()] = &g;
  return map;
}

// --- DSL parsing -------------------------------------------------------------

namespace {

struct Cursor {
  std::string_view text;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError("rule syntax error at column " + std::to_string(pos + 1) + ": " + what);
  }
  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() const { return pos < text.size() ? text[pos] : '\0'; }
  bool eat(std::string_view word) {
    skip_ws();
    if (text.substr(pos, word.size()) == word) {
      pos += word.size();
      return true;
    }
    return false;
  }
  std::string_view take_until(char stop) {
    const size_t start = pos;
    while (pos < text.size() && text[pos] != stop) ++pos;
    if (pos >= text.size()) fail(std::string("missing '") + stop + "'");
    std::string_view out = text.substr(start, pos - start);
    ++pos;  // consume stop
    return out;
  }
  std::string_view take_word() {
    skip_ws();
    const size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    return text.substr(start, pos - start);
  }
};

EntityType parse_type_or_fail(Cursor& cur, std::string_view name) {
  auto t = parse_entity_type(name);
  if (!t) cur.fail("unknown entity type '" + std::string(name) + "'");
  return *t;
}

Quantifier parse_quantifier(Cursor& cur) {
  switch (cur.peek()) {
    case '?': ++cur.pos; return Quantifier::Optional;
    case '+': ++cur.pos; return Quantifier::Plus;
    case '*': ++cur.pos; return Quantifier::Star;
    default: return Quantifier::One;
  }
}

// [pos:TAG] / [lex:NAME] / [re:REGEX]; regex body may contain balanced [].
TokenPredicate parse_bracket(Cursor& cur, const LexiconMap& lexicons) {
  ++cur.pos;  // '['
  TokenPredicate pred;
  if (cur.eat("pos:")) {
    pred.kind = TokenPredicate::Kind::Pos;
    pred.pos_tag = std::string(trim(cur.take_until(']')));
    if (pred.pos_tag.empty()) cur.fail("empty POS tag");
  } else if (cur.eat("lex:")) {
    pred.kind = TokenPredicate::Kind::Lexicon;
    pred.lexicon = std::string(trim(cur.take_until(']')));
    auto it = lexicons.find(pred.lexicon);
    if (it == lexicons.end()) cur.fail("unknown lexicon name '" + pred.lexicon + "'");
    pred.lex = it->second;
  } else if (cur.eat("re:")) {
    pred.kind = TokenPredicate::Kind::Regex;
    const size_t start = cur.pos;
    int depth = 1;
    while (cur.pos < cur.text.size() && depth > 0) {
      if (cur.text[cur.pos] == '\\') {
        cur.pos += 2;
        continue;
      }
      if (cur.text[cur.pos] == '[') ++depth;
      if (cur.text[cur.pos] == ']') --depth;
      ++cur.pos;
    }
    if (depth != 0) cur.fail("missing ']' after regex");
    pred.regex_src = std::string(cur.text.substr(start, cur.pos - 1 - start));
    if (pred.regex_src.empty()) cur.fail("empty regex");
    pred.compiled = compile_token_regex(pred.regex_src);
  } else {
    cur.fail("expected pos:, lex: or re: after '['");
  }
  return pred;
}

TokenPredicate parse_alternation(Cursor& cur) {
  ++cur.pos;  // '('
  TokenPredicate pred;
  pred.kind = TokenPredicate::Kind::Literals;
  std::string current;
  while (true) {
    if (cur.pos >= cur.text.size()) cur.fail("missing ')'");
    const char c = cur.text[cur.pos];
    if (c == '|' || c == ')') {
      const std::string alt(trim(current));
      if (alt.empty()) cur.fail("empty alternative in (...)");
      pred.literals.push_back(alt);
      current.clear();
      ++cur.pos;
      if (c == ')') break;
    } else {
      current += c;
      ++cur.pos;
    }
  }
  return pred;
}

// "a..b" | "a.." | "..b" | "a", 1-based inclusive element indices.
void parse_capture(Cursor& cur, Rule& rule) {
  const std::string_view word = cur.take_word();
  if (word.empty()) cur.fail("missing range after :capture");
  const size_t dots = word.find("..");
  auto parse_num = [&](std::string_view s) -> int {
    int v = 0;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        cur.fail("bad capture range '" + std::string(word) + "'");
      v = v * 10 + (c - '0');
    }
    return v;
  };
  const int n = static_cast<int>(rule.pattern.elements.size());
  int lo = 1, hi = n;
  if (dots == std::string_view::npos) {
    lo = hi = parse_num(word);
  } else {
    if (dots > 0) lo = parse_num(word.substr(0, dots));
    if (dots + 2 < word.size()) hi = parse_num(word.substr(dots + 2));
  }
  if (lo < 1 || hi > n || lo > hi)
    cur.fail("capture range " + std::string(word) + " outside 1.." + std::to_string(n));
  rule.capture_begin = lo - 1;
  rule.capture_end = hi;
}

}  // namespace

Rule compile_rule(std::string_view dsl, const LexiconMap& lexicons, std::string id) {
  Cursor cur{dsl};
  Rule rule;
  rule.id = std::move(id);
  rule.type = parse_type_or_fail(cur, cur.take_word());
  if (!cur.eat("<-")) cur.fail("expected '<-'");

  bool saw_capture = false;
  while (!cur.done()) {
    cur.skip_ws();
    const char c = cur.peek();
    if (c == ':') {
      if (!cur.eat(":capture")) cur.fail("expected ':capture'");
      if (rule.pattern.elements.empty()) cur.fail("capture before any element");
      parse_capture(cur, rule);
      saw_capture = true;
      continue;
    }
    if (c == '@') {
      ++cur.pos;
      const std::string_view word = cur.take_word();
      try {
        rule.priority = std::stoi(std::string(word));
      } catch (const std::exception&) {
        cur.fail("bad priority '" + std::string(word) + "'");
      }
      continue;
    }
    PatternElement elem;
    if (c == '"') {
      ++cur.pos;
      elem.pred.kind = TokenPredicate::Kind::Literals;
      const std::string lit(cur.take_until('"'));
      if (lit.empty()) cur.fail("empty literal");
      if (contains_whitespace(lit)) cur.fail("literal contains whitespace (one token only)");
      elem.pred.literals.push_back(lit);
    } else if (c == '(') {
      elem.pred = parse_alternation(cur);
    } else if (c == '[') {
      elem.pred = parse_bracket(cur, lexicons);
    } else {
      cur.fail(std::string("unexpected character '") + c + "'");
    }
    elem.quant = parse_quantifier(cur);
    rule.pattern.elements.push_back(std::move(elem));
  }

  if (rule.pattern.elements.empty()) cur.fail("rule has no elements");
  const bool any_required = std::any_of(
      rule.pattern.elements.begin(), rule.pattern.elements.end(), [](const PatternElement& e) {
        return e.quant == Quantifier::One || e.quant == Quantifier::Plus;
      });
  if (!any_required) cur.fail("rule can match the empty sequence (all elements optional)");
  if (!saw_capture) {
    rule.capture_begin = 0;
    rule.capture_end = static_cast<int>(rule.pattern.elements.size());
  }
  return rule;
}

std::string print_rule(const Rule& rule) {
  std::ostringstream out;
  out << to_string(rule.type) << " <-";
  for (const PatternElement& e : rule.pattern.elements) {
    out << ' ';
    switch (e.pred.kind) {
      case TokenPredicate::Kind::Literals:
        if (e.pred.literals.size() == 1) {
          out << '"' << e.pred.literals[0] << '"';
        } else {
          out << '(';
          for (size_t i = 0; i < e.pred.literals.size(); ++i)
            out << (i ? "|" : "") << e.pred.literals[i];
          out << ')';
        }
        break;
      case TokenPredicate::Kind::Pos: out << "[pos:" << e.pred.pos_tag << ']'; break;
      case TokenPredicate::Kind::Lexicon: out << "[lex:" << e.pred.lexicon << ']'; break;
      case TokenPredicate::Kind::Regex: out << "[re:" << e.pred.regex_src << ']'; break;
    }
    switch (e.quant) {
      case Quantifier::One: break;
      case Quantifier::Optional: out << '?'; break;
      case Quantifier::Plus: out << '+'; break;
      case Quantifier::Star: out << '*'; break;
    }
  }
  if (rule.capture_begin != 0 || rule.capture_end != static_cast<int>(rule.pattern.elements.size()))
    out << " :capture " << (rule.capture_begin + 1) << ".." << rule.capture_end;
  if (rule.priority != 0) out << " @ " << rule.priority;
  return out.str();
}

CharRule compile_char_rule(std::string_view dsl, std::string id) {
  Cursor cur{dsl};
  CharRule rule;
  rule.id = std::move(id);
  rule.type = parse_type_or_fail(cur, cur.take_word());
  if (!cur.eat("<~")) cur.fail("expected '<~'");
  cur.skip_ws();
  rule.regex_src = std::string(trim(cur.text.substr(cur.pos)));
  if (rule.regex_src.empty()) cur.fail("missing regex");
  rule.compiled = compile_token_regex(rule.regex_src);
  return rule;
}

RuleSet parse_ruleset(std::string_view text, std::string_view origin,
                      const LexiconMap& lexicons) {
  RuleSet out;
  std::vector<std::string> errors;
  size_t line_no = 0;
  size_t pos = 0;
  int next_id = 1;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::string_view body = trim(line);
    if (!body.empty() && body.front() != '#') {
      char idbuf[16];
      std::snprintf(idbuf, sizeof idbuf, "r%03d", next_id);
      try {
        if (body.find("<~") != std::string_view::npos) {
          out.char_rules.push_back(compile_char_rule(body, idbuf));
        } else {
          out.rules.push_back(compile_rule(body, lexicons, idbuf));
        }
        ++next_id;
      } catch (const DataError& e) {
        errors.push_back(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (!errors.empty()) {
    std::string msg = std::to_string(errors.size()) + " bad rule line(s):";
    for (const std::string& e : errors) msg += "\n  " + e;
    throw DataError(msg);
  }
  return out;
}

RuleSet load_ruleset(const std::string& path, const LexiconMap& lexicons) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open ruleset '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ruleset(buf.str(), path, lexicons);
}

// --- matching ----------------------------------------------------------------

namespace {

// Greedy backtracking over elements. counts[k] = tokens consumed by element
// k; returns true when elements [elem..] match some prefix of
// tokens[pos..]. Each quantifier tries its largest feasible count first.
bool match_elements(const std::vector<PatternElement>& elements, size_t elem,
                    std::span<const Token> tokens, size_t pos, std::vector<int>& counts) {
  if (elem == elements.size()) return true;
  const PatternElement& e = elements[elem];

  size_t run = 0;  // longest run of tokens matching this predicate
  const size_t max_run = (e.quant == Quantifier::One || e.quant == Quantifier::Optional)
                             ? 1
                             : tokens.size() - pos;
  while (run < max_run && pos + run < tokens.size() && e.pred.matches(tokens[pos + run])) ++run;

  const size_t min_take =
      (e.quant == Quantifier::One || e.quant == Quantifier::Plus) ? 1 : 0;
  if (run < min_take) return false;
  for (size_t take = run; take + 1 > min_take; --take) {
    counts[elem] = static_cast<int>(take);
    if (match_elements(elements, elem + 1, tokens, pos + take, counts)) return true;
    if (take == 0) break;
  }
  return false;
}

struct Candidate {
  EntitySpan span;
  int priority;
  std::string_view id;
};

}  // namespace

std::optional<EntitySpan> match_rule_at(const Rule& rule, const Sentence& sentence, int start) {
  const std::span<const Token> tokens(sentence.tokens);
  if (start < 0 || static_cast<size_t>(start) > tokens.size()) return std::nullopt;
  std::vector<int> counts(rule.pattern.elements.size(), 0);
  if (!match_elements(rule.pattern.elements, 0, tokens, static_cast<size_t>(start), counts))
    return std::nullopt;
  int span_start = start;
  for (int k = 0; k < rule.capture_begin; ++k) span_start += counts[static_cast<size_t>(k)];
  int span_end = start;
  for (int k = 0; k < rule.capture_end; ++k) span_end += counts[static_cast<size_t>(k)];
  if (span_start >= span_end) return std::nullopt;  // capture matched zero tokens
  return EntitySpan{0, span_start, span_end, rule.type};
}

std::vector<EntitySpan> match_rules(const Sentence& sentence, std::span<const Rule> rules,
                                    std::span<const CharRule> char_rules) {
  std::vector<Candidate> candidates;
  const int n = static_cast<int>(sentence.size());
  for (const Rule& rule : rules)
    for (int start = 0; start < n; ++start)
      if (auto span = match_rule_at(rule, sentence, start))
        candidates.push_back({*span, rule.priority, rule.id});
  for (const CharRule& rule : char_rules)
    for (int i = 0; i < n; ++i)
      if (std::regex_match(sentence.tokens[static_cast<size_t>(i)].surface, *rule.compiled))
        candidates.push_back({{0, i, i + 1, rule.type}, 0, rule.id});

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.span.length() != b.span.length()) return a.span.length() > b.span.length();
    if (a.priority != b.priority) return a.priority > b.priority;
    if (a.span.start != b.span.start) return a.span.start < b.span.start;
    return a.id < b.id;
  });

  std::vector<char> claimed(static_cast<size_t>(n), 0);
  std::vector<EntitySpan> result;
  for (const Candidate& c : candidates) {
    bool free = true;
    for (int i = c.span.start; i < c.span.end && free; ++i)
      free = !claimed[static_cast<size_t>(i)];
    if (!free) continue;
    for (int i = c.span.start; i < c.span.end; ++i) claimed[static_cast<size_t>(i)] = 1;
    result.push_back(c.span);
  }
  std::sort(result.begin(), result.end(),
            [](const EntitySpan& a, const EntitySpan& b) { return a.start < b.start; });
  return result;
}

}  // namespace ner

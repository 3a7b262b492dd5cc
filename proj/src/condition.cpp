#include "episodic/condition.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <tuple>

#include "episodic/error.hpp"

namespace episodic {

Selector Selector::value_set(std::string name, std::string term, std::vector<std::string> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return {std::move(name), {std::move(term)}, SelectorKind::ValueSet, std::move(values), {}};
}

Selector Selector::in_range(std::string name, std::string term, Interval range) {
  return {std::move(name), {std::move(term)}, SelectorKind::Range, {}, range};
}

Selector Selector::isa(std::string name, std::string term, std::string node) {
  return {std::move(name), {std::move(term)}, SelectorKind::IsA, {std::move(node)}, {}};
}

Selector Selector::relation(std::string name, std::vector<std::string> args) {
  return {std::move(name), std::move(args), SelectorKind::Present, {}, {}};
}

std::string to_string(const Selector& s) {
  std::string out = s.name;
  if (!s.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < s.args.size(); ++i) {
      if (i) out += ',';
      out += s.args[i];
    }
    out += ')';
  }
  switch (s.kind) {
    case SelectorKind::Present: break;
    case SelectorKind::ValueSet:
      if (s.values.size() == 1) {
        out += "=" + s.values.front();
      } else {
        out += " in {";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
          if (i) out += ',';
          out += s.values[i];
        }
        out += '}';
      }
      break;
    case SelectorKind::Range: out += " in " + to_string(s.range); break;
    case SelectorKind::IsA: out += " isa " + s.values.front(); break;
  }
  return out;
}

namespace {

std::string mark_text(const std::optional<MarkConstraint>& m, const char* var, int index) {
  if (!m) return var + std::to_string(index + 1);
  if (m->label) return "<" + *m->label + ">";
  const Interval& iv = *m->range;
  if (iv.is_point()) return std::to_string(iv.lo);
  return bound_to_string(iv.lo) + ".." + bound_to_string(iv.hi);
}

const char* attr_name(TAttr a) {
  static const char* names[] = {"", "T1", "T2", "T3", "T4", "T5", "T6"};
  return names[static_cast<int>(a)];
}

auto constraint_key(const TemporalConstraint& c) { return std::tuple(c.first, c.second, static_cast<int>(c.attr)); }

}  // namespace

std::string to_string(const EventPattern& p, int index) {
  std::string out = "{";
  for (std::size_t i = 0; i < p.selectors.size(); ++i) {
    if (i) out += " & ";
    out += to_string(p.selectors[i]);
  }
  out += "}@[" + mark_text(p.start, "TS", index) + "," + mark_text(p.finish, "TF", index) + "]";
  if (p.max_gap) out += "~" + std::to_string(*p.max_gap);
  return out;
}

std::string to_string(const TemporalConstraint& c) {
  std::string out = "[";
  out += attr_name(c.attr);
  out += "(" + std::to_string(c.first + 1);
  if (!is_duration(c.attr)) out += "," + std::to_string(c.second + 1);
  out += ") in " + to_string(c.range) + "]";
  return out;
}

std::string to_string(const RuleCondition& c) {
  std::vector<std::string> items;
  for (std::size_t i = 0; i < c.patterns.size(); ++i) items.push_back(to_string(c.patterns[i], static_cast<int>(i)));
  for (const auto& s : c.statics) items.push_back(to_string(s));
  for (const auto& t : c.temporals) items.push_back(to_string(t));
  if (items.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += " & ";
    out += items[i];
  }
  return out;
}

TemporalConstraint flip(const TemporalConstraint& c) {
  if (is_duration(c.attr)) return c;
  TemporalConstraint out = c;
  std::swap(out.first, out.second);
  out.range = c.range.negate();
  if (c.attr == TAttr::T2) out.attr = TAttr::T3;
  if (c.attr == TAttr::T3) out.attr = TAttr::T2;
  return out;
}

void RuleCondition::normalize() {
  auto sort_selectors = [](std::vector<Selector>& sels) {
    for (auto& s : sels)
      if (s.kind == SelectorKind::ValueSet) {
        std::sort(s.values.begin(), s.values.end());
        s.values.erase(std::unique(s.values.begin(), s.values.end()), s.values.end());
      }
    std::sort(sels.begin(), sels.end(), [](const Selector& a, const Selector& b) { return to_string(a) < to_string(b); });
    sels.erase(std::unique(sels.begin(), sels.end()), sels.end());
  };
  for (auto& p : patterns) sort_selectors(p.selectors);
  sort_selectors(statics);

  std::map<std::tuple<int, int, int>, TemporalConstraint> merged;
  for (auto c : temporals) {
    if (is_duration(c.attr)) {
      c.second = c.first;
      c.attr = c.first == 0 ? TAttr::T5 : TAttr::T6;
    } else if (c.first > c.second) {
      c = flip(c);
    }
    auto [it, fresh] = merged.emplace(constraint_key(c), c);
    if (!fresh) it->second.range = it->second.range.intersect(c.range);
  }
  temporals.clear();
  for (auto& [_, c] : merged)
    if (!c.range.unbounded()) temporals.push_back(c);
}

std::size_t RuleCondition::complexity() const {
  std::size_t n = statics.size() + temporals.size();
  for (const auto& p : patterns) n += p.selectors.size() + (p.start ? 1 : 0) + (p.finish ? 1 : 0);
  return n;
}

std::vector<std::string> RuleCondition::variables() const {
  std::set<std::string> vars;
  auto collect = [&](const Selector& s) {
    for (const auto& a : s.args)
      if (is_variable(a)) vars.insert(a);
  };
  for (const auto& p : patterns)
    for (const auto& s : p.selectors) collect(s);
  for (const auto& s : statics) collect(s);
  return {vars.begin(), vars.end()};
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

[[noreturn]] void fail(std::string_view text, const std::string& why) {
  throw Error(ErrorCode::ParseError, why + " in '" + std::string(text) + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_open(char c) { return c == '{' || c == '[' || c == '(' || c == '<'; }
bool is_close(char c) { return c == '}' || c == ']' || c == ')' || c == '>'; }

std::vector<std::string_view> split_top(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    // '>' in "=>" never reaches here; labels are the only angle brackets.
    if (is_open(c)) ++depth;
    if (is_close(c)) --depth;
    if (depth < 0) fail(text, "unbalanced brackets");
    if (depth == 0 && c == sep) {
      parts.push_back(trim(text.substr(begin, i - begin)));
      begin = i + 1;
    }
  }
  if (depth != 0) fail(text, "unbalanced brackets");
  parts.push_back(trim(text.substr(begin)));
  return parts;
}

bool ident_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '[' && c != ']' && c != '{' &&
         c != '}' && c != ',' && c != '=' && c != '&' && c != '<' && c != '>' && c != '~' && c != '@';
}

std::string ident(std::string_view text, std::string_view whole) {
  text = trim(text);
  if (text.empty()) fail(whole, "empty identifier");
  for (char c : text)
    if (!ident_char(c)) fail(whole, std::string("bad character '") + c + "'");
  return std::string(text);
}

Interval parse_interval(std::string_view text, std::string_view whole) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') fail(whole, "expected [lo,hi]");
  auto parts = split_top(text.substr(1, text.size() - 2), ',');
  if (parts.size() != 2) fail(whole, "expected [lo,hi]");
  auto lo = parse_bound(parts[0]), hi = parse_bound(parts[1]);
  if (!lo || !hi) fail(whole, "bad interval bound");
  if (*lo == kPosInf || *hi == kNegInf) fail(whole, "interval bound points the wrong way");
  return {*lo, *hi};
}

std::optional<MarkConstraint> parse_mark(std::string_view text, std::string_view whole) {
  text = trim(text);
  if (text.size() > 2 && (text.substr(0, 2) == "TS" || text.substr(0, 2) == "TF")) return std::nullopt;
  if (!text.empty() && text.front() == '<') {
    if (text.back() != '>') fail(whole, "unterminated mark label");
    return MarkConstraint::of(ident(text.substr(1, text.size() - 2), whole));
  }
  if (auto dots = text.find(".."); dots != std::string_view::npos) {
    auto lo = parse_bound(trim(text.substr(0, dots))), hi = parse_bound(trim(text.substr(dots + 2)));
    if (!lo || !hi) fail(whole, "bad mark range");
    return MarkConstraint::of(Interval{*lo, *hi});
  }
  auto v = parse_bound(text);
  if (!v || *v == kNegInf || *v == kPosInf) fail(whole, "bad mark '" + std::string(text) + "'");
  return MarkConstraint::of(Interval::point(*v));
}

EventPattern parse_pattern(std::string_view text, std::string_view whole) {
  EventPattern p;
  auto close = text.find('}');
  // find the brace matching the opening one
  int depth = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (is_open(text[i])) ++depth;
    if (is_close(text[i]) && --depth == 0) {
      close = i;
      break;
    }
  }
  if (close == std::string_view::npos) fail(whole, "unterminated pattern");
  auto body = trim(text.substr(1, close - 1));
  if (!body.empty())
    for (auto part : split_top(body, '&')) p.selectors.push_back(parse_selector(part));
  auto rest = trim(text.substr(close + 1));
  if (rest.size() < 2 || rest.substr(0, 2) != "@[") fail(whole, "pattern needs @[start,finish]");
  auto end = rest.find(']');
  // mark ranges never contain brackets, labels never contain ']'
  if (end == std::string_view::npos) fail(whole, "unterminated marks");
  auto marks = split_top(rest.substr(2, end - 2), ',');
  if (marks.size() != 2) fail(whole, "pattern needs two marks");
  p.start = parse_mark(marks[0], whole);
  p.finish = parse_mark(marks[1], whole);
  auto tail = trim(rest.substr(end + 1));
  if (!tail.empty()) {
    if (tail.front() != '~') fail(whole, "unexpected text after pattern");
    auto g = parse_bound(trim(tail.substr(1)));
    if (!g || *g < 0 || *g == kPosInf) fail(whole, "bad gap tolerance");
    p.max_gap = *g;
  }
  return p;
}

TemporalConstraint parse_temporal(std::string_view text, std::string_view whole) {
  // [Tk(i[,j]) in [lo,hi]]
  if (text.size() < 4 || text.back() != ']') fail(whole, "bad temporal constraint");
  auto inner = trim(text.substr(1, text.size() - 2));
  if (inner.size() < 3 || inner[0] != 'T' || inner[1] < '1' || inner[1] > '6') fail(whole, "expected T1..T6");
  TemporalConstraint c;
  c.attr = static_cast<TAttr>(inner[1] - '0');
  auto open = inner.find('('), close = inner.find(')');
  if (open != 2 || close == std::string_view::npos) fail(whole, "expected Tk(i,j)");
  auto idx = split_top(inner.substr(open + 1, close - open - 1), ',');
  auto first = parse_bound(idx[0]);
  if (!first || *first < 1 || *first == kPosInf) fail(whole, "bad pattern index");
  c.first = static_cast<int>(*first - 1);
  if (is_duration(c.attr)) {
    if (idx.size() != 1) fail(whole, "durations take one pattern index");
    c.second = c.first;
  } else {
    if (idx.size() != 2) fail(whole, "T1..T4 take two pattern indices");
    auto second = parse_bound(idx[1]);
    if (!second || *second < 1 || *second == kPosInf) fail(whole, "bad pattern index");
    c.second = static_cast<int>(*second - 1);
    if (c.second == c.first) fail(whole, "T1..T4 need distinct patterns");
  }
  auto rest = trim(inner.substr(close + 1));
  if (rest.substr(0, 2) == "in") {
    c.range = parse_interval(rest.substr(2), whole);
  } else if (!rest.empty() && rest.front() == '=') {
    auto v = parse_bound(trim(rest.substr(1)));
    if (!v || *v == kNegInf || *v == kPosInf) fail(whole, "bad point value");
    c.range = Interval::point(*v);
  } else {
    fail(whole, "expected 'in [lo,hi]'");
  }
  return c;
}

}  // namespace

Selector parse_selector(std::string_view text) {
  const std::string_view whole = text;
  text = trim(text);
  Selector s;
  std::size_t i = 0;
  while (i < text.size() && ident_char(text[i])) ++i;
  s.name = ident(text.substr(0, i), whole);
  auto rest = trim(text.substr(i));
  if (!rest.empty() && rest.front() == '(') {
    auto close = rest.find(')');
    if (close == std::string_view::npos) fail(whole, "unterminated argument list");
    for (auto arg : split_top(rest.substr(1, close - 1), ',')) s.args.push_back(ident(arg, whole));
    rest = trim(rest.substr(close + 1));
  }
  if (rest.empty()) {
    s.kind = SelectorKind::Present;
    return s;
  }
  if (s.args.size() != 1) fail(whole, "value constraints need exactly one object");
  if (rest.front() == '=') {
    s.kind = SelectorKind::ValueSet;
    s.values = {ident(rest.substr(1), whole)};
  } else if (rest.substr(0, 3) == "isa") {
    s.kind = SelectorKind::IsA;
    s.values = {ident(rest.substr(3), whole)};
  } else if (rest.substr(0, 2) == "in") {
    auto body = trim(rest.substr(2));
    if (!body.empty() && body.front() == '{') {
      if (body.back() != '}') fail(whole, "unterminated value set");
      s.kind = SelectorKind::ValueSet;
      for (auto v : split_top(body.substr(1, body.size() - 2), ',')) s.values.push_back(ident(v, whole));
      std::sort(s.values.begin(), s.values.end());
      s.values.erase(std::unique(s.values.begin(), s.values.end()), s.values.end());
    } else {
      s.kind = SelectorKind::Range;
      s.range = parse_interval(body, whole);
    }
  } else {
    fail(whole, "unrecognised selector constraint");
  }
  return s;
}

RuleCondition parse_condition(std::string_view text) {
  const std::string_view whole = text;
  text = trim(text);
  RuleCondition c;
  if (text == "true" || text.empty()) return c;
  for (auto item : split_top(text, '&')) {
    if (item.empty()) fail(whole, "empty conjunct");
    if (item.front() == '{') {
      c.patterns.push_back(parse_pattern(item, whole));
    } else if (item.size() > 2 && item[0] == '[' && item[1] == 'T') {
      c.temporals.push_back(parse_temporal(item, whole));
    } else {
      c.statics.push_back(parse_selector(item));
    }
  }
  for (const auto& t : c.temporals)
    if (t.first >= static_cast<int>(c.patterns.size()) || t.second >= static_cast<int>(c.patterns.size()))
      fail(whole, "temporal constraint references a missing pattern");
  c.normalize();
  return c;
}

ParsedRuleText parse_rule_text(std::string_view text) {
  auto arrow = text.rfind("=>");
  if (arrow == std::string_view::npos) throw Error(ErrorCode::ParseError, "rule needs '=> <class>': " + std::string(text));
  ParsedRuleText out;
  out.condition = parse_condition(text.substr(0, arrow));
  out.label = ident(text.substr(arrow + 2), text);
  return out;
}

}  // namespace episodic

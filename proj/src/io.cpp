#include "episodic/io.hpp"

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "episodic/error.hpp"

namespace episodic {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_name(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.')) return false;
  return true;
}

std::optional<Tick> as_int(std::string_view s) {
  Tick v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t lineno, const Schema& schema)
      : line_(line), lineno_(lineno), schema_(schema) {}

  Event event() {
    auto at = line_.rfind('@');
    if (at == std::string_view::npos) fail(line_.size(), "expected '@ [start,finish]'");
    Event e;
    e.description = EventDescription(atoms(line_.substr(0, at)));
    auto span = trim(line_.substr(at + 1));
    const std::size_t col = at + 2;
    if (span.size() < 2 || span.front() != '[' || span.back() != ']') fail(col, "expected '[start,finish]'");
    auto inner = span.substr(1, span.size() - 2);
    auto comma = inner.find(',');
    if (comma == std::string_view::npos) fail(col, "expected '[start,finish]'");
    e.start = mark(trim(inner.substr(0, comma)), col);
    e.finish = mark(trim(inner.substr(comma + 1)), col);
    if (e.start.tick > e.finish.tick)
      throw ParseError(ErrorCode::NonMonotoneInterval, lineno_,
                       "start " + std::to_string(e.start.tick) + " after finish " + std::to_string(e.finish.tick), col);
    return e;
  }

 private:
  [[noreturn]] void fail(std::size_t col, const std::string& why) const { throw ParseError(lineno_, why, col + 1); }

  TemporalMark mark(std::string_view text, std::size_t col) const {
    TemporalMark m;
    auto colon = text.find(':');
    auto tick = as_int(trim(text.substr(0, colon)));
    if (!tick || *tick < 0) fail(col, "bad tick '" + std::string(text) + "'");
    m.tick = *tick;
    if (colon != std::string_view::npos) {
      auto tag = trim(text.substr(colon + 1));
      if (tag.empty()) fail(col, "empty calendar tag");
      m.calendar_tag = std::string(tag);
    }
    return m;
  }

  std::vector<Atom> atoms(std::string_view text) const {
    std::vector<Atom> out;
    std::size_t depth = 0, begin = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i < text.size() && text[i] == '(') ++depth;
      if (i < text.size() && text[i] == ')') --depth;
      if (i == text.size() || (text[i] == ',' && depth == 0)) {
        auto item = trim(text.substr(begin, i - begin));
        if (item.empty()) fail(begin, "empty atom");
        out.push_back(atom(item, begin));
        begin = i + 1;
      }
    }
    return out;
  }

  Atom atom(std::string_view text, std::size_t col) const {
    Atom a;
    auto eq = text.find('=');
    auto head = trim(text.substr(0, eq));
    auto open = head.find('(');
    if (open == std::string_view::npos) {
      a.name = std::string(head);
    } else {
      if (head.back() != ')') fail(col, "unbalanced parentheses in '" + std::string(text) + "'");
      a.name = std::string(trim(head.substr(0, open)));
      auto args = head.substr(open + 1, head.size() - open - 2);
      std::size_t b = 0;
      for (std::size_t i = 0; i <= args.size(); ++i)
        if (i == args.size() || args[i] == ',') {
          auto arg = trim(args.substr(b, i - b));
          if (!is_name(arg)) fail(col, "bad object id '" + std::string(arg) + "'");
          a.args.emplace_back(arg);
          b = i + 1;
        }
    }
    if (!is_name(a.name)) fail(col, "bad attribute name '" + a.name + "'");
    if (eq != std::string_view::npos) {
      auto value = trim(text.substr(eq + 1));
      if (value.empty()) fail(col, "missing value after '='");
      const auto* d = schema_.find(a.name);
      const bool linear = d ? d->kind == DomainKind::Linear : as_int(value).has_value();
      if (linear) {
        auto v = as_int(value);
        if (!v) throw ParseError(ErrorCode::SchemaViolation, lineno_, "'" + a.name + "' needs an integer value, got '" + std::string(value) + "'", col + 1);
        a.value = *v;
      } else {
        if (!is_name(value)) fail(col, "bad value '" + std::string(value) + "'");
        a.value = std::string(value);
      }
    }
    try {
      schema_.check(a);
    } catch (const Error& e) {
      throw ParseError(e.code(), lineno_, e.what(), col + 1);
    }
    return a;
  }

  std::string_view line_;
  std::size_t lineno_;
  const Schema& schema_;
};

}  // namespace

std::vector<Episode> parse_episodes(std::istream& in, const Schema& schema) {
  std::vector<Episode> out;
  std::set<std::string> ids;
  std::string raw;
  std::size_t lineno = 0;
  bool open = false;
  auto close = [&] {
    if (!open) return;
    if (out.back().events.empty()) throw ParseError(lineno, "episode '" + out.back().id + "' has no events");
    open = false;
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) {
      close();
      continue;
    }
    const bool indented = std::isspace(static_cast<unsigned char>(line.front()));
    if (!indented) {
      close();
      std::istringstream words{std::string(line)};
      std::string kw, id, label, extra;
      words >> kw >> id >> label;
      if (kw != "episode" || id.empty() || label.empty() || (words >> extra))
        throw ParseError(lineno, "expected 'episode <id> <class>'", 1);
      if (!is_name(id) || !is_name(label)) throw ParseError(lineno, "bad episode id or class", 1);
      if (!ids.insert(id).second) throw ParseError(ErrorCode::DuplicateId, lineno, "duplicate episode id '" + id + "'");
      out.push_back({id, {}, label});
      open = true;
      continue;
    }
    if (!open) throw ParseError(lineno, "event line outside an episode", 1);
    out.back().events.push_back(LineParser(line, lineno, schema).event());
  }
  close();
  for (const auto& ep : out)
    for (const auto& e : ep.events)
      for (const auto* m : {&e.start, &e.finish})
        if (m->calendar_tag && !schema.calendar.contains(*m->calendar_tag))
          throw Error(ErrorCode::SchemaViolation,
                      "episode '" + ep.id + "': calendar tag '" + *m->calendar_tag + "' does not resolve");
  return out;
}

std::vector<Episode> load_episodes(const std::string& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  return parse_episodes(in, schema);
}

void write_episodes(std::ostream& out, const std::vector<Episode>& episodes) {
  auto mark = [](const TemporalMark& m) {
    return std::to_string(m.tick) + (m.calendar_tag ? ":" + *m.calendar_tag : std::string());
  };
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    const auto& ep = episodes[i];
    if (i) out << '\n';
    out << "episode " << ep.id << ' ' << ep.label << '\n';
    for (const auto& e : ep.events)
      out << "  " << to_string(e.description) << " @ [" << mark(e.start) << ',' << mark(e.finish) << "]\n";
  }
}

void write_file_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path tmp = fs::path(path);
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + tmp.string() + "'");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot move file into '" + path + "'");
  }
}

void save_episodes(const std::string& path, const std::vector<Episode>& episodes) {
  std::ostringstream out;
  write_episodes(out, episodes);
  write_file_atomic(path, out.str());
}

}  // namespace episodic

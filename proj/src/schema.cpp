#include "episodic/schema.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "episodic/error.hpp"

namespace episodic {

void Schema::add(AttributeDomain domain) {
  if (domain.kind == DomainKind::Linear && domain.lo > domain.hi)
    throw Error(ErrorCode::IllegalParameter, "linear domain '" + domain.name + "' has lo > hi");
  if (domain.kind == DomainKind::Relation && (domain.arity < 0 || domain.arity > 2))
    throw Error(ErrorCode::IllegalParameter, "relation '" + domain.name + "' arity must be 0..2");
  auto name = domain.name;
  if (!domains_.emplace(name, std::move(domain)).second)
    throw Error(ErrorCode::IllegalParameter, "duplicate attribute '" + name + "'");
}

const AttributeDomain* Schema::find(const std::string& name) const {
  auto it = domains_.find(name);
  return it == domains_.end() ? nullptr : &it->second;
}

bool Schema::value_isa(const std::string& attr, const std::string& value, const std::string& node) const {
  if (value == node) return true;
  const auto* d = find(attr);
  if (!d || d->kind != DomainKind::Structured) return false;
  return d->hierarchy.is_ancestor_or_self(node, value);
}

void Schema::check(const Atom& atom) const {
  if (!strict()) return;
  const auto* d = find(atom.name);
  if (!d) throw Error(ErrorCode::SchemaViolation, "unknown attribute '" + atom.name + "'");
  for (const auto& obj : atom.args)
    if (obj.empty() || !(std::islower(static_cast<unsigned char>(obj[0])) || std::isdigit(static_cast<unsigned char>(obj[0]))))
      throw Error(ErrorCode::SchemaViolation, "object id '" + obj + "' must start lowercase");
  switch (d->kind) {
    case DomainKind::Relation:
      if (!atom.is_relation() || static_cast<int>(atom.args.size()) != d->arity)
        throw Error(ErrorCode::SchemaViolation, "relation '" + to_string(atom) + "' does not fit arity " + std::to_string(d->arity));
      return;
    case DomainKind::Nominal: {
      auto s = std::get_if<std::string>(&atom.value);
      if (atom.args.size() != 1 || !s)
        throw Error(ErrorCode::SchemaViolation, "'" + to_string(atom) + "' must be attr(obj)=value");
      if (std::find(d->values.begin(), d->values.end(), *s) == d->values.end())
        throw Error(ErrorCode::SchemaViolation, "value '" + *s + "' not in domain of '" + d->name + "'");
      return;
    }
    case DomainKind::Linear: {
      auto v = std::get_if<Tick>(&atom.value);
      if (atom.args.size() != 1 || !v)
        throw Error(ErrorCode::SchemaViolation, "'" + to_string(atom) + "' must be attr(obj)=<integer>");
      if (*v < d->lo || *v > d->hi)
        throw Error(ErrorCode::SchemaViolation, "value " + std::to_string(*v) + " outside domain of '" + d->name + "'");
      return;
    }
    case DomainKind::Structured: {
      auto s = std::get_if<std::string>(&atom.value);
      if (atom.args.size() != 1 || !s)
        throw Error(ErrorCode::SchemaViolation, "'" + to_string(atom) + "' must be attr(obj)=value");
      if (!d->hierarchy.contains(*s))
        throw Error(ErrorCode::SchemaViolation, "value '" + *s + "' not in hierarchy of '" + d->name + "'");
      return;
    }
  }
}

void Schema::check(const Episode& ep) const {
  check_episode(ep);
  for (const auto& e : ep.events) {
    for (const auto& a : e.description.atoms) check(a);
    for (const auto* mark : {&e.start, &e.finish})
      if (mark->calendar_tag && !calendar.contains(*mark->calendar_tag))
        throw Error(ErrorCode::SchemaViolation, "calendar tag '" + *mark->calendar_tag + "' does not resolve");
  }
}

Schema Schema::parse(std::istream& in, const std::string& base_dir) {
  Schema schema;
  std::string line;
  std::size_t lineno = 0;
  AttributeDomain* open_structured = nullptr;
  std::string open_name;
  auto flush = [&]() {
    open_structured = nullptr;
    open_name.clear();
  };
  std::vector<AttributeDomain> pending;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string kind, name;
    if (!(ss >> kind)) continue;
    try {
      if (kind == "edge") {
        std::string child, parent;
        if (!open_structured || !(ss >> child >> parent))
          throw ParseError(lineno, "'edge' must follow a structured attribute and name child and parent");
        open_structured->hierarchy.add_edge(child, parent);
        continue;
      }
      flush();
      if (kind == "calendar") {
        std::string path;
        if (!(ss >> path)) throw ParseError(lineno, "expected 'calendar <path>'");
        std::filesystem::path p(path);
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        schema.calendar = TemporalHierarchy::load(p.string());
        continue;
      }
      if (!(ss >> name)) throw ParseError(lineno, "missing attribute name");
      AttributeDomain d;
      d.name = name;
      if (kind == "nominal") {
        d.kind = DomainKind::Nominal;
        std::string v;
        while (ss >> v) d.values.push_back(v);
        if (d.values.empty()) throw ParseError(lineno, "nominal '" + name + "' needs values");
      } else if (kind == "linear") {
        d.kind = DomainKind::Linear;
        std::string lo, hi;
        if (!(ss >> lo >> hi)) throw ParseError(lineno, "expected 'linear <name> lo hi'");
        auto l = parse_bound(lo), h = parse_bound(hi);
        if (!l || !h || *l == kNegInf || *h == kPosInf) throw ParseError(lineno, "bad linear bounds");
        d.lo = *l;
        d.hi = *h;
      } else if (kind == "structured") {
        d.kind = DomainKind::Structured;
      } else if (kind == "relation") {
        d.kind = DomainKind::Relation;
        std::string arity;
        if (ss >> arity) {
          auto a = parse_bound(arity);
          if (!a) throw ParseError(lineno, "bad arity '" + arity + "'");
          d.arity = static_cast<int>(*a);
        }
      } else {
        throw ParseError(lineno, "unknown record '" + kind + "'");
      }
      pending.push_back(std::move(d));
      if (pending.back().kind == DomainKind::Structured) {
        open_structured = &pending.back();
        open_name = name;
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(lineno, e.what());
    }
  }
  for (auto& d : pending) {
    if (d.kind == DomainKind::Structured && d.hierarchy.empty())
      throw ParseError(lineno, "structured attribute '" + d.name + "' has no edges");
    try {
      schema.add(std::move(d));
    } catch (const Error& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return schema;
}

Schema Schema::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  auto dir = std::filesystem::path(path).parent_path().string();
  return parse(in, dir.empty() ? "." : dir);
}

}  // namespace episodic

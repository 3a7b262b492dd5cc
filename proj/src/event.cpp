#include "episodic/event.hpp"

#include <algorithm>
#include <set>

#include "episodic/error.hpp"

namespace episodic {

std::string to_string(const Atom& atom) {
  std::string out = atom.name;
  if (!atom.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
      if (i) out += ',';
      out += atom.args[i];
    }
    out += ')';
  }
  if (auto s = std::get_if<std::string>(&atom.value)) out += "=" + *s;
  if (auto v = std::get_if<Tick>(&atom.value)) out += "=" + std::to_string(*v);
  return out;
}

EventDescription::EventDescription(std::vector<Atom> a) : atoms(std::move(a)) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
}

std::vector<std::string> EventDescription::objects() const {
  std::set<std::string> objs;
  for (const auto& a : atoms) objs.insert(a.args.begin(), a.args.end());
  return {objs.begin(), objs.end()};
}

std::string to_string(const EventDescription& d) {
  std::string out;
  for (std::size_t i = 0; i < d.atoms.size(); ++i) {
    if (i) out += ", ";
    out += to_string(d.atoms[i]);
  }
  return out;
}

std::vector<std::string> Episode::objects() const {
  std::set<std::string> objs;
  for (const auto& e : events)
    for (const auto& o : e.description.objects()) objs.insert(o);
  return {objs.begin(), objs.end()};
}

void check_episode(const Episode& ep) {
  if (ep.events.empty()) throw Error(ErrorCode::IllegalParameter, "episode '" + ep.id + "' has no events");
  if (ep.label.empty()) throw Error(ErrorCode::IllegalParameter, "episode '" + ep.id + "' has no class");
  for (const auto& e : ep.events) {
    if (e.ts() < 0) throw Error(ErrorCode::IllegalParameter, "negative tick in episode '" + ep.id + "'");
    if (e.ts() > e.tf()) throw Error(ErrorCode::NonMonotoneInterval, "start after finish in episode '" + ep.id + "'");
  }
}

Tick TemporalAttributeVector::get(TAttr a) const {
  switch (a) {
    case TAttr::T1: return t1;
    case TAttr::T2: return t2;
    case TAttr::T3: return t3;
    case TAttr::T4: return t4;
    case TAttr::T5: return t5;
    case TAttr::T6: return t6;
  }
  return 0;
}

Tick temporal_value(TAttr a, Tick ts1, Tick tf1, Tick ts2, Tick tf2) {
  switch (a) {
    case TAttr::T1: return ts2 - ts1;
    case TAttr::T2: return ts2 - tf1;
    case TAttr::T3: return tf2 - ts1;
    case TAttr::T4: return tf2 - tf1;
    case TAttr::T5: return tf1 - ts1;
    case TAttr::T6: return tf2 - ts2;
  }
  return 0;
}

TemporalAttributeVector temporal_attributes(const Event& e1, const Event& e2) {
  const Tick ts1 = e1.ts(), tf1 = e1.tf(), ts2 = e2.ts(), tf2 = e2.tf();
  return {ts2 - ts1, ts2 - tf1, tf2 - ts1, tf2 - tf1, tf1 - ts1, tf2 - ts2};
}

std::string generalize_mark(const TemporalMark& m, const TemporalHierarchy& h, int levels) {
  if (levels < 1) throw Error(ErrorCode::IllegalParameter, "levels must be positive");
  std::string leaf;
  if (m.calendar_tag && h.contains(*m.calendar_tag)) {
    leaf = *m.calendar_tag;
  } else if (auto found = h.leaf_for(m.tick)) {
    leaf = *found;
  } else {
    throw Error(ErrorCode::UnresolvedMark, "tick " + std::to_string(m.tick) + " matches no leaf range");
  }
  return h.tree().ancestor(leaf, levels);
}

Event close_temporal_gap(const Event& a, const Event& b, Tick gap_tolerance) {
  if (a.description != b.description)
    throw Error(ErrorCode::DescriptionMismatch, "gap closing needs identical descriptions");
  const Event& earlier = (b.ts() < a.ts()) ? b : a;
  const Event& later = (&earlier == &a) ? b : a;
  if (later.tf() <= earlier.ts())
    throw Error(ErrorCode::DegenerateOrder, "later event must finish after the earlier one starts");
  const Tick gap = std::max<Tick>(0, later.ts() - earlier.tf());
  if (gap > gap_tolerance)
    throw Error(ErrorCode::GapExceedsTolerance,
                "gap " + std::to_string(gap) + " exceeds tolerance " + std::to_string(gap_tolerance));
  Event out;
  out.description = earlier.description;
  out.start = earlier.start;
  out.finish = later.tf() >= earlier.tf() ? later.finish : earlier.finish;
  return out;
}

}  // namespace episodic

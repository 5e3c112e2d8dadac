#pragma once

#include <map>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "shiftdg/dynsys.hpp"
#include "shiftdg/realization.hpp"

namespace shiftdg::io {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    fail(ErrorCode::Malformed, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::string str(const json& j) {
  if (!j.is_string()) fail(ErrorCode::Malformed, "expected a string, got " + j.dump());
  return j.get<std::string>();
}

inline const json& array(const json& j) {
  if (!j.is_array()) fail(ErrorCode::Malformed, "expected an array, got " + j.dump());
  return j;
}

inline std::vector<Vertex> vertices(const Digraph& g, const json& j) {
  std::vector<Vertex> out;
  for (const auto& x : array(j)) out.push_back(g.at(str(x)));
  return out;
}

inline json labels(const Digraph& g, const std::vector<Vertex>& vs) {
  json out = json::array();
  for (Vertex v : vs) out.push_back(g.label(v));
  return out;
}

}  // namespace detail

// ---- digraphs and walks

inline json to_json(const Digraph& g) {
  json edges = json::array();
  for (auto [u, v] : g.edges()) edges.push_back({g.label(u), g.label(v)});
  return {{"vertices", g.labels()}, {"edges", edges}};
}

inline Digraph digraph_from_json(const json& j) {
  Digraph g;
  for (const auto& v : detail::array(detail::field(j, "vertices"))) g.add_vertex(detail::str(v));
  for (const auto& e : detail::array(detail::field(j, "edges"))) {
    if (!e.is_array() || e.size() != 2) fail(ErrorCode::Malformed, "edge must be a pair");
    g.add_edge(detail::str(e[0]), detail::str(e[1]));
  }
  return g;
}

inline json to_json(const Digraph& g, const Walk& w) { return {{"steps", detail::labels(g, w.steps)}}; }

inline Walk walk_from_json(const Digraph& g, const json& j) {
  Walk w{detail::vertices(g, detail::field(j, "steps"))};
  if (!is_walk(g, w)) fail(ErrorCode::InvalidWalk);
  return w;
}

inline json to_json(const Digraph& g, const EpWalk& w) {
  return {{"preamble", detail::labels(g, w.preamble)}, {"period", detail::labels(g, w.period)}};
}

/// Labels resolved against g; walk validity is left to the caller.
inline EpWalk epwalk_from_json(const Digraph& g, const json& j) {
  EpWalk w{detail::vertices(g, detail::field(j, "preamble")),
           detail::vertices(g, detail::field(j, "period"))};
  if (w.period.empty()) fail(ErrorCode::Malformed, "empty period");
  return w;
}

// ---- maps

inline json to_json(const DigraphMap& m) {
  json assignment = json::object();
  for (Vertex v = 0; v < m.dom.size(); ++v) assignment[m.dom.label(v)] = m.cod.label(m(v));
  return {{"dom", to_json(m.dom)}, {"cod", to_json(m.cod)}, {"map", assignment}};
}

inline DigraphMap map_from_json(const json& j) {
  DigraphMap m{digraph_from_json(detail::field(j, "dom")), digraph_from_json(detail::field(j, "cod")), {}};
  const json& assignment = detail::field(j, "map");
  if (!assignment.is_object()) fail(ErrorCode::Malformed, "map must be an object");
  for (Vertex v = 0; v < m.dom.size(); ++v) {
    if (!assignment.contains(m.dom.label(v)))
      fail(ErrorCode::Malformed, "map misses vertex '" + m.dom.label(v) + "'");
    m.assignment.push_back(m.cod.at(detail::str(assignment.at(m.dom.label(v)))));
  }
  if (assignment.size() != m.dom.size()) fail(ErrorCode::Malformed, "map has unknown keys");
  return m;
}

inline json to_json(const Pullback& pb) {
  return {{"digraph", to_json(pb.digraph)}, {"proj1", to_json(pb.proj1)}, {"proj2", to_json(pb.proj2)}};
}

inline json to_json(const CompatibilityWitness& w) {
  auto assignment = [](const DigraphMap& m) {
    json a = json::object();
    for (Vertex v = 0; v < m.dom.size(); ++v) a[m.dom.label(v)] = m.cod.label(m(v));
    return a;
  };
  return {{"subset", w.digraph.labels()},
          {"digraph", to_json(w.digraph)},
          {"proj1", assignment(w.proj1)},
          {"proj2", assignment(w.proj2)}};
}

// ---- state spaces and relations

inline json state_json(const Digraph& dom, State s) { return detail::labels(dom, bits_of(s)); }

inline json to_json(const StateSpace& ss) {
  json states = json::array(), edges = json::array();
  for (State s : ss.states) states.push_back(state_json(ss.base.dom, s));
  for (const auto& e : ss.edges) {
    json by = json::array();
    for (auto [a0, a1] : e.induced_by) by.push_back({ss.base.cod.label(a0), ss.base.cod.label(a1)});
    edges.push_back({{"from", state_json(ss.base.dom, e.from)},
                     {"to", state_json(ss.base.dom, e.to)},
                     {"induced_by", by}});
  }
  return {{"states", states}, {"edges", edges}};
}

inline json to_json(const Digraph& g, const Relation& r) {
  json out = json::array();
  for (auto [u, v] : r.pairs()) out.push_back({g.label(u), g.label(v)});
  return out;
}

// ---- dichotomy outcomes

inline json to_json(const DigraphMap& phi, const DichotomyOutcome& o) {
  json j;
  if (o.is_lift()) {
    const Lift& l = o.lift();
    j = {{"outcome", "lift"},
         {"witness", to_json(phi.dom, l.witness)},
         {"threshold", l.threshold},
         {"diligent", l.diligent}};
  } else {
    const Obstruct& ob = o.obstruct();
    j = {{"outcome", "obstruct"},
         {"C", to_json(ob.c)},
         {"psi", to_json(ob.psi)},
         {"c_walk", to_json(ob.c, ob.c_walk)},
         {"threshold", ob.threshold}};
  }
  json audit = {{"stage", o.audit.stage}, {"components", o.audit.components}};
  if (o.audit.surviving_start) audit["surviving_start"] = *o.audit.surviving_start;
  if (o.audit.homogeneous) {
    const Homogeneous& H = *o.audit.homogeneous;
    audit["D"] = {{"start", H.m0}, {"spacing", H.spacing}, {"exponent", H.exponent},
                  {"a_D", phi.cod.label(H.a_D)}};
    audit["R"] = to_json(phi.dom, H.R);
    audit["window"] = {o.audit.window_lo, o.audit.window_hi};
    audit["stabilization"] = H.stabilization();
  }
  if (o.audit.dagger_vertex) audit["dagger_vertex"] = phi.dom.label(*o.audit.dagger_vertex);
  if (!o.audit.incompatibility_route.empty()) audit["incompatibility_route"] = o.audit.incompatibility_route;
  j["audit"] = audit;
  return j;
}

inline json to_json(const VerifyReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json x = {{"check", c.name}, {"ok", c.ok}};
    if (!c.detail.empty()) x["detail"] = c.detail;
    checks.push_back(x);
  }
  return {{"ok", r.ok()}, {"checks", checks}};
}

// ---- dynamical systems

inline json to_json(const FiniteDynSys& sys) {
  json alpha = json::object();
  for (std::size_t i = 0; i < sys.size(); ++i) alpha[sys.atoms[i]] = sys.atoms[sys.alpha[i]];
  return {{"atoms", sys.atoms}, {"alpha", alpha}};
}

inline FiniteDynSys dynsys_from_json(const json& j) {
  FiniteDynSys sys;
  for (const auto& a : detail::array(detail::field(j, "atoms"))) sys.atoms.push_back(detail::str(a));
  const json& alpha = detail::field(j, "alpha");
  if (!alpha.is_object() || alpha.size() != sys.size())
    fail(ErrorCode::Malformed, "alpha must map every atom");
  auto index = [&](const std::string& l) {
    auto it = std::find(sys.atoms.begin(), sys.atoms.end(), l);
    if (it == sys.atoms.end()) fail(ErrorCode::Malformed, "unknown atom '" + l + "'");
    return static_cast<std::size_t>(it - sys.atoms.begin());
  };
  for (const auto& a : sys.atoms) {
    if (!alpha.contains(a)) fail(ErrorCode::Malformed, "alpha misses atom '" + a + "'");
    sys.alpha.push_back(index(detail::str(alpha.at(a))));
  }
  require_valid(sys);
  return sys;
}

inline json element_json(const FiniteDynSys& sys, Element x) {
  json out = json::array();
  for (std::size_t i = 0; i < sys.size(); ++i)
    if ((x >> i) & 1U) out.push_back(sys.atoms[i]);
  return out;
}

inline Element element_from_json(const FiniteDynSys& sys, const json& j) {
  Element x = 0;
  for (const auto& a : detail::array(j)) {
    auto it = std::find(sys.atoms.begin(), sys.atoms.end(), detail::str(a));
    if (it == sys.atoms.end()) fail(ErrorCode::Malformed, "unknown atom " + a.dump());
    x |= Element{1} << (it - sys.atoms.begin());
  }
  return x;
}

inline json partition_json(const FiniteDynSys& sys, const Partition& P) {
  json out = json::array();
  for (Element b : P) out.push_back(element_json(sys, b));
  return out;
}

inline Partition partition_from_json(const FiniteDynSys& sys, const json& j) {
  Partition P;
  for (const auto& b : detail::array(j)) P.push_back(element_from_json(sys, b));
  require_partition(sys, P);
  return P;
}

inline json sequence_json(const FiniteDynSys& sys, const ElementSeq& s) {
  json pre = json::array(), per = json::array();
  for (Element x : s.preamble) pre.push_back(element_json(sys, x));
  for (Element x : s.period) per.push_back(element_json(sys, x));
  return {{"preamble", pre}, {"period", per}};
}

inline ElementSeq sequence_from_json(const FiniteDynSys& sys, const json& j) {
  ElementSeq s;
  for (const auto& x : detail::array(detail::field(j, "preamble"))) s.preamble.push_back(element_from_json(sys, x));
  for (const auto& x : detail::array(detail::field(j, "period"))) s.period.push_back(element_from_json(sys, x));
  if (s.period.empty()) fail(ErrorCode::Malformed, "empty period");
  return s;
}

// ---- specs

inline json to_json(const OmegaPartitionSpec& spec) {
  json pre = json::array(), per = json::array();
  for (std::size_t c : spec.coloring.preamble) pre.push_back(spec.labels[c]);
  for (std::size_t c : spec.coloring.period) per.push_back(spec.labels[c]);
  return {{"preamble", pre}, {"period", per}};
}

/// Block labels are ordered by first appearance in the period.
inline OmegaPartitionSpec spec_from_json(const json& j) {
  OmegaPartitionSpec spec;
  auto color = [&](const std::string& l, bool create) -> std::size_t {
    auto it = std::find(spec.labels.begin(), spec.labels.end(), l);
    if (it != spec.labels.end()) return static_cast<std::size_t>(it - spec.labels.begin());
    if (!create) fail(ErrorCode::Malformed, "label '" + l + "' occurs only in the preamble");
    spec.labels.push_back(l);
    return spec.labels.size() - 1;
  };
  for (const auto& x : detail::array(detail::field(j, "period")))
    spec.coloring.period.push_back(color(detail::str(x), true));
  for (const auto& x : detail::array(detail::field(j, "preamble")))
    spec.coloring.preamble.push_back(color(detail::str(x), false));
  require_spec(spec);
  return spec;
}

// ---- DOT

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline std::string to_dot(const Digraph& g, const std::string& name = "G") {
  std::ostringstream os;
  os << "digraph " << quote(name) << " {\n";
  for (const auto& l : g.labels()) os << "  " << quote(l) << ";\n";
  for (auto [u, v] : g.edges()) os << "  " << quote(g.label(u)) << " -> " << quote(g.label(v)) << ";\n";
  os << "}\n";
  return os.str();
}

/// States grouped by fiber, edges labelled with their inducing codomain edges.
inline std::string to_dot(const StateSpace& ss) {
  std::ostringstream os;
  os << "digraph \"state_space\" {\n";
  std::vector<std::vector<State>> groups(ss.base.cod.size());
  for (State s : ss.states)
    if (s) groups[ss.base(static_cast<Vertex>(std::countr_zero(s)))].push_back(s);
  os << "  " << quote(state_label(ss.base.dom, 0)) << ";\n";
  for (Vertex a = 0; a < groups.size(); ++a) {
    os << "  subgraph " << quote("cluster_" + ss.base.cod.label(a)) << " {\n    label="
       << quote(ss.base.cod.label(a)) << ";\n";
    for (State s : groups[a]) os << "    " << quote(state_label(ss.base.dom, s)) << ";\n";
    os << "  }\n";
  }
  for (const auto& e : ss.edges) {
    std::string lab;
    for (auto [a0, a1] : e.induced_by)
      lab += (lab.empty() ? "" : " ") + ss.base.cod.label(a0) + ">" + ss.base.cod.label(a1);
    os << "  " << quote(state_label(ss.base.dom, e.from)) << " -> "
       << quote(state_label(ss.base.dom, e.to)) << " [label=" << quote(lab) << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace shiftdg::io

// Command-line front end. Every command reads JSON (file path, inline text or
// "-" for stdin) and prints JSON on stdout.
//
// Exit codes: 0 computed, 1 negative answer of a predicate command,
// 2 malformed input, 3 budget exceeded, 4 internal invariant violated.

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "shiftdg/shiftdg.hpp"

namespace {

using namespace shiftdg;
using io::json;

constexpr int kNegative = 1, kMalformed = 2, kBudget = 3, kInternal = 4;

json load(const std::string& arg) {
  std::string text;
  if (arg == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    text = os.str();
  } else if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) {
    text = arg;
  } else {
    std::ifstream in(arg);
    if (!in) fail(ErrorCode::Malformed, "cannot read '" + arg + "'");
    std::ostringstream os;
    os << in.rdbuf();
    text = os.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Malformed, std::string("invalid JSON in '") + arg + "': " + e.what());
  }
}

Vertex vertex_arg(const Digraph& g, const std::string& label) {
  auto v = g.find(label);
  if (!v) fail(ErrorCode::Malformed, "unknown vertex '" + label + "'");
  return *v;
}

json iso_json(const Digraph& g, const Digraph& h, const std::vector<Vertex>& iso) {
  json out = json::object();
  for (Vertex v = 0; v < g.size(); ++v) out[g.label(v)] = h.label(iso[v]);
  return out;
}

std::vector<Vertex> iso_from_json(const Digraph& g, const Digraph& h, const json& j) {
  if (!j.is_object() || j.size() != g.size()) fail(ErrorCode::Malformed, "iso must map every vertex");
  std::vector<Vertex> iso;
  for (Vertex v = 0; v < g.size(); ++v) {
    if (!j.contains(g.label(v))) fail(ErrorCode::Malformed, "iso misses '" + g.label(v) + "'");
    iso.push_back(vertex_arg(h, io::detail::str(j.at(g.label(v)))));
  }
  return iso;
}

oracle::EnumerationBudget budget_from_env() {
  oracle::EnumerationBudget b;
  const char* env = std::getenv("SHIFTDG_BUDGET");
  if (!env) return b;
  std::stringstream ss(env);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorCode::Malformed, "SHIFTDG_BUDGET entry '" + item + "' lacks '='");
    const std::string key = item.substr(0, eq);
    std::uint64_t value = 0;
    try {
      value = std::stoull(item.substr(eq + 1));
    } catch (const std::exception&) {
      fail(ErrorCode::Malformed, "SHIFTDG_BUDGET value for '" + key + "' is not a number");
    }
    if (key == "max_vertices") b.max_vertices = value;
    else if (key == "max_codomain") b.max_codomain = value;
    else if (key == "max_period") b.max_period = value;
    else if (key == "max_atoms") b.max_atoms = value;
    else if (key == "sample_seed") b.sample_seed = value;
    else if (key == "samples") b.samples = value;
    else fail(ErrorCode::Malformed, "unknown SHIFTDG_BUDGET key '" + key + "'");
  }
  b.validate();
  return b;
}

const char* kSchemas = R"json({
  "digraph": {"vertices": ["label", "..."], "edges": [["from", "to"], "..."]},
  "walk": {"steps": ["label", "..."]},
  "ep_walk": {"preamble": ["label", "..."], "period": ["label", "..."]},
  "map": {"dom": "digraph", "cod": "digraph", "map": {"dom label": "cod label"}},
  "dynsys": {"atoms": ["label", "..."], "alpha": {"atom": "atom"}},
  "element": ["atom", "..."],
  "partition": ["element", "..."],
  "sequence": {"preamble": ["element", "..."], "period": ["element", "..."]},
  "spec": "ep_walk over block labels; every label occurs in the period",
  "iso": {"vertex of the first digraph": "vertex of the second"},
  "outcome": {"outcome": "lift | obstruct", "witness": "ep_walk (lift)", "C": "digraph (obstruct)",
              "psi": "map (obstruct)", "c_walk": "ep_walk (obstruct)", "threshold": 0, "audit": {}},
  "report": {"instances": 0, "checks": 0, "seed": 0,
             "failures": [{"check": "", "input": "", "expected": "", "got": ""}], "findings": []}
}
)json";

struct Output {
  json value;
  int code = 0;
  std::string dot;  // emitted instead of JSON when --dot is given
};

oracle::Report run_crosscheck(const oracle::EnumerationBudget& b, unsigned jobs) {
  using Suite = oracle::Report (*)(const oracle::EnumerationBudget&);
  const Suite suites[] = {oracle::crosscheck_digraphs, oracle::crosscheck_compatibility,
                          oracle::crosscheck_lifting, oracle::crosscheck_dynsys};
  b.validate();
  oracle::Report total;
  total.seed = b.sample_seed;
  if (jobs <= 1) {
    for (Suite s : suites) total.merge(s(b));
    return total;
  }
  std::vector<std::future<oracle::Report>> parts;
  for (Suite s : suites) parts.push_back(std::async(std::launch::async, s, std::cref(b)));
  for (auto& p : parts) total.merge(p.get());
  return total;
}

std::string table(const VerifyReport& rep) {
  std::ostringstream os;
  for (const auto& c : rep.checks) {
    os << (c.ok ? "PASS  " : "FAIL  ") << c.name;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << "\n";
  }
  os << (rep.ok() ? "all checks passed\n" : "some checks failed\n");
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digraph lifting, compatibility and shift-partition toolkit"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  bool schema = false, dot = false;
  unsigned jobs = 1;
  app.add_flag("--schema", schema, "Print the JSON schemas and exit");
  app.add_flag("--dot", dot, "Emit Graphviz DOT where the result is a digraph");
  app.add_option("--jobs", jobs, "Worker threads for enumeration commands")->check(CLI::PositiveNumber);

  Output out;
  std::function<void()> action;

  // scc
  auto* scc = app.add_subcommand("scc", "Strongly connected components");
  std::string scc_in;
  bool scc_check = false;
  scc->add_option("digraph", scc_in)->required();
  scc->add_flag("--check", scc_check, "Exit 1 unless strongly connected");
  scc->callback([&] {
    action = [&] {
      Digraph g = io::digraph_from_json(load(scc_in));
      json comps = json::array();
      for (const auto& c : strongly_connected_components(g)) comps.push_back(io::detail::labels(g, c));
      const bool sc = is_strongly_connected(g);
      out.value = {{"strongly_connected", sc}, {"components", comps}};
      if (scc_check && !sc) out.code = kNegative;
    };
  });

  // walk
  auto* walk = app.add_subcommand("walk", "Covering, diligent and backward walks; walk checks");
  std::string walk_in, walk_from, walk_to, walk_check;
  std::size_t walk_len = 0;
  bool walk_covering = false, walk_diligent = false, walk_backward = false;
  walk->add_option("digraph", walk_in)->required();
  auto* o_cov = walk->add_flag("--covering", walk_covering, "Covering walk from --from to --to");
  auto* o_dil = walk->add_flag("--diligent", walk_diligent, "Diligent schedule");
  auto* o_back = walk->add_flag("--backward", walk_backward, "Walk of length --len ending at --to");
  auto* o_chk = walk->add_option("--check", walk_check, "Validate an ep_walk; exit 1 unless diligent");
  walk->add_option("--from", walk_from, "Start vertex (default: first)");
  walk->add_option("--to", walk_to, "End vertex (default: --from)");
  walk->add_option("--len", walk_len, "Length for --backward");
  o_cov->excludes(o_dil, o_back, o_chk);
  o_dil->excludes(o_back, o_chk);
  o_back->excludes(o_chk);
  walk->callback([&] {
    action = [&] {
      Digraph g = io::digraph_from_json(load(walk_in));
      if (g.size() == 0) fail(ErrorCode::NotStronglyConnected, "empty digraph");
      const Vertex from = walk_from.empty() ? 0 : vertex_arg(g, walk_from);
      const Vertex to = walk_to.empty() ? from : vertex_arg(g, walk_to);
      if (walk_covering) {
        out.value = io::to_json(g, covering_closed_walk(g, from, to));
      } else if (walk_backward) {
        out.value = io::to_json(g, backward_extend(g, to, walk_len));
      } else if (!walk_check.empty()) {
        EpWalk w = io::epwalk_from_json(g, load(walk_check));
        const bool valid = is_walk(g, w);
        const bool diligent = valid && is_diligent(g, w);
        out.value = {{"walk", valid}, {"diligent", diligent}};
        if (!diligent) out.code = kNegative;
      } else {
        out.value = io::to_json(g, diligent_schedule(g));
      }
    };
  });

  // epi-check
  auto* epi = app.add_subcommand("epi-check", "Is the map a digraph epimorphism?");
  std::string epi_in;
  epi->add_option("map", epi_in)->required();
  epi->callback([&] {
    action = [&] {
      DigraphMap m = io::map_from_json(load(epi_in));
      auto defect = epimorphism_defect(m);
      out.value = {{"epimorphism", !defect}};
      if (defect) {
        out.value["reason"] = *defect;
        out.code = kNegative;
      }
    };
  });

  // compose
  auto* comp = app.add_subcommand("compose", "Composite f after g");
  std::string comp_f, comp_g;
  comp->add_option("f", comp_f)->required();
  comp->add_option("g", comp_g)->required();
  comp->callback([&] {
    action = [&] { out.value = io::to_json(compose(io::map_from_json(load(comp_f)), io::map_from_json(load(comp_g)))); };
  });

  // pullback
  auto* pb = app.add_subcommand("pullback", "Pullback of two maps into a common codomain");
  std::string pb_f, pb_g;
  pb->add_option("phi", pb_f)->required();
  pb->add_option("psi", pb_g)->required();
  pb->callback([&] {
    action = [&] {
      Pullback p = pullback(io::map_from_json(load(pb_f)), io::map_from_json(load(pb_g)));
      out.value = io::to_json(p);
      out.value["strongly_connected"] = is_strongly_connected(p.digraph);
      if (dot) out.dot = io::to_dot(p.digraph, "pullback");
    };
  });

  // compat
  auto* compat = app.add_subcommand("compat", "Compatibility of two epimorphisms");
  std::string compat_f, compat_g;
  bool compat_fast = false, compat_exact = false;
  std::size_t compat_cap = ExactSearchOptions{}.max_vertices;
  compat->add_option("phi", compat_f)->required();
  compat->add_option("psi", compat_g)->required();
  auto* o_fast = compat->add_flag("--fast", compat_fast, "Pullback strong connectivity (conjectural)");
  auto* o_exact = compat->add_flag("--exact", compat_exact, "Exhaustive witness search (default)");
  compat->add_option("--cap", compat_cap, "Largest pullback searched exhaustively");
  o_fast->excludes(o_exact);
  compat->callback([&] {
    action = [&] {
      DigraphMap phi = io::map_from_json(load(compat_f)), psi = io::map_from_json(load(compat_g));
      bool ok = false;
      if (compat_fast) {
        ok = compatible_fast(phi, psi);
        out.value = {{"compatible", ok}};
      } else {
        auto w = compatible_exact(phi, psi, {compat_cap});
        ok = w.has_value();
        out.value = {{"compatible", ok}};
        if (w) out.value["witness"] = io::to_json(*w);
      }
      if (!ok) out.code = kNegative;
    };
  });

  // commutes
  auto* comm = app.add_subcommand("commutes", "Does left after top1 equal right after top2?");
  std::string c_t1, c_t2, c_l, c_r;
  comm->add_option("top1", c_t1)->required();
  comm->add_option("top2", c_t2)->required();
  comm->add_option("left", c_l)->required();
  comm->add_option("right", c_r)->required();
  comm->callback([&] {
    action = [&] {
      const bool ok = commutes(io::map_from_json(load(c_t1)), io::map_from_json(load(c_t2)),
                               io::map_from_json(load(c_l)), io::map_from_json(load(c_r)));
      out.value = {{"commutes", ok}};
      if (!ok) out.code = kNegative;
    };
  });

  // statespace
  auto* ssc = app.add_subcommand("statespace", "Fiber-subset state space of an epimorphism");
  std::string ss_in;
  ssc->add_option("map", ss_in)->required();
  ssc->callback([&] {
    action = [&] {
      DigraphMap phi = io::map_from_json(load(ss_in));
      StateSpace ss = build_state_space(phi);
      out.value = io::to_json(ss);
      if (dot) out.dot = io::to_dot(ss);
    };
  });

  // trajectory
  auto* traj = app.add_subcommand("trajectory", "States reached along a walk of the codomain");
  std::string tr_map, tr_walk;
  std::size_t tr_start = 0, tr_horizon = 0;
  bool tr_horizon_set = false;
  traj->add_option("map", tr_map)->required();
  traj->add_option("walk", tr_walk)->required();
  traj->add_option("--start", tr_start, "Start position");
  auto* o_h = traj->add_option("--horizon", tr_horizon, "Number of steps (default: pigeonhole bound)");
  traj->callback([&] {
    tr_horizon_set = o_h->count() > 0;
    action = [&] {
      DigraphMap phi = io::map_from_json(load(tr_map));
      EpWalk abar = io::epwalk_from_json(phi.cod, load(tr_walk));
      const std::size_t h = tr_horizon_set ? tr_horizon : horizon_bound(phi, abar);
      json states = json::array();
      for (State s : state_trajectory(phi, abar, tr_start, h)) states.push_back(io::state_json(phi.dom, s));
      out.value = {{"states", states}, {"never_empty", never_empty_from(phi, abar, tr_start)}};
    };
  });

  // relation
  auto* rel = app.add_subcommand("relation", "Walkability and homogeneous relations");
  std::string rel_map, rel_walk;
  std::size_t rel_l = 0, rel_k = 1;
  bool rel_homog = false;
  rel->add_option("map", rel_map)->required();
  rel->add_option("walk", rel_walk)->required();
  rel->add_option("--from", rel_l, "Start position l");
  rel->add_option("--to", rel_k, "End position k");
  rel->add_flag("--homogeneous", rel_homog, "Homogeneous relation, observations and dagger check");
  rel->callback([&] {
    action = [&] {
      DigraphMap phi = io::map_from_json(load(rel_map));
      EpWalk abar = io::epwalk_from_json(phi.cod, load(rel_walk));
      if (!rel_homog) {
        out.value = {{"relation", io::to_json(phi.dom, walkability_relation(phi, abar, rel_l, rel_k))}};
        return;
      }
      require_lifting_inputs(phi, abar);
      if (!first_surviving_start(phi, abar)) fail(ErrorCode::NoAlmostProjectingWalk);
      Homogeneous H = homogeneous_relation(phi, abar);
      ObservationReport obs = check_observations(phi, abar, H);
      auto v = dagger_check(phi, abar, H);
      out.value = {{"R", io::to_json(phi.dom, H.R)},
                   {"start", H.m0},
                   {"spacing", H.spacing},
                   {"a_D", phi.cod.label(H.a_D)},
                   {"observations", obs.all()},
                   {"dagger_vertex", v ? json(phi.dom.label(*v)) : json(nullptr)}};
    };
  });

  // lift
  auto* lift = app.add_subcommand("lift", "Weak or diligent lifting dichotomy");
  std::string lift_map, lift_walk;
  bool lift_weak = false, lift_dil = false;
  lift->add_option("map", lift_map)->required();
  lift->add_option("walk", lift_walk)->required();
  auto* o_w = lift->add_flag("--weak", lift_weak, "Almost projecting walk or obstruction (default)");
  auto* o_d = lift->add_flag("--diligent", lift_dil, "Diligent almost projecting walk or obstruction");
  o_w->excludes(o_d);
  lift->callback([&] {
    action = [&] {
      DigraphMap phi = io::map_from_json(load(lift_map));
      EpWalk abar = io::epwalk_from_json(phi.cod, load(lift_walk));
      DichotomyOutcome o = lift_dil ? diligent_dichotomy(phi, abar) : weak_dichotomy(phi, abar);
      out.value = io::to_json(phi, o);
      out.value["verify"] = io::to_json(verify_outcome(phi, abar, o, lift_dil));
      if (!o.is_lift()) out.code = kNegative;
    };
  });

  // dynsys
  auto* dyn = app.add_subcommand("dynsys", "Finite dynamical system operations");
  std::string dyn_in, dyn_op = "incompressible", dyn_part, dyn_fine, dyn_coarse, dyn_seq;
  std::size_t dyn_prefix = 0;
  dyn->add_option("system", dyn_in)->required();
  dyn->add_option("--op", dyn_op, "Operation")
      ->check(CLI::IsMember({"incompressible", "orbits", "hitting", "natural-map", "small", "dense",
                             "shift-compatible", "embedding", "orbit-sequence"}));
  dyn->add_option("--partition", dyn_part, "Partition for --op hitting");
  dyn->add_option("--fine", dyn_fine, "Fine partition for --op natural-map");
  dyn->add_option("--coarse", dyn_coarse, "Coarse partition for --op natural-map");
  dyn->add_option("--sequence", dyn_seq, "Element sequence");
  dyn->add_option("--prefix", dyn_prefix, "N for --op embedding (default: 10 per atom)");
  dyn->callback([&] {
    action = [&] {
      FiniteDynSys sys = io::dynsys_from_json(load(dyn_in));
      auto need = [](const std::string& s, const char* what) {
        if (s.empty()) fail(ErrorCode::Malformed, std::string("missing ") + what);
        return s;
      };
      auto predicate = [&](const char* key, bool v) {
        out.value = {{key, v}};
        if (!v) out.code = kNegative;
      };
      if (dyn_op == "incompressible") {
        predicate("incompressible", is_incompressible(sys));
      } else if (dyn_op == "orbits") {
        json o = json::array();
        for (const auto& orbit : orbits(sys)) {
          json atoms = json::array();
          for (std::size_t i : orbit) atoms.push_back(sys.atoms[i]);
          o.push_back(atoms);
        }
        out.value = {{"orbits", o}};
      } else if (dyn_op == "hitting") {
        Partition P = io::partition_from_json(sys, load(need(dyn_part, "--partition")));
        Digraph g = hitting_digraph(sys, P);
        out.value = io::to_json(g);
        if (dot) out.dot = io::to_dot(g, "hitting");
      } else if (dyn_op == "natural-map") {
        Partition f = io::partition_from_json(sys, load(need(dyn_fine, "--fine")));
        Partition c = io::partition_from_json(sys, load(need(dyn_coarse, "--coarse")));
        DigraphMap m = natural_partition_map(f, c, sys);
        out.value = io::to_json(m);
        out.value["epimorphism"] = is_epimorphism(m);
      } else if (dyn_op == "orbit-sequence") {
        out.value = io::sequence_json(sys, orbit_sequence(sys));
      } else {
        ElementSeq seq = io::sequence_from_json(sys, load(need(dyn_seq, "--sequence")));
        if (dyn_op == "small") predicate("eventually_small", is_eventually_small(sys, seq));
        else if (dyn_op == "dense") predicate("eventually_dense", is_eventually_dense(sys, seq));
        else if (dyn_op == "shift-compatible") predicate("shift_compatible", is_shift_compatible(sys, seq));
        else predicate("embedding", induced_tail_is_embedding(sys, seq, dyn_prefix ? dyn_prefix : 10 * sys.size()));
      }
    };
  });

  // realize / recover / spec-walk / spec-refines
  auto* realize = app.add_subcommand("realize", "Spec whose shift hitting digraph is the input");
  std::string realize_in;
  realize->add_option("digraph", realize_in)->required();
  realize->callback([&] {
    action = [&] { out.value = io::to_json(realize_digraph(io::digraph_from_json(load(realize_in)))); };
  });

  auto* recover = app.add_subcommand("recover", "Shift hitting digraph of a spec");
  std::string recover_in;
  recover->add_option("spec", recover_in)->required();
  recover->callback([&] {
    action = [&] {
      Digraph g = shift_hitting_digraph(io::spec_from_json(load(recover_in)));
      out.value = io::to_json(g);
      if (dot) out.dot = io::to_dot(g, "recovered");
    };
  });

  auto* swalk = app.add_subcommand("spec-walk", "Diligent walk in a digraph isomorphic to the spec's digraph");
  std::string sw_spec, sw_target, sw_iso;
  swalk->add_option("spec", sw_spec)->required();
  swalk->add_option("target", sw_target)->required();
  swalk->add_option("--iso", sw_iso, "Isomorphism target -> spec blocks (default: least found)");
  swalk->callback([&] {
    action = [&] {
      OmegaPartitionSpec spec = io::spec_from_json(load(sw_spec));
      Digraph target = io::digraph_from_json(load(sw_target));
      Digraph h = shift_hitting_digraph(spec);
      std::vector<Vertex> iso;
      if (sw_iso.empty()) {
        auto found = find_isomorphism(target, h);
        if (!found) fail(ErrorCode::NotIsomorphism, "target is not isomorphic to the spec's digraph");
        iso = *found;
      } else {
        iso = iso_from_json(target, h, load(sw_iso));
      }
      out.value = {{"walk", io::to_json(target, walk_from_spec(spec, target, iso))},
                   {"iso", iso_json(target, h, iso)}};
    };
  });

  auto* srefines = app.add_subcommand("spec-refines", "Natural map when fine refines coarse");
  std::string sr_fine, sr_coarse;
  srefines->add_option("fine", sr_fine)->required();
  srefines->add_option("coarse", sr_coarse)->required();
  srefines->callback([&] {
    action = [&] {
      auto m = spec_refines(io::spec_from_json(load(sr_fine)), io::spec_from_json(load(sr_coarse)));
      out.value = {{"refines", m.has_value()}};
      if (m) out.value["map"] = io::to_json(*m);
      else out.code = kNegative;
    };
  });

  // polarize
  auto* pol = app.add_subcommand("polarize", "Realize a virtual refinement or return an incompatible one");
  std::string pol_spec, pol_map;
  pol->add_option("spec", pol_spec)->required();
  pol->add_option("map", pol_map, "Epimorphism V -> shift hitting digraph of spec")->required();
  pol->callback([&] {
    action = [&] {
      OmegaPartitionSpec spec = io::spec_from_json(load(pol_spec));
      DigraphMap phi = io::map_from_json(load(pol_map));
      Polarization p = polarize_virtual_refinement(spec, VirtualRefinement{phi});
      if (p.realized()) {
        const auto& r = std::get<Realized>(p.result);
        Digraph h = shift_hitting_digraph(r.fine);
        out.value = {{"result", "realized"},
                     {"fine", io::to_json(r.fine)},
                     {"iso", iso_json(phi.dom, h, r.iso)},
                     {"natural_map", io::to_json(r.pi)}};
      } else {
        const auto& r = std::get<Incompatible>(p.result);
        Digraph h = shift_hitting_digraph(r.fine);
        out.value = {{"result", "incompatible"},
                     {"C", io::to_json(r.c)},
                     {"psi", io::to_json(r.psi)},
                     {"fine", io::to_json(r.fine)},
                     {"iso", iso_json(r.c, h, r.iso)},
                     {"natural_map", io::to_json(r.pi)}};
        out.code = kNegative;
      }
      out.value["outcome"] = io::to_json(phi, p.outcome);
    };
  });

  // fixture
  auto* fix = app.add_subcommand("fixture", "Built-in fixtures");
  fix->require_subcommand(1);
  auto* fix_nogo = fix->add_subcommand("nogo", "The incompatible pair over the three-vertex path");
  std::string fix_part;
  fix_nogo->add_option("--part", fix_part, "Print one part only")
      ->check(CLI::IsMember({"A3", "B4", "fold", "V4", "cycle", "schedule"}));
  fix_nogo->callback([&] {
    action = [&] {
      fixtures::Nogo f = fixtures::nogo();
      json all = {{"A3", io::to_json(f.A3)},     {"B4", io::to_json(f.B4)},
                  {"fold", io::to_json(f.fold)}, {"V4", io::to_json(f.V4)},
                  {"cycle", io::to_json(f.cycle)}, {"schedule", io::to_json(f.A3, f.schedule)}};
      out.value = fix_part.empty() ? all : all.at(fix_part);
    };
  });
  auto* fix_verify = fix->add_subcommand("verify", "Run the nogo pipeline and print a pass/fail table");
  bool fv_json = false, fv_mutate = false;
  fix_verify->add_flag("--json", fv_json, "Machine-readable report");
  fix_verify->add_flag("--mutate", fv_mutate, "Add the arrow Bb -> C' to the cycle's domain");
  fix_verify->callback([&] {
    action = [&] {
      VerifyReport rep = fixtures::verify_nogo(fv_mutate);
      if (fv_json) out.value = io::to_json(rep);
      else out.dot = table(rep);
      if (!rep.ok()) out.code = kNegative;
    };
  });

  // enumerate
  auto* en = app.add_subcommand("enumerate", "Enumerate digraphs or epimorphisms");
  std::size_t en_n = 1;
  bool en_sc = false, en_iso = false;
  std::string en_dom, en_cod;
  en->add_option("--n", en_n, "Vertex count");
  en->add_flag("--sc-only", en_sc, "Strongly connected digraphs only");
  en->add_flag("--up-to-iso", en_iso, "One representative per isomorphism class");
  en->add_option("--epis", en_dom, "Domain digraph: list epimorphisms onto --onto instead");
  en->add_option("--onto", en_cod, "Codomain digraph for --epis");
  en->callback([&] {
    action = [&] {
      oracle::EnumerationBudget b = budget_from_env();
      json items = json::array();
      if (!en_dom.empty()) {
        if (en_cod.empty()) fail(ErrorCode::Malformed, "--epis needs --onto");
        for (const auto& m : oracle::enumerate_epimorphisms(io::digraph_from_json(load(en_dom)),
                                                            io::digraph_from_json(load(en_cod)), b))
          items.push_back(io::to_json(m));
      } else {
        auto gs = en_iso ? oracle::enumerate_digraphs_up_to_iso(en_n, en_sc, b)
                         : oracle::enumerate_digraphs(en_n, en_sc, b);
        for (const auto& g : gs) items.push_back(io::to_json(g));
      }
      out.value = {{"count", items.size()}, {"items", items}};
    };
  });

  // brute
  auto* brute = app.add_subcommand("brute", "Depth-first search for a projecting walk");
  std::string br_map, br_walk;
  std::size_t br_m = 0, br_k = 0;
  brute->add_option("map", br_map)->required();
  brute->add_option("walk", br_walk)->required();
  brute->add_option("--start", br_m, "Start position m");
  brute->add_option("--length", br_k, "Walk length k")->required();
  brute->callback([&] {
    action = [&] {
      DigraphMap phi = io::map_from_json(load(br_map));
      EpWalk abar = io::epwalk_from_json(phi.cod, load(br_walk));
      require_walk(phi.cod, abar);
      const bool ok = oracle::brute_projecting_walk(phi, abar, br_m, br_k);
      out.value = {{"projecting_walk", ok}};
      if (!ok) out.code = kNegative;
    };
  });

  // crosscheck
  auto* cc = app.add_subcommand("crosscheck", "Fast paths against brute-force references");
  bool cc_mutant = false;
  cc->add_flag("--mutant", cc_mutant, "Corrupt one fast path (negative control)");
  cc->callback([&] {
    action = [&] {
      oracle::EnumerationBudget b = budget_from_env();
      b.mutant = cc_mutant;
      oracle::Report r = run_crosscheck(b, jobs);
      out.value = oracle::to_json(r);
      if (!r.failures.empty()) out.code = kNegative;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kMalformed;
  }

  if (schema) {
    std::cout << kSchemas;
    return 0;
  }
  if (!action) {
    std::cerr << app.help();
    return kMalformed;
  }
  try {
    action();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const bool budget = e.code() == ErrorCode::BudgetExceeded || e.code() == ErrorCode::SearchTooLarge;
    return budget ? kBudget : kMalformed;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return kMalformed;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  if (!out.dot.empty() && (dot || out.value.is_null())) std::cout << out.dot;
  else std::cout << out.value.dump(2) << "\n";
  return out.code;
}

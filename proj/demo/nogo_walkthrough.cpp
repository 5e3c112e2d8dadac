// Walks through the incompatible pair over the three-vertex path: both maps
// are epimorphisms, their pullback splits, and the polarization engine
// realizes one and returns an obstruction for the other.

#include <iostream>

#include "shiftdg/shiftdg.hpp"

int main() {
  using namespace shiftdg;
  fixtures::Nogo f = fixtures::nogo();

  Pullback pb = pullback(f.fold, f.cycle);
  std::cout << "pullback vertices: " << pb.digraph.size() << ", components: "
            << strongly_connected_components(pb.digraph).size() << "\n";
  std::cout << "compatible: " << (compatible_exact(f.fold, f.cycle) ? "yes" : "no") << "\n";

  const OmegaPartitionSpec spec = spec_from_walk(f.A3, f.schedule);
  std::cout << "coarse spec: " << io::to_json(spec).dump() << "\n";

  for (const DigraphMap* phi : {&f.fold, &f.cycle}) {
    Polarization p = polarize_virtual_refinement(spec, VirtualRefinement{*phi});
    std::cout << "\nmap from " << phi->dom.labels().front() << "...: ";
    if (p.realized()) {
      const auto& r = std::get<Realized>(p.result);
      std::cout << "realized by " << io::to_json(r.fine).dump() << "\n";
    } else {
      const auto& inc = std::get<Incompatible>(p.result);
      std::cout << "incompatible refinement with " << inc.c.size() << " vertices\n"
                << io::to_dot(inc.c, "C");
    }
  }
  std::cout << "\nThe default schedule of A3 has no C,B,B,C segment, so there even the fold obstructs:\n";
  DichotomyOutcome o = diligent_dichotomy(f.fold, diligent_schedule(f.A3));
  std::cout << "outcome: " << (o.is_lift() ? "lift" : "obstruct") << "\n";
}

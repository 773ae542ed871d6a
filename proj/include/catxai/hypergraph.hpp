#pragma once

#include <string>
#include <vector>

#include "catxai/diagram.hpp"

namespace catxai::hg {

// Boxes own globally numbered ports; every port carries exactly one wire.
// Copy and discard are explicit boxes, symmetries are plain wire crossings.
struct HgBox {
  std::string label;
  std::vector<int> in_ports;
  std::vector<int> out_ports;
};

struct HgWire {
  int source = 0;  // a box out-port or a boundary_in port
  int target = 0;  // a box in-port or a boundary_out port
  std::string ob;
};

struct OpenHypergraph {
  std::vector<HgBox> boxes;
  std::vector<HgWire> wires;
  std::vector<int> boundary_in;   // ordered, matches the flattened dom
  std::vector<int> boundary_out;  // ordered, matches the flattened cod
  int port_count = 0;
};

// Converts a feedback-free term to its Cartesian normal form: duplicate
// applications of a generator to the same arguments are shared, sharing is
// rendered as copy combs over canonically ordered use sites, and computations
// whose results never reach the output boundary disappear behind discards.
// Equal-up-to-coherence terms therefore produce isomorphic graphs.
OpenHypergraph to_hypergraph(const diagram::TermPtr& term);

// isomorphism fixing both boundaries pointwise and preserving box labels
// and port order; canonical labels come from iterated neighborhood
// refinement, with backtracking across any classes refinement leaves merged
bool hypergraph_iso(const OpenHypergraph& a, const OpenHypergraph& b);

bool diagram_eq(const diagram::TermPtr& t1, const diagram::TermPtr& t2);

// deterministic textual dump, mostly for tests and debugging
std::string hypergraph_to_string(const OpenHypergraph& g);

// structural renderer for the raw term (no sharing, no normal form): boxes in
// creation order left to right, feedback drawn as a dashed back edge through
// a junction labeled with the state object
std::string render_dot(const diagram::TermPtr& term);

}  // namespace catxai::hg

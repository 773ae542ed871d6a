#include "catxai/hypergraph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "catxai/util.hpp"

namespace catxai::hg {

using namespace diagram;

namespace {

// ---------------------------------------------------------------------------
// symbolic evaluation with sharing
//
// A Ref names one produced value: either a boundary input atom or one output
// port of a generator application. Running the term over Refs instead of
// values turns coherence-equal terms into the same dag: identities and
// symmetries only shuffle Refs, copies duplicate them, and a generator
// applied twice to the same Refs lands on the same application node.
// ---------------------------------------------------------------------------

struct Ref {
  int node = -1;  // -1 = boundary input
  int port = 0;
  bool operator==(const Ref&) const = default;
  auto operator<=>(const Ref&) const = default;
};

struct AppNode {
  std::string label;
  std::vector<Ref> args;
  std::vector<std::string> in_obs;
  std::vector<std::string> out_obs;
};

struct SymbolicDag {
  std::vector<AppNode> nodes;
  std::map<std::pair<std::string, std::vector<Ref>>, int> shared;
  ObList dom, cod;
  std::vector<Ref> outs;

  std::string ref_ob(const Ref& r) const {
    return r.node < 0 ? dom[static_cast<std::size_t>(r.port)]
                      : nodes[static_cast<std::size_t>(r.node)].out_obs[static_cast<std::size_t>(r.port)];
  }
};

// dom of a subterm, needed to split tensor inputs (terms are self-typing:
// each leaf carries its object expressions)
ObPtr term_dom(const TermPtr& t) {
  return std::visit(
      overloaded{[&](const GenMor& g) { return g.dom; },
                 [&](const IdMor& i) { return i.ob; },
                 [&](const ComposeMor& c) { return term_dom(c.first); },
                 [&](const TensorMor& tn) {
                   return ob_tensor(term_dom(tn.left), term_dom(tn.right));
                 },
                 [&](const SymMor& s) { return ob_tensor(s.a, s.b); },
                 [&](const CopyMor& c) { return c.ob; },
                 [&](const DiscardMor& d) { return d.ob; },
                 [&](const FeedbackMor& f) -> ObPtr {
                   auto inner_dom = flatten(term_dom(f.inner));
                   auto st = flatten(f.state);
                   inner_dom.resize(inner_dom.size() - std::min(st.size(), inner_dom.size()));
                   return ob_of_list(inner_dom);
                 }},
      t->node);
}

std::vector<Ref> eval_term(SymbolicDag& dag, const TermPtr& t, std::vector<Ref> ins) {
  return std::visit(
      overloaded{
          [&](const GenMor& g) {
            auto key = std::make_pair(g.name, ins);
            auto it = dag.shared.find(key);
            int idx;
            if (it != dag.shared.end()) {
              idx = it->second;
            } else {
              idx = static_cast<int>(dag.nodes.size());
              dag.nodes.push_back({g.name, ins, flatten(g.dom), flatten(g.cod)});
              dag.shared.emplace(std::move(key), idx);
            }
            std::vector<Ref> outs;
            for (std::size_t i = 0; i < dag.nodes[static_cast<std::size_t>(idx)].out_obs.size(); ++i)
              outs.push_back({idx, static_cast<int>(i)});
            return outs;
          },
          [&](const IdMor&) { return ins; },
          [&](const ComposeMor& c) {
            return eval_term(dag, c.second, eval_term(dag, c.first, std::move(ins)));
          },
          [&](const TensorMor& tn) {
            std::size_t cut = flatten(term_dom(tn.left)).size();
            std::vector<Ref> l(ins.begin(), ins.begin() + static_cast<std::ptrdiff_t>(cut));
            std::vector<Ref> r(ins.begin() + static_cast<std::ptrdiff_t>(cut), ins.end());
            auto lo = eval_term(dag, tn.left, std::move(l));
            auto ro = eval_term(dag, tn.right, std::move(r));
            lo.insert(lo.end(), ro.begin(), ro.end());
            return lo;
          },
          [&](const SymMor& s) {
            std::size_t cut = flatten(s.a).size();
            std::vector<Ref> out(ins.begin() + static_cast<std::ptrdiff_t>(cut), ins.end());
            out.insert(out.end(), ins.begin(), ins.begin() + static_cast<std::ptrdiff_t>(cut));
            return out;
          },
          [&](const CopyMor&) {
            auto out = ins;
            out.insert(out.end(), ins.begin(), ins.end());
            return out;
          },
          [&](const DiscardMor&) { return std::vector<Ref>{}; },
          [&](const FeedbackMor&) -> std::vector<Ref> {
            fail(errc::feedback_not_supported,
                 "terms containing fbk have no open hypergraph; compare them semantically");
          }},
      t->node);
}

// generators mentioned by the term, so callers need not thread a presentation
// through equality checks; clashing signatures under one name are rejected
void collect_presentation(const TermPtr& t, Presentation& pres) {
  auto declare_obs = [&](const ObPtr& e) {
    for (const auto& a : flatten(e))
      if (!pres.has_ob(a)) pres.add_ob(a);
  };
  std::visit(overloaded{[&](const GenMor& g) {
                          declare_obs(g.dom);
                          declare_obs(g.cod);
                          if (pres.has_mor(g.name)) {
                            const auto& sig = pres.mor_gens.at(g.name);
                            if (flatten(sig.dom) != flatten(g.dom) ||
                                flatten(sig.cod) != flatten(g.cod))
                              fail(errc::generator_mismatch,
                                   "generator '" + g.name + "' used at two different types");
                          } else {
                            pres.add_mor(g.name, g.dom, g.cod);
                          }
                        },
                        [&](const IdMor& i) { declare_obs(i.ob); },
                        [&](const ComposeMor& c) {
                          collect_presentation(c.first, pres);
                          collect_presentation(c.second, pres);
                        },
                        [&](const TensorMor& tn) {
                          collect_presentation(tn.left, pres);
                          collect_presentation(tn.right, pres);
                        },
                        [&](const SymMor& s) {
                          declare_obs(s.a);
                          declare_obs(s.b);
                        },
                        [&](const CopyMor& c) { declare_obs(c.ob); },
                        [&](const DiscardMor& d) { declare_obs(d.ob); },
                        [&](const FeedbackMor& f) {
                          declare_obs(f.state);
                          collect_presentation(f.inner, pres);
                        }},
             t->node);
}

MorType self_typecheck(const TermPtr& t) {
  Presentation pres;
  collect_presentation(t, pres);
  return typecheck(t, pres);
}

// ---------------------------------------------------------------------------
// canonical ordering of application nodes
//
// Sharing makes (label, args) a unique key per node, so comparing those keys
// recursively (args point strictly upstream) is a strict total order that
// depends only on the computation, never on the order evaluation visited it.
// ---------------------------------------------------------------------------

struct NodeOrder {
  const SymbolicDag& dag;
  mutable std::map<std::pair<int, int>, int> memo;

  int cmp_ref(const Ref& a, const Ref& b) const {
    if (a.node < 0 || b.node < 0) {
      if (a.node < 0 && b.node < 0) return a.port < b.port ? -1 : a.port > b.port ? 1 : 0;
      return a.node < 0 ? -1 : 1;  // boundary inputs come first
    }
    if (int c = cmp_node(a.node, b.node)) return c;
    return a.port < b.port ? -1 : a.port > b.port ? 1 : 0;
  }

  int cmp_node(int a, int b) const {
    if (a == b) return 0;
    auto key = std::minmax(a, b);
    bool flipped = a > b;
    auto it = memo.find(key);
    if (it != memo.end()) return flipped ? -it->second : it->second;
    const auto& na = dag.nodes[static_cast<std::size_t>(key.first)];
    const auto& nb = dag.nodes[static_cast<std::size_t>(key.second)];
    int c = 0;
    if (na.label != nb.label) {
      c = na.label < nb.label ? -1 : 1;
    } else if (na.args.size() != nb.args.size()) {
      c = na.args.size() < nb.args.size() ? -1 : 1;
    } else {
      for (std::size_t i = 0; i < na.args.size() && c == 0; ++i)
        c = cmp_ref(na.args[i], nb.args[i]);
    }
    memo.emplace(key, c);
    return flipped ? -c : c;
  }
};

// ---------------------------------------------------------------------------
// graph construction
// ---------------------------------------------------------------------------

struct GraphBuilder {
  OpenHypergraph g;

  int new_port() { return g.port_count++; }

  int add_box(const std::string& label, const std::vector<std::string>& in_obs,
              std::size_t n_out) {
    HgBox b;
    b.label = label;
    for (std::size_t i = 0; i < in_obs.size(); ++i) b.in_ports.push_back(new_port());
    for (std::size_t i = 0; i < n_out; ++i) b.out_ports.push_back(new_port());
    g.boxes.push_back(std::move(b));
    return static_cast<int>(g.boxes.size() - 1);
  }

  void wire(int source, int target, const std::string& ob) { g.wires.push_back({source, target, ob}); }
};

}  // namespace

OpenHypergraph to_hypergraph(const TermPtr& term) {
  MorType ty = self_typecheck(term);
  if (has_feedback(term))
    fail(errc::feedback_not_supported,
         "terms containing fbk have no open hypergraph; compare them semantically");

  SymbolicDag dag;
  dag.dom = ty.dom;
  dag.cod = ty.cod;
  std::vector<Ref> ins;
  for (std::size_t i = 0; i < dag.dom.size(); ++i) ins.push_back({-1, static_cast<int>(i)});
  dag.outs = eval_term(dag, term, std::move(ins));

  // keep only applications the output boundary actually depends on
  std::vector<char> live(dag.nodes.size(), 0);
  std::vector<int> stack;
  auto mark = [&](const Ref& r) {
    if (r.node >= 0 && !live[static_cast<std::size_t>(r.node)]) {
      live[static_cast<std::size_t>(r.node)] = 1;
      stack.push_back(r.node);
    }
  };
  for (const auto& r : dag.outs) mark(r);
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    for (const auto& a : dag.nodes[static_cast<std::size_t>(n)].args) mark(a);
  }

  NodeOrder order{dag, {}};
  std::vector<int> live_nodes;
  for (std::size_t i = 0; i < dag.nodes.size(); ++i)
    if (live[i]) live_nodes.push_back(static_cast<int>(i));
  std::sort(live_nodes.begin(), live_nodes.end(),
            [&](int a, int b) { return order.cmp_node(a, b) < 0; });
  std::map<int, int> canon;  // dag node -> canonical position
  for (std::size_t i = 0; i < live_nodes.size(); ++i) canon[live_nodes[i]] = static_cast<int>(i);

  GraphBuilder gb;
  for (std::size_t i = 0; i < dag.dom.size(); ++i) gb.g.boundary_in.push_back(gb.new_port());
  for (std::size_t i = 0; i < dag.cod.size(); ++i) gb.g.boundary_out.push_back(gb.new_port());
  std::map<int, int> box_of;  // dag node -> box index
  for (int n : live_nodes) {
    const auto& nd = dag.nodes[static_cast<std::size_t>(n)];
    box_of[n] = gb.add_box(nd.label, nd.in_obs, nd.out_obs.size());
  }

  // a use site is one consuming port; sites are ordered boundary first, then
  // by canonical node position, so equal dags wire their copy combs equally
  struct Site {
    int key0, key1;
    int port;  // global target port id
  };
  std::map<Ref, std::vector<Site>> uses;
  for (std::size_t i = 0; i < dag.outs.size(); ++i) {
    int p = gb.g.boundary_out[i];
    uses[dag.outs[i]].push_back({-1, static_cast<int>(i), p});
  }
  for (int n : live_nodes) {
    const auto& nd = dag.nodes[static_cast<std::size_t>(n)];
    for (std::size_t k = 0; k < nd.args.size(); ++k) {
      int p = gb.g.boxes[static_cast<std::size_t>(box_of[n])].in_ports[k];
      uses[nd.args[k]].push_back({canon[n], static_cast<int>(k), p});
    }
  }

  // every produced value, in canonical producer order
  std::vector<Ref> produced;
  for (std::size_t i = 0; i < dag.dom.size(); ++i) produced.push_back({-1, static_cast<int>(i)});
  for (int n : live_nodes)
    for (std::size_t p = 0; p < dag.nodes[static_cast<std::size_t>(n)].out_obs.size(); ++p)
      produced.push_back({n, static_cast<int>(p)});

  for (const auto& ref : produced) {
    int src = ref.node < 0 ? gb.g.boundary_in[static_cast<std::size_t>(ref.port)]
                           : gb.g.boxes[static_cast<std::size_t>(box_of[ref.node])]
                                 .out_ports[static_cast<std::size_t>(ref.port)];
    const std::string ob = dag.ref_ob(ref);
    auto it = uses.find(ref);
    if (it == uses.end() || it->second.empty()) {
      int d = gb.add_box("discard", {ob}, 0);
      gb.wire(src, gb.g.boxes[static_cast<std::size_t>(d)].in_ports[0], ob);
      continue;
    }
    auto sites = it->second;
    std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
      return std::tie(a.key0, a.key1) < std::tie(b.key0, b.key1);
    });
    int carry = src;
    for (std::size_t i = 0; i + 1 < sites.size(); ++i) {
      int cp = gb.add_box("copy", {ob}, 2);
      const auto& box = gb.g.boxes[static_cast<std::size_t>(cp)];
      gb.wire(carry, box.in_ports[0], ob);
      gb.wire(box.out_ports[0], sites[i].port, ob);
      carry = box.out_ports[1];
    }
    gb.wire(carry, sites.back().port, ob);
  }

  std::sort(gb.g.wires.begin(), gb.g.wires.end(), [](const HgWire& a, const HgWire& b) {
    return std::tie(a.source, a.target) < std::tie(b.source, b.target);
  });
  return gb.g;
}

// ---------------------------------------------------------------------------
// isomorphism
// ---------------------------------------------------------------------------

namespace {

struct PortInfo {
  int box = -2;    // -1 = boundary, else box index
  int side = 0;    // 0 = produces (out/boundary_in), 1 = consumes
  int index = 0;   // port position within its side
  int peer = -1;   // port on the other end of the incident wire
  std::string ob;
};

struct IsoView {
  const OpenHypergraph& g;
  std::vector<PortInfo> ports;

  explicit IsoView(const OpenHypergraph& graph) : g(graph) {
    ports.resize(static_cast<std::size_t>(g.port_count));
    for (std::size_t b = 0; b < g.boxes.size(); ++b) {
      const auto& box = g.boxes[b];
      for (std::size_t i = 0; i < box.in_ports.size(); ++i)
        ports[static_cast<std::size_t>(box.in_ports[i])] = {static_cast<int>(b), 1,
                                                            static_cast<int>(i), -1, ""};
      for (std::size_t i = 0; i < box.out_ports.size(); ++i)
        ports[static_cast<std::size_t>(box.out_ports[i])] = {static_cast<int>(b), 0,
                                                             static_cast<int>(i), -1, ""};
    }
    for (std::size_t i = 0; i < g.boundary_in.size(); ++i)
      ports[static_cast<std::size_t>(g.boundary_in[i])] = {-1, 0, static_cast<int>(i), -1, ""};
    for (std::size_t i = 0; i < g.boundary_out.size(); ++i)
      ports[static_cast<std::size_t>(g.boundary_out[i])] = {-1, 1, static_cast<int>(i), -1, ""};
    for (const auto& w : g.wires) {
      ports[static_cast<std::size_t>(w.source)].peer = w.target;
      ports[static_cast<std::size_t>(w.target)].peer = w.source;
      ports[static_cast<std::size_t>(w.source)].ob = w.ob;
      ports[static_cast<std::size_t>(w.target)].ob = w.ob;
    }
  }

  // colour of the box at the far end of a port's wire (boundary = rigid tag)
  std::uint64_t peer_tag(int port, const std::vector<std::uint64_t>& colour) const {
    const auto& p = ports[static_cast<std::size_t>(port)];
    if (p.peer < 0) return 0;  // dangling never happens on well-formed graphs
    const auto& q = ports[static_cast<std::size_t>(p.peer)];
    std::uint64_t h = hash_combine(0x9e11, static_cast<std::uint64_t>(q.side));
    h = hash_combine(h, static_cast<std::uint64_t>(q.index));
    if (q.box < 0) return hash_combine(h, 0xb007ull);
    return hash_combine(h, colour[static_cast<std::size_t>(q.box)]);
  }
};

std::uint64_t str_hash(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  return h;
}

std::vector<std::uint64_t> refine(const IsoView& v) {
  std::vector<std::uint64_t> colour(v.g.boxes.size());
  for (std::size_t b = 0; b < v.g.boxes.size(); ++b) {
    const auto& box = v.g.boxes[b];
    std::uint64_t h = str_hash(box.label);
    h = hash_combine(h, box.in_ports.size());
    h = hash_combine(h, box.out_ports.size());
    colour[b] = h;
  }
  for (std::size_t round = 0; round <= v.g.boxes.size(); ++round) {
    std::vector<std::uint64_t> next(colour.size());
    for (std::size_t b = 0; b < v.g.boxes.size(); ++b) {
      std::uint64_t h = colour[b];
      const auto& box = v.g.boxes[b];
      for (int p : box.in_ports) {
        h = hash_combine(h, v.peer_tag(p, colour));
        h = hash_combine(h, str_hash(v.ports[static_cast<std::size_t>(p)].ob));
      }
      for (int p : box.out_ports) {
        h = hash_combine(h, v.peer_tag(p, colour));
        h = hash_combine(h, str_hash(v.ports[static_cast<std::size_t>(p)].ob));
      }
      next[b] = h;
    }
    if (next == colour) break;
    colour = std::move(next);
  }
  return colour;
}

bool wires_match(const IsoView& va, const IsoView& vb, const std::vector<int>& a_to_b) {
  auto map_port = [&](int pa) -> int {
    const auto& p = va.ports[static_cast<std::size_t>(pa)];
    if (p.box < 0)
      return p.side == 0 ? vb.g.boundary_in[static_cast<std::size_t>(p.index)]
                         : vb.g.boundary_out[static_cast<std::size_t>(p.index)];
    const auto& box = vb.g.boxes[static_cast<std::size_t>(a_to_b[static_cast<std::size_t>(p.box)])];
    return p.side == 0 ? box.out_ports[static_cast<std::size_t>(p.index)]
                       : box.in_ports[static_cast<std::size_t>(p.index)];
  };
  for (const auto& w : va.g.wires) {
    int s = map_port(w.source), t = map_port(w.target);
    const auto& ps = vb.ports[static_cast<std::size_t>(s)];
    if (ps.peer != t) return false;
    if (ps.ob != w.ob) return false;
  }
  return true;
}

bool extend(const IsoView& va, const IsoView& vb,
            const std::vector<std::vector<int>>& candidates, std::vector<int>& a_to_b,
            std::vector<char>& used, std::size_t i) {
  if (i == a_to_b.size()) return wires_match(va, vb, a_to_b);
  for (int cand : candidates[i]) {
    if (used[static_cast<std::size_t>(cand)]) continue;
    a_to_b[i] = cand;
    used[static_cast<std::size_t>(cand)] = 1;
    if (extend(va, vb, candidates, a_to_b, used, i + 1)) return true;
    used[static_cast<std::size_t>(cand)] = 0;
  }
  return false;
}

}  // namespace

bool hypergraph_iso(const OpenHypergraph& a, const OpenHypergraph& b) {
  if (a.boxes.size() != b.boxes.size() || a.wires.size() != b.wires.size()) return false;
  if (a.boundary_in.size() != b.boundary_in.size()) return false;
  if (a.boundary_out.size() != b.boundary_out.size()) return false;

  IsoView va(a), vb(b);
  auto ca = refine(va);
  auto cb = refine(vb);
  auto sorted = [](std::vector<std::uint64_t> c) {
    std::sort(c.begin(), c.end());
    return c;
  };
  if (sorted(ca) != sorted(cb)) return false;

  std::vector<std::vector<int>> candidates(a.boxes.size());
  for (std::size_t i = 0; i < ca.size(); ++i)
    for (std::size_t j = 0; j < cb.size(); ++j)
      if (ca[i] == cb[j] && a.boxes[i].label == b.boxes[j].label)
        candidates[i].push_back(static_cast<int>(j));
  for (const auto& c : candidates)
    if (c.empty()) return false;

  std::vector<int> a_to_b(a.boxes.size(), -1);
  std::vector<char> used(b.boxes.size(), 0);
  return extend(va, vb, candidates, a_to_b, used, 0);
}

bool diagram_eq(const TermPtr& t1, const TermPtr& t2) {
  MorType ty1 = self_typecheck(t1);
  MorType ty2 = self_typecheck(t2);
  if (ty1.dom != ty2.dom || ty1.cod != ty2.cod)
    fail(errc::type_mismatch, "cannot compare diagrams of different types: " +
                                  ob_to_string(ty1.dom) + " -> " + ob_to_string(ty1.cod) +
                                  " vs " + ob_to_string(ty2.dom) + " -> " +
                                  ob_to_string(ty2.cod));
  return hypergraph_iso(to_hypergraph(t1), to_hypergraph(t2));
}

std::string hypergraph_to_string(const OpenHypergraph& g) {
  std::ostringstream os;
  os << "in:";
  for (int p : g.boundary_in) os << " " << p;
  os << "\nout:";
  for (int p : g.boundary_out) os << " " << p;
  os << "\n";
  for (std::size_t b = 0; b < g.boxes.size(); ++b) {
    os << "box " << b << " " << g.boxes[b].label << " [";
    for (std::size_t i = 0; i < g.boxes[b].in_ports.size(); ++i)
      os << (i ? " " : "") << g.boxes[b].in_ports[i];
    os << "] -> [";
    for (std::size_t i = 0; i < g.boxes[b].out_ports.size(); ++i)
      os << (i ? " " : "") << g.boxes[b].out_ports[i];
    os << "]\n";
  }
  for (const auto& w : g.wires) os << "wire " << w.source << " -> " << w.target << " : " << w.ob << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// structural dot rendering
// ---------------------------------------------------------------------------

namespace {

struct DotState {
  std::ostringstream nodes;
  std::ostringstream edges;
  int next_box = 0;
  int next_junction = 0;

  std::string box(const std::string& label) {
    std::string id = "b" + std::to_string(next_box++);
    nodes << "  " << id << " [label=\"" << label << "\"];\n";
    return id;
  }
};

// endpoints are dot node ids; object labels ride on the edges
std::vector<std::pair<std::string, std::string>> render_term(
    DotState& st, const TermPtr& t, std::vector<std::pair<std::string, std::string>> ins) {
  using Ends = std::vector<std::pair<std::string, std::string>>;
  return std::visit(
      overloaded{
          [&](const GenMor& g) {
            std::string id = st.box(g.name);
            for (const auto& [src, ob] : ins)
              st.edges << "  " << src << " -> " << id << " [label=\"" << ob << "\"];\n";
            Ends outs;
            for (const auto& ob : flatten(g.cod)) outs.push_back({id, ob});
            return outs;
          },
          [&](const IdMor&) { return ins; },
          [&](const ComposeMor& c) {
            return render_term(st, c.second, render_term(st, c.first, std::move(ins)));
          },
          [&](const TensorMor& tn) {
            std::size_t cut = flatten(term_dom(tn.left)).size();
            Ends l(ins.begin(), ins.begin() + static_cast<std::ptrdiff_t>(cut));
            Ends r(ins.begin() + static_cast<std::ptrdiff_t>(cut), ins.end());
            auto lo = render_term(st, tn.left, std::move(l));
            auto ro = render_term(st, tn.right, std::move(r));
            lo.insert(lo.end(), ro.begin(), ro.end());
            return lo;
          },
          [&](const SymMor& s) {
            std::size_t cut = flatten(s.a).size();
            Ends out(ins.begin() + static_cast<std::ptrdiff_t>(cut), ins.end());
            out.insert(out.end(), ins.begin(), ins.begin() + static_cast<std::ptrdiff_t>(cut));
            return out;
          },
          [&](const CopyMor&) {
            std::string id = st.box("copy");
            for (const auto& [src, ob] : ins)
              st.edges << "  " << src << " -> " << id << " [label=\"" << ob << "\"];\n";
            Ends outs;
            for (const auto& e : ins) outs.push_back({id, e.second});
            for (const auto& e : ins) outs.push_back({id, e.second});
            return outs;
          },
          [&](const DiscardMor&) {
            std::string id = st.box("discard");
            for (const auto& [src, ob] : ins)
              st.edges << "  " << src << " -> " << id << " [label=\"" << ob << "\"];\n";
            return Ends{};
          },
          [&](const FeedbackMor& f) {
            auto state_obs = flatten(f.state);
            std::string j = "fb" + std::to_string(st.next_junction++);
            st.nodes << "  " << j << " [shape=point, width=0.08];\n";
            for (const auto& ob : state_obs) ins.push_back({j, ob});
            auto outs = render_term(st, f.inner, std::move(ins));
            for (std::size_t i = 0; i < state_obs.size(); ++i) {
              const auto& [src, ob] = outs[outs.size() - state_obs.size() + i];
              st.edges << "  " << src << " -> " << j << " [label=\"" << ob
                       << "\", style=dashed, constraint=false];\n";
            }
            outs.resize(outs.size() - state_obs.size());
            return outs;
          }},
      t->node);
}

}  // namespace

std::string render_dot(const TermPtr& term) {
  MorType ty = self_typecheck(term);
  DotState st;
  std::vector<std::pair<std::string, std::string>> ins;
  std::ostringstream head;
  for (std::size_t i = 0; i < ty.dom.size(); ++i) {
    head << "  in" << i << " [shape=plaintext, label=\"" << ty.dom[i] << "\"];\n";
    ins.push_back({"in" + std::to_string(i), ty.dom[i]});
  }
  auto outs = render_term(st, term, std::move(ins));
  std::ostringstream os;
  os << "digraph diagram {\n  rankdir=LR;\n  node [shape=box];\n";
  os << head.str() << st.nodes.str();
  for (std::size_t i = 0; i < outs.size(); ++i)
    os << "  out" << i << " [shape=plaintext, label=\"" << ty.cod[i] << "\"];\n";
  os << st.edges.str();
  for (std::size_t i = 0; i < outs.size(); ++i)
    os << "  " << outs[i].first << " -> out" << i << " [label=\"" << outs[i].second << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace catxai::hg

#include <doctest.h>

#include <map>

#include "catxai/util.hpp"
#include "catxai/xlearn.hpp"

using namespace catxai;
using namespace catxai::diagram;
using namespace catxai::xlearn;

namespace {

struct NodeCounts {
  std::map<std::string, int> gens;
  int copies = 0, discards = 0, feedbacks = 0, syms = 0;
  std::map<std::string, int> copy_obs, discard_obs, feedback_states;
};

void count_nodes(const TermPtr& t, NodeCounts& c) {
  std::visit(overloaded{[&](const GenMor& g) { c.gens[g.name]++; },
                        [&](const IdMor&) {},
                        [&](const ComposeMor& m) {
                          count_nodes(m.first, c);
                          count_nodes(m.second, c);
                        },
                        [&](const TensorMor& m) {
                          count_nodes(m.left, c);
                          count_nodes(m.right, c);
                        },
                        [&](const SymMor&) { c.syms++; },
                        [&](const CopyMor& m) {
                          c.copies++;
                          c.copy_obs[ob_to_string(flatten(m.ob))]++;
                        },
                        [&](const DiscardMor& m) {
                          c.discards++;
                          c.discard_obs[ob_to_string(flatten(m.ob))]++;
                        },
                        [&](const FeedbackMor& m) {
                          c.feedbacks++;
                          c.feedback_states[ob_to_string(flatten(m.state))]++;
                          count_nodes(m.inner, c);
                        }},
             t->node);
}

}  // namespace

TEST_CASE("the fixed presentation has the four objects and two morphisms") {
  const auto& p = presentation();
  for (const auto& name : {"X", "Y", "P", "E"}) CHECK(p.has_ob(name));
  CHECK(p.ob_gens.size() == 4);
  REQUIRE(p.has_mor(explainer_name));
  REQUIRE(p.has_mor(optimizer_name));
  CHECK(p.mor_gens.size() == 2);
  CHECK(flatten(p.mor_gens.at(explainer_name).dom) == ObList{"X", "P"});
  CHECK(flatten(p.mor_gens.at(explainer_name).cod) == ObList{"Y", "E"});
  CHECK(flatten(p.mor_gens.at(optimizer_name).dom) == ObList{"Y", "Y", "P"});
  CHECK(flatten(p.mor_gens.at(optimizer_name).cod) == ObList{"P"});
}

TEST_CASE("the closed agent consumes a label and an input and returns nothing") {
  auto ty = typecheck(abstract_agent(), presentation());
  CHECK(ty.dom == ObList{"Y", "X"});
  CHECK(ty.cod == ObList{});
}

TEST_CASE("the closed agent has exactly the advertised structure") {
  NodeCounts c;
  count_nodes(abstract_agent(), c);
  CHECK(c.gens == std::map<std::string, int>{{explainer_name, 1}, {optimizer_name, 1}});
  CHECK(c.copies == 1);
  CHECK(c.copy_obs["P"] == 1);
  CHECK(c.discards == 1);
  CHECK(c.discard_obs["E"] == 1);
  CHECK(c.feedbacks == 1);
  CHECK(c.feedback_states["P"] == 1);
  CHECK(c.syms == 0);
}

TEST_CASE("the closed agent is its own normal form") {
  auto a = abstract_agent();
  CHECK(term_equal(normalize(a), a));
}

TEST_CASE("the observable agent emits a prediction and an explanation") {
  auto ty = typecheck(observable_agent(), presentation());
  CHECK(ty.dom == ObList{"Y", "X"});
  CHECK(ty.cod == ObList{"Y", "E"});
}

TEST_CASE("the observable agent only adds copies and routing") {
  NodeCounts a, o;
  count_nodes(abstract_agent(), a);
  count_nodes(observable_agent(), o);
  CHECK(o.gens == a.gens);  // same two generators, once each
  CHECK(o.feedbacks == 1);
  CHECK(o.feedback_states["P"] == 1);
  CHECK(o.discards == a.discards);  // the loop branch of e still hits a discard
  CHECK(o.copies == a.copies + 2);  // plus Copy(Y) and Copy(E)
  CHECK(o.copy_obs["Y"] == 1);
  CHECK(o.copy_obs["E"] == 1);
  CHECK(o.syms == 1);
}

TEST_CASE("both agents print and reparse through the term syntax") {
  for (const auto& t : {abstract_agent(), observable_agent()}) {
    auto text = term_to_string(t);
    CHECK(!text.empty());
    CHECK(text.find("fbk[P]") != std::string::npos);
  }
}

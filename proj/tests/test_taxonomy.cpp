#include <doctest.h>

#include <set>
#include <sstream>

#include "catxai/taxonomy.hpp"

using namespace catxai;
using namespace catxai::taxonomy;
using L = TaxonomyLabel;

namespace {

Factor fac(Role role, const char* name) { return {role, diagram::ob(name)}; }
Factor unit_explanation() { return {Role::explanation, diagram::ob_unit()}; }

}  // namespace

TEST_CASE("the shape rules reproduce the worked classifications") {
  // foreign answers, inputs and weights feeding a rule writer
  ExplainerSpec reads_the_model{
      {fac(Role::model_output, "Y"), fac(Role::input, "X"), fac(Role::params, "P")},
      {fac(Role::output, "Yp"), fac(Role::explanation, "Sen")},
      std::nullopt};
  CHECK(classify(reads_the_model) ==
        std::vector<L>{L::post_hoc, L::model_specific, L::syntactic_xla});

  // self-contained model that emits nothing
  ExplainerSpec keeps_quiet{{fac(Role::input, "X"), fac(Role::params, "P")},
                            {fac(Role::output, "Y"), unit_explanation()},
                            std::nullopt};
  CHECK(classify(keeps_quiet) ==
        std::vector<L>{L::intrinsic, L::forward_based, L::learning_agent_no_explanation});

  // gradient consumer producing relevance models
  ExplainerSpec walks_backward{{fac(Role::input, "X2"), fac(Role::grad_params, "HP")},
                               {fac(Role::output, "Y"), fac(Role::explanation, "Mod")},
                               std::nullopt};
  CHECK(classify(walks_backward) ==
        std::vector<L>{L::post_hoc, L::backward_based, L::semantic_xla});
}

TEST_CASE("every catalog entry classifies to its expected labels") {
  const auto& catalog = canonical_catalog();
  CHECK(catalog.size() >= 7);
  std::set<std::string> names;
  for (const auto& entry : catalog) {
    CAPTURE(entry.name);
    CHECK(names.insert(entry.name).second);
    CHECK(!entry.expected.empty());
    CHECK(classify(entry.spec) == entry.expected);
  }
  CHECK(names.count("saliency-map") == 1);
  CHECK(names.count("plain-la") == 1);
  CHECK(names.count("concept-bottleneck") == 1);
}

TEST_CASE("exclusive label pairs never co-occur over all role shapes") {
  const Role dom_roles[] = {Role::input, Role::output, Role::params, Role::grad_params,
                            Role::model_output};
  const char* dom_obs[] = {"X", "Y", "P", "HP", "MY"};
  const char* payloads[] = {nullptr, "Sen", "Mod", "Q"};

  std::size_t bottlenecks = 0;
  for (int mask = 0; mask < 32; ++mask) {
    for (const char* payload : payloads) {
      for (int ctx = 0; ctx < 3; ++ctx) {  // none, unrelated, pipeline
        ExplainerSpec spec;
        for (int r = 0; r < 5; ++r)
          if (mask & (1 << r)) spec.dom_factors.push_back(fac(dom_roles[r], dom_obs[r]));
        spec.cod_factors.push_back(fac(Role::output, "Yc"));
        spec.cod_factors.push_back(payload ? fac(Role::explanation, payload)
                                           : unit_explanation());
        if (ctx == 1)
          spec.context = ModelContext{diagram::ob("A"), diagram::ob("B"), diagram::ob("Z")};
        if (ctx == 2)
          spec.context = ModelContext{diagram::ob("A"), diagram::ob("B"), diagram::ob("X")};

        auto labels = classify(spec);
        CHECK(classify(spec) == labels);  // pure

        auto got = [&](L l) {
          for (L x : labels)
            if (x == l) return true;
          return false;
        };
        CHECK(!(got(L::post_hoc) && got(L::intrinsic)));
        CHECK(!(got(L::model_agnostic) && got(L::model_specific)));
        CHECK(!(got(L::forward_based) && got(L::backward_based)));

        for (std::size_t i = 1; i < labels.size(); ++i)
          CHECK(static_cast<int>(labels[i - 1]) < static_cast<int>(labels[i]));

        bool pipeline = ctx == 2 && (mask & 1);  // input wire present and matching
        CHECK(got(L::concept_bottleneck) == pipeline);
        if (pipeline) CHECK(labels.size() == 1);
        if (!pipeline && (mask & 0b11000 || spec.context))
          CHECK(got(L::post_hoc));  // gradients, foreign outputs or a context
        if (payload == nullptr && !pipeline) CHECK(got(L::learning_agent_no_explanation));
        if (payload && std::string(payload) == "Q") {
          CHECK(!got(L::syntactic_xla));
          CHECK(!got(L::semantic_xla));
          CHECK(!got(L::learning_agent_no_explanation));
        }
        if (pipeline) ++bottlenecks;
      }
    }
  }
  CHECK(bottlenecks == 16 * 4);  // half the masks have the input wire
}

TEST_CASE("role bookkeeping is validated") {
  ExplainerSpec twice{{fac(Role::input, "X"), fac(Role::input, "X2")},
                      {fac(Role::output, "Y"), unit_explanation()},
                      std::nullopt};
  CHECK_THROWS_WITH_AS(classify(twice), doctest::Contains("E_AMBIGUOUS_ROLES"), error);

  ExplainerSpec misplaced{{fac(Role::explanation, "Sen")},
                          {fac(Role::output, "Y"), unit_explanation()},
                          std::nullopt};
  CHECK_THROWS_WITH_AS(classify(misplaced), doctest::Contains("E_AMBIGUOUS_ROLES"), error);

  ExplainerSpec silent{{fac(Role::input, "X")}, {fac(Role::output, "Y")}, std::nullopt};
  CHECK_THROWS_WITH_AS(classify(silent), doctest::Contains("E_TYPE_MISMATCH"), error);

  ExplainerSpec chatty{{fac(Role::input, "X")},
                       {fac(Role::explanation, "Sen"), fac(Role::explanation, "Mod")},
                       std::nullopt};
  CHECK_THROWS_WITH_AS(classify(chatty), doctest::Contains("E_AMBIGUOUS_ROLES"), error);

  ExplainerSpec grads_out{{fac(Role::input, "X")},
                          {fac(Role::grad_params, "HP"), unit_explanation()},
                          std::nullopt};
  CHECK_THROWS_WITH_AS(classify(grads_out), doctest::Contains("E_AMBIGUOUS_ROLES"), error);
}

TEST_CASE("spec files read, print and round-trip") {
  std::istringstream in(
      "# a saliency explainer\n"
      "dom modeloutput Y\n"
      "dom input X\n"
      "dom gradparams HP\n"
      "\n"
      "cod output Ys\n"
      "cod explanation Mod  # relevance models\n");
  ExplainerSpec spec = read_explainer_spec(in);
  CHECK(labels_to_string(classify(spec)) == "PostHoc ModelSpecific BackwardBased SemanticXLA");

  std::istringstream again(explainer_spec_to_string(spec));
  CHECK(classify(read_explainer_spec(again)) == classify(spec));

  std::istringstream pipe(
      "dom input C\n"
      "dom params P2\n"
      "cod output Y\n"
      "cod explanation I\n"
      "context model X*W P1 C\n");
  ExplainerSpec bottleneck = read_explainer_spec(pipe);
  REQUIRE(bottleneck.context.has_value());
  CHECK(diagram::flatten(bottleneck.context->input) == diagram::ObList{"X", "W"});
  CHECK(classify(bottleneck) == std::vector<L>{L::concept_bottleneck});

  std::string printed = explainer_spec_to_string(bottleneck);
  CHECK(printed.find("cod explanation I\n") != std::string::npos);
  CHECK(printed.find("context model X*W P1 C\n") != std::string::npos);
  std::istringstream back(printed);
  CHECK(classify(read_explainer_spec(back)) == std::vector<L>{L::concept_bottleneck});

  auto bad = [](const char* text) {
    std::istringstream s(text);
    return read_explainer_spec(s);
  };
  CHECK_THROWS_WITH_AS(bad("dom banana X\ncod explanation I"), doctest::Contains("E_PARSE"),
                       error);
  CHECK_THROWS_WITH_AS(bad("cod gradparams X\ncod explanation I"), doctest::Contains("E_PARSE"),
                       error);
  CHECK_THROWS_WITH_AS(bad("dom input\ncod explanation I"), doctest::Contains("E_PARSE"), error);
  CHECK_THROWS_WITH_AS(bad("dom input 9x\ncod explanation I"), doctest::Contains("E_PARSE"),
                       error);
  CHECK_THROWS_WITH_AS(bad("dom input X*\ncod explanation I"), doctest::Contains("E_PARSE"),
                       error);
  CHECK_THROWS_WITH_AS(bad("context model X P\ncod explanation I"), doctest::Contains("E_PARSE"),
                       error);
  CHECK_THROWS_WITH_AS(bad("context model A B C\ncontext model A B C\ncod explanation I"),
                       doctest::Contains("E_PARSE"), error);
  CHECK_THROWS_WITH_AS(bad("mor f X Y\ncod explanation I"), doctest::Contains("E_PARSE"), error);
}

TEST_CASE("labels print with their published names") {
  CHECK(label_to_string(L::post_hoc) == "PostHoc");
  CHECK(label_to_string(L::intrinsic) == "Intrinsic");
  CHECK(label_to_string(L::model_agnostic) == "ModelAgnostic");
  CHECK(label_to_string(L::model_specific) == "ModelSpecific");
  CHECK(label_to_string(L::forward_based) == "ForwardBased");
  CHECK(label_to_string(L::backward_based) == "BackwardBased");
  CHECK(label_to_string(L::concept_bottleneck) == "ConceptBottleneck");
  CHECK(label_to_string(L::learning_agent_no_explanation) == "LearningAgentNoExplanation");
  CHECK(label_to_string(L::syntactic_xla) == "SyntacticXLA");
  CHECK(label_to_string(L::semantic_xla) == "SemanticXLA");
  CHECK(labels_to_string({}) == "");
  CHECK(labels_to_string({L::intrinsic, L::forward_based}) == "Intrinsic ForwardBased");
}

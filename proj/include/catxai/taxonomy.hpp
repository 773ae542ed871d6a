#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "catxai/diagram.hpp"

namespace catxai::taxonomy {

// which wire feeds the explainer; roles are explicit annotations because the
// same object symbol can sit on differently-flavoured wires
enum class Role { input, output, params, grad_params, model_output, explanation };

struct Factor {
  Role role;
  diagram::ObPtr ob;
};

// reference model mu : input * params -> output that the explainer talks about
struct ModelContext {
  diagram::ObPtr input, params, output;
};

struct ExplainerSpec {
  std::vector<Factor> dom_factors;
  std::vector<Factor> cod_factors;  // an explanation factor is mandatory (may be I)
  std::optional<ModelContext> context;
};

// each role at most once per wire, explanation exactly once and only in cod
void validate(const ExplainerSpec& spec);

enum class TaxonomyLabel {
  post_hoc,
  intrinsic,
  model_agnostic,
  model_specific,
  forward_based,
  backward_based,
  concept_bottleneck,
  learning_agent_no_explanation,
  syntactic_xla,
  semantic_xla,
};

std::string label_to_string(TaxonomyLabel label);
std::string labels_to_string(const std::vector<TaxonomyLabel>& labels);  // space-joined

// deterministic shape rules; the result is sorted in enum order and never
// contains both labels of an exclusive pair. A concept-bottleneck pipeline
// (our input wires are exactly the context model's output) stands alone.
std::vector<TaxonomyLabel> classify(const ExplainerSpec& spec);

struct CatalogEntry {
  std::string name;
  ExplainerSpec spec;
  std::vector<TaxonomyLabel> expected;
};

// named encodings of the usual explainer families, with their label sets
const std::vector<CatalogEntry>& canonical_catalog();

// one factor per line: `dom <role> <ob>` / `cod <role> <ob>`, plus an
// optional `context model <ob> <ob> <ob>`; roles are input, output, params,
// gradparams, modeloutput (dom) and output, explanation (cod)
ExplainerSpec read_explainer_spec(std::istream& in);
std::string explainer_spec_to_string(const ExplainerSpec& spec);

}  // namespace catxai::taxonomy

#include "catxai/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <sstream>

namespace catxai::taxonomy {

void validate(const ExplainerSpec& spec) {
  auto unique_roles = [](const std::vector<Factor>& fs, const char* wire) {
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (std::size_t j = i + 1; j < fs.size(); ++j)
        if (fs[i].role == fs[j].role)
          fail(errc::ambiguous_roles, std::string("duplicate role on the ") + wire + " wire");
  };
  unique_roles(spec.dom_factors, "domain");
  unique_roles(spec.cod_factors, "codomain");
  for (const auto& f : spec.dom_factors)
    if (f.role == Role::explanation)
      fail(errc::ambiguous_roles, "explanation is a codomain role");
  std::size_t explanations = 0;
  for (const auto& f : spec.cod_factors) {
    if (f.role == Role::explanation)
      ++explanations;
    else if (f.role != Role::output)
      fail(errc::ambiguous_roles, "codomain roles are output and explanation");
  }
  if (explanations == 0)
    fail(errc::type_mismatch, "an explanation factor is required (use I to explain nothing)");
}

namespace {

enum class PayloadKind { unit, sentences, models, other };

// the reserved object names Sen and Mod mark what the explanation wire
// carries; the empty product carries nothing
PayloadKind payload_kind(const ExplainerSpec& spec) {
  for (const auto& f : spec.cod_factors) {
    if (f.role != Role::explanation) continue;
    auto flat = diagram::flatten(f.ob);
    if (flat.empty()) return PayloadKind::unit;
    bool sen = true, mod = true;
    for (const auto& atom : flat) {
      sen = sen && atom == "Sen";
      mod = mod && atom == "Mod";
    }
    if (sen) return PayloadKind::sentences;
    if (mod) return PayloadKind::models;
    return PayloadKind::other;
  }
  return PayloadKind::other;  // unreachable after validate
}

}  // namespace

std::vector<TaxonomyLabel> classify(const ExplainerSpec& spec) {
  validate(spec);
  auto has = [&](Role r) {
    for (const auto& f : spec.dom_factors)
      if (f.role == r) return true;
    return false;
  };
  bool ext = has(Role::model_output);
  bool grad = has(Role::grad_params);
  bool par = has(Role::params);
  bool inp = has(Role::input);

  // a pipeline stage consumes exactly what the upstream model produces
  bool pipeline = false;
  if (spec.context) {
    diagram::ObList ins;
    for (const auto& f : spec.dom_factors)
      if (f.role == Role::input)
        for (const auto& atom : diagram::flatten(f.ob)) ins.push_back(atom);
    pipeline = !ins.empty() && ins == diagram::flatten(spec.context->output);
  }
  if (pipeline) return {TaxonomyLabel::concept_bottleneck};

  using L = TaxonomyLabel;
  std::vector<TaxonomyLabel> out;
  // anything that looks at a foreign model (its answers, its loss gradient,
  // or a reference signature) explains after the fact
  if (ext || grad || spec.context)
    out.push_back(L::post_hoc);
  else if (par && inp)
    out.push_back(L::intrinsic);
  if (spec.context && !ext && !grad && par && inp && spec.dom_factors.size() == 2)
    out.push_back(L::model_agnostic);
  if (ext) out.push_back(L::model_specific);
  if (par && !grad && !ext) out.push_back(L::forward_based);
  if (grad) out.push_back(L::backward_based);
  switch (payload_kind(spec)) {
    case PayloadKind::unit: out.push_back(L::learning_agent_no_explanation); break;
    case PayloadKind::sentences: out.push_back(L::syntactic_xla); break;
    case PayloadKind::models: out.push_back(L::semantic_xla); break;
    case PayloadKind::other: break;
  }

  auto got = [&](L l) { return std::find(out.begin(), out.end(), l) != out.end(); };
  if ((got(L::post_hoc) && got(L::intrinsic)) ||
      (got(L::model_agnostic) && got(L::model_specific)) ||
      (got(L::forward_based) && got(L::backward_based)))
    fail(errc::ambiguous_roles, "mutually exclusive labels matched together");
  return out;
}

std::string label_to_string(TaxonomyLabel label) {
  switch (label) {
    case TaxonomyLabel::post_hoc: return "PostHoc";
    case TaxonomyLabel::intrinsic: return "Intrinsic";
    case TaxonomyLabel::model_agnostic: return "ModelAgnostic";
    case TaxonomyLabel::model_specific: return "ModelSpecific";
    case TaxonomyLabel::forward_based: return "ForwardBased";
    case TaxonomyLabel::backward_based: return "BackwardBased";
    case TaxonomyLabel::concept_bottleneck: return "ConceptBottleneck";
    case TaxonomyLabel::learning_agent_no_explanation: return "LearningAgentNoExplanation";
    case TaxonomyLabel::syntactic_xla: return "SyntacticXLA";
    case TaxonomyLabel::semantic_xla: return "SemanticXLA";
  }
  fail(errc::usage_error, "unknown label");
}

std::string labels_to_string(const std::vector<TaxonomyLabel>& labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ' ';
    out += label_to_string(labels[i]);
  }
  return out;
}

namespace {

Factor fac(Role role, const char* name) { return {role, diagram::ob(name)}; }
Factor no_explanation() { return {Role::explanation, diagram::ob_unit()}; }

}  // namespace

const std::vector<CatalogEntry>& canonical_catalog() {
  using L = TaxonomyLabel;
  static const std::vector<CatalogEntry> entries = {
      // reads its own parameters and inputs, writes rules about itself
      {"intrinsic-rule-model",
       {{fac(Role::input, "X"), fac(Role::params, "P")},
        {fac(Role::output, "Y"), fac(Role::explanation, "Sen")},
        std::nullopt},
       {L::intrinsic, L::forward_based, L::syntactic_xla}},
      // local surrogate fitted beside a black box it never opens
      {"lime-surrogate",
       {{fac(Role::input, "X"), fac(Role::params, "P")},
        {fac(Role::output, "Y"), fac(Role::explanation, "Sen")},
        ModelContext{diagram::ob("X"), diagram::ob("Pm"), diagram::ob("Y")}},
       {L::post_hoc, L::model_agnostic, L::forward_based, L::syntactic_xla}},
      // relevance from the loss gradient over the explained model's wires
      {"saliency-map",
       {{fac(Role::model_output, "Y"), fac(Role::input, "X"), fac(Role::grad_params, "HP")},
        {fac(Role::output, "Ys"), fac(Role::explanation, "Mod")},
        std::nullopt},
       {L::post_hoc, L::model_specific, L::backward_based, L::semantic_xla}},
      // concept probe scoring gradient alignment with concept directions
      {"tcav-concept-probe",
       {{fac(Role::input, "X"), fac(Role::model_output, "Y"), fac(Role::grad_params, "HP")},
        {fac(Role::output, "C"), fac(Role::explanation, "Sen")},
        std::nullopt},
       {L::post_hoc, L::model_specific, L::backward_based, L::syntactic_xla}},
      // second stage of a two-agent pipeline predicting from concepts
      {"concept-bottleneck",
       {{fac(Role::input, "C"), fac(Role::params, "P2")},
        {fac(Role::output, "Y"), no_explanation()},
        ModelContext{diagram::ob("X"), diagram::ob("P1"), diagram::ob("C")}},
       {L::concept_bottleneck}},
      // a learning agent with nothing to say
      {"plain-la",
       {{fac(Role::output, "Y"), fac(Role::input, "X")},
        {fac(Role::output, "Y"), no_explanation()},
        std::nullopt},
       {L::learning_agent_no_explanation}},
      // global rule extraction against the model's recorded answers
      {"rule-extraction",
       {{fac(Role::model_output, "Y"), fac(Role::input, "X"), fac(Role::params, "P")},
        {fac(Role::output, "Yr"), fac(Role::explanation, "Sen")},
        std::nullopt},
       {L::post_hoc, L::model_specific, L::syntactic_xla}},
  };
  return entries;
}

namespace {

diagram::ObPtr parse_ob(const std::string& raw, const std::string& where) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  if (text.empty()) fail(errc::parse_error, where + ": missing object expression");
  diagram::ObList atoms;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t star = text.find('*', start);
    std::string part = text.substr(start, star == std::string::npos ? star : star - start);
    if (part.empty()) fail(errc::parse_error, where + ": empty tensor factor");
    if (part != "I") {
      if (!std::isalpha(static_cast<unsigned char>(part[0])) && part[0] != '_')
        fail(errc::parse_error, where + ": bad object name `" + part + "`");
      for (char c : part)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
          fail(errc::parse_error, where + ": bad object name `" + part + "`");
      atoms.push_back(part);
    }
    if (star == std::string::npos) break;
    start = star + 1;
  }
  return diagram::ob_of_list(atoms);
}

Role parse_role(const std::string& token, bool codomain, const std::string& where) {
  if (codomain) {
    if (token == "output") return Role::output;
    if (token == "explanation") return Role::explanation;
    fail(errc::parse_error, where + ": codomain role must be output or explanation");
  }
  if (token == "input") return Role::input;
  if (token == "output") return Role::output;
  if (token == "params") return Role::params;
  if (token == "gradparams") return Role::grad_params;
  if (token == "modeloutput") return Role::model_output;
  fail(errc::parse_error, where + ": unknown role `" + token + "`");
}

std::string role_token(Role role) {
  switch (role) {
    case Role::input: return "input";
    case Role::output: return "output";
    case Role::params: return "params";
    case Role::grad_params: return "gradparams";
    case Role::model_output: return "modeloutput";
    case Role::explanation: return "explanation";
  }
  fail(errc::usage_error, "unknown role");
}

std::string compact_ob(const diagram::ObPtr& ob) {
  auto flat = diagram::flatten(ob);
  if (flat.empty()) return "I";
  std::string out = flat[0];
  for (std::size_t i = 1; i < flat.size(); ++i) out += "*" + flat[i];
  return out;
}

}  // namespace

ExplainerSpec read_explainer_spec(std::istream& in) {
  ExplainerSpec spec;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = "spec line " + std::to_string(lineno);
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "context") {
      std::string kw, a, b, c, extra;
      if (!(ls >> kw >> a >> b >> c) || kw != "model" || (ls >> extra))
        fail(errc::parse_error, where + ": expected `context model <in> <params> <out>`");
      if (spec.context) fail(errc::parse_error, where + ": duplicate context");
      spec.context = ModelContext{parse_ob(a, where), parse_ob(b, where), parse_ob(c, where)};
      continue;
    }
    if (head != "dom" && head != "cod")
      fail(errc::parse_error, where + ": expected dom, cod or context");
    std::string role;
    if (!(ls >> role)) fail(errc::parse_error, where + ": missing role");
    std::string rest;
    std::getline(ls, rest);
    Factor factor{parse_role(role, head == "cod", where), parse_ob(rest, where)};
    (head == "dom" ? spec.dom_factors : spec.cod_factors).push_back(factor);
  }
  validate(spec);
  return spec;
}

std::string explainer_spec_to_string(const ExplainerSpec& spec) {
  std::string out;
  for (const auto& f : spec.dom_factors)
    out += "dom " + role_token(f.role) + " " + compact_ob(f.ob) + "\n";
  for (const auto& f : spec.cod_factors)
    out += "cod " + role_token(f.role) + " " + compact_ob(f.ob) + "\n";
  if (spec.context)
    out += "context model " + compact_ob(spec.context->input) + " " +
           compact_ob(spec.context->params) + " " + compact_ob(spec.context->output) + "\n";
  return out;
}

}  // namespace catxai::taxonomy

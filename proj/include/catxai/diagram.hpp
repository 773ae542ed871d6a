#pragma once

#include <initializer_list>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "catxai/errors.hpp"

namespace catxai::diagram {

// ---------------------------------------------------------------------------
// object expressions
// ---------------------------------------------------------------------------

struct ObExpr;
using ObPtr = std::shared_ptr<const ObExpr>;

struct ObUnit {};
struct ObGen {
  std::string name;
};
struct ObTensor {
  ObPtr left, right;
};

struct ObExpr {
  std::variant<ObUnit, ObGen, ObTensor> node;
};

ObPtr ob_unit();
ObPtr ob(const std::string& name);
ObPtr ob_tensor(ObPtr a, ObPtr b);
ObPtr ob_tensor(std::initializer_list<ObPtr> parts);  // right-nested

// normal form: unit factors dropped, generators listed left to right
using ObList = std::vector<std::string>;

ObList flatten(const ObPtr& e);
bool ob_equal(const ObPtr& a, const ObPtr& b);  // equality of normal forms
std::string ob_to_string(const ObPtr& e);       // term-language syntax: I, X, X * Y
std::string ob_to_string(const ObList& atoms);
ObPtr ob_of_list(const ObList& atoms);  // right-nested tensor of generators

// ---------------------------------------------------------------------------
// morphism terms
// ---------------------------------------------------------------------------

struct MorTerm;
using TermPtr = std::shared_ptr<const MorTerm>;

struct GenMor {
  std::string name;
  ObPtr dom, cod;
};
struct IdMor {
  ObPtr ob;
};
struct ComposeMor {
  TermPtr first, second;
};
struct TensorMor {
  TermPtr left, right;
};
struct SymMor {
  ObPtr a, b;
};
struct CopyMor {
  ObPtr ob;
};
struct DiscardMor {
  ObPtr ob;
};
struct FeedbackMor {
  ObPtr state;
  TermPtr inner;
};

struct MorTerm {
  std::variant<GenMor, IdMor, ComposeMor, TensorMor, SymMor, CopyMor, DiscardMor, FeedbackMor>
      node;
};

TermPtr gen(const std::string& name, ObPtr dom, ObPtr cod);
TermPtr id(ObPtr ob);
TermPtr compose(TermPtr f, TermPtr g);
TermPtr compose(std::initializer_list<TermPtr> fs);  // right-nested chain
TermPtr tensor(TermPtr f, TermPtr g);
TermPtr tensor(std::initializer_list<TermPtr> fs);  // right-nested chain
TermPtr sym(ObPtr a, ObPtr b);
TermPtr copy(ObPtr ob);
TermPtr discard(ObPtr ob);
TermPtr feedback(ObPtr state, TermPtr inner);

bool term_equal(const TermPtr& a, const TermPtr& b);  // structural, object exprs by normal form
std::string term_to_string(const TermPtr& t);         // term-language syntax, reparses equal
bool has_feedback(const TermPtr& t);

// ---------------------------------------------------------------------------
// presentations
// ---------------------------------------------------------------------------

struct MorSig {
  ObPtr dom, cod;
};

struct Presentation {
  std::vector<std::string> ob_gens;  // declaration order
  std::map<std::string, MorSig> mor_gens;

  bool has_ob(const std::string& name) const;
  bool has_mor(const std::string& name) const;
  void add_ob(const std::string& name);
  void add_mor(const std::string& name, ObPtr dom, ObPtr cod);
  void validate_ob_expr(const ObPtr& e) const;  // every atom declared
};

// ---------------------------------------------------------------------------
// typechecking and normalization
// ---------------------------------------------------------------------------

struct MorType {
  ObList dom, cod;
};

// throws error{unknown_generator | generator_mismatch | composition_type_mismatch |
//              feedback_shape_error}
MorType typecheck(const TermPtr& t, const Presentation& pres);

// drops identities in compositions and unit-typed identity tensor factors,
// reassociates both operators to the right; idempotent, semantics-preserving
TermPtr normalize(const TermPtr& t);

}  // namespace catxai::diagram

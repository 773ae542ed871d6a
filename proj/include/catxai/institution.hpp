#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "catxai/errors.hpp"

namespace catxai::institution {

// ---------------------------------------------------------------------------
// propositional signatures, sentences, valuations
// ---------------------------------------------------------------------------

struct PropSignature {
  std::vector<std::string> symbols;  // ordered, distinct
  bool has(const std::string& s) const;
  bool operator==(const PropSignature&) const = default;
};

struct Sentence;
using SentencePtr = std::shared_ptr<const Sentence>;

struct VarSen {
  std::string name;
};
struct TopSen {};
struct NotSen {
  SentencePtr inner;
};
struct AndSen {
  SentencePtr left, right;
};
struct OrSen {
  SentencePtr left, right;
};
struct ImpliesSen {
  SentencePtr left, right;
};

struct Sentence {
  std::variant<VarSen, TopSen, NotSen, AndSen, OrSen, ImpliesSen> node;
};

SentencePtr var(const std::string& name);
SentencePtr top();
SentencePtr lnot(SentencePtr s);
SentencePtr land(SentencePtr a, SentencePtr b);
SentencePtr lor(SentencePtr a, SentencePtr b);
SentencePtr implies(SentencePtr a, SentencePtr b);

bool sentence_equal(const SentencePtr& a, const SentencePtr& b);
int sentence_depth(const SentencePtr& s);  // atoms have depth 1

// `~ & | -> T`, precedence ~ > & > | > ->, implication right-associative;
// print(parse(x)) and parse(print(e)) both round-trip
std::string sentence_to_string(const SentencePtr& s);
SentencePtr parse_sentence(const std::string& text);

// every Var must name a signature symbol
void check_wellformed(const SentencePtr& s, const PropSignature& sig);

struct SignatureMorphism {
  PropSignature source, target;
  std::map<std::string, std::string> map;
  void validate() const;  // total on source, lands in target
};

SignatureMorphism identity_morphism(const PropSignature& sig);
// first, then second (diagrammatic order)
SignatureMorphism compose_morphisms(const SignatureMorphism& first,
                                    const SignatureMorphism& second);

SentencePtr sen_translate(const SignatureMorphism& rho, const SentencePtr& e);

struct Valuation {
  PropSignature sig;
  std::vector<char> bits;  // aligned with sig.symbols
  bool value(const std::string& symbol) const;
};

Valuation mod_reduct(const SignatureMorphism& rho, const Valuation& target_model);
bool satisfies(const Valuation& m, const SentencePtr& e);

// both sides of the satisfaction condition agree for this instance
bool check_satisfaction_condition(const SignatureMorphism& rho, const SentencePtr& e,
                                  const Valuation& target_model);

// ---------------------------------------------------------------------------
// exhaustive enumeration, small signatures only
// ---------------------------------------------------------------------------

std::vector<SentencePtr> enumerate_sentences(const PropSignature& sig, int max_depth);
std::vector<Valuation> enumerate_valuations(const PropSignature& sig);
std::vector<SignatureMorphism> enumerate_morphisms(const PropSignature& source,
                                                   const PropSignature& target);

struct SweepStats {
  unsigned long long checked = 0;
  unsigned long long failures = 0;
};

// every source/target signature up to max_symbols symbols, every morphism
// between them, every target model, every source sentence up to max_depth;
// threads: 0 = default parallel, 1 = serial reference
SweepStats satisfaction_sweep(int max_symbols, int max_depth, int threads = 0);

// satisfaction condition for one given morphism: all sentences over the
// source up to max_depth against all target models
SweepStats satisfaction_check(const SignatureMorphism& rho, int max_depth, int threads = 0);

// ---------------------------------------------------------------------------
// the saliency institution: positive conjunctions of "pixel is relevant"
// ---------------------------------------------------------------------------

struct SaliencySignature {
  std::vector<std::string> pixels;
  bool operator==(const SaliencySignature&) const = default;
};

struct SaliencySentence {
  SaliencySignature sig;
  std::vector<std::string> pixels;  // the conjunction's atoms
};

struct SaliencyModel {
  SaliencySignature sig;
  std::vector<std::string> pixels;  // the relevant set
};

// true iff every pixel the sentence asserts is in the model's relevant set
bool saliency_satisfies(const SaliencyModel& m, const SaliencySentence& e);

// ---------------------------------------------------------------------------
// explanation payloads
// ---------------------------------------------------------------------------

struct UnitPayload {};  // the agent explains nothing

using ExplanationPayload =
    std::variant<UnitPayload, std::vector<SentencePtr>, Valuation, SaliencyModel>;

enum class ExplanationKind { syntactic, semantic };

// sentences are syntactic, models are semantic; a unit payload carries no
// explanation to classify and is rejected
ExplanationKind classify_explanation(const ExplanationPayload& payload);

// ---------------------------------------------------------------------------
// file formats: signatures are one symbol per line, morphisms are src=dst
// lines (the source signature is the keys in file order, targets must be
// symbols of the given target signature)
// ---------------------------------------------------------------------------

PropSignature read_signature(std::istream& in);
SignatureMorphism read_morphism(std::istream& in, const PropSignature& target);

}  // namespace catxai::institution

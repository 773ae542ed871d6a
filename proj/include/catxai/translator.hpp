#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "catxai/diagram.hpp"
#include "catxai/institution.hpp"
#include "catxai/stream.hpp"

namespace catxai::translator {

// ---------------------------------------------------------------------------
// interpretations: presentation generators to stream carriers and morphisms
// ---------------------------------------------------------------------------

struct Interpretation {
  std::map<std::string, stream::Carrier> ob_map;
  std::map<std::string, stream::StreamMor> mor_map;
  // initial state per feedback occurrence, keyed by the printed flat state
  // object (the loop in the agent terms uses exactly "P")
  std::map<std::string, stream::Value> feedback_init;

  stream::Carrier carrier_of(const diagram::ObList& obs) const;
};

// structure-preserving walk: generators through mor_map, everything else to
// its stream counterpart
stream::StreamMor interpret(const diagram::TermPtr& term, const Interpretation& it);

// ---------------------------------------------------------------------------
// agent translators
// ---------------------------------------------------------------------------

// An assignment for the fixed agent presentation. The Y carrier bundles the
// prediction with a verbatim copy of the input: the optimizer sits behind the
// loop's (label, prediction, parameters) wires only, and a cross-entropy
// gradient needs the features, so the prediction wire carries them along.
struct Translator {
  Interpretation interp;

  const stream::Carrier& ob(const std::string& name) const;
  const stream::Value& p_init() const;
  std::size_t input_dim() const;            // flattened element count of X
  bool explains_nothing() const;            // E interpreted as the unit carrier
};

// validates the generator signatures against the carrier assignment
Translator make_translator(stream::Carrier x, stream::Carrier y, stream::Carrier p,
                           stream::Carrier e, stream::StreamMor explainer,
                           stream::StreamMor optimizer, stream::Value p_init);

inline constexpr double learning_rate = 0.5;

// logistic model on 2 features, plain gradient descent on binary
// cross-entropy, explains nothing
Translator perceptron_translator();

// like the perceptron, but the model family changes with the step index:
// degree-1 features for the first 50 steps, degree-2 monomials afterwards
Translator step_varying_translator();
inline constexpr std::size_t phase_length = 50;

// emits a weight-threshold rule sentence over the given symbols; the last
// symbol names the output, the rest name the input features in order
Translator syntactic_xla_translator(const institution::PropSignature& sig);

// emits the set of input coordinates whose finite-difference sensitivity is
// above the mean, as a saliency model over the given pixels
Translator semantic_xla_translator(const institution::SaliencySignature& sig);

// perceptron carriers with the optimizer replaced by discard*discard*id:
// the parameters never move
Translator identity_optimizer_translator();

// the rule emitted by the syntactic explainer for a given weight vector
// (weights only, no bias): feature i appears positively above the threshold
// max|w|/2, negated below its negation, and an empty conjunction is T
institution::SentencePtr threshold_rule(const std::vector<double>& weights,
                                        const std::vector<std::string>& features,
                                        const std::string& output);

// ---------------------------------------------------------------------------
// datasets
// ---------------------------------------------------------------------------

struct Sample {
  double label = 0;
  std::vector<double> input;
};

// lines of the form `label <float> input <float-list>`
std::vector<Sample> read_dataset(std::istream& in);
std::string dataset_to_string(const std::vector<Sample>& data);

// 40 points in two linearly separable 2-D clusters
std::vector<Sample> make_separable_dataset(std::uint64_t seed);

// ---------------------------------------------------------------------------
// training harness
// ---------------------------------------------------------------------------

struct TraceStep {
  std::vector<double> input;
  double label = 0;
  double prediction = 0;
  double loss = 0;  // binary cross-entropy of this step's prediction
  std::vector<double> parameters;  // circulating parameters consumed this step
  institution::ExplanationPayload explanation;
};

struct TrainingTrace {
  std::vector<TraceStep> steps;
  std::vector<double> final_parameters;
  std::vector<stream::Value> inputs;   // raw stream view, oldest-first
  std::vector<stream::Value> outputs;
};

// drives the observable agent through an evaluation session, cycling the
// dataset when it is shorter than the requested run
TrainingTrace run_training(const Translator& t, const std::vector<Sample>& data,
                           std::size_t steps);

// fraction of samples whose thresholded prediction under the given
// parameters matches the label
double classification_accuracy(const Translator& t, const std::vector<Sample>& data,
                               const std::vector<double>& params);

double binary_cross_entropy(double prediction, double label);

std::string explanation_to_string(const institution::ExplanationPayload& payload);
// stream trace lines interleaved with loss= and explanation= lines
std::string trace_to_string(const TrainingTrace& tr);

}  // namespace catxai::translator

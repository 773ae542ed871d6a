#include "catxai/translator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <random>
#include <sstream>
#include <utility>

#include "catxai/util.hpp"
#include "catxai/xlearn.hpp"

namespace catxai::translator {

using diagram::ObList;
using diagram::TermPtr;
using stream::Carrier;
using stream::StreamMor;
using stream::StreamOb;
using stream::Value;

// ---------------------------------------------------------------------------
// generic interpretation
// ---------------------------------------------------------------------------

Carrier Interpretation::carrier_of(const ObList& obs) const {
  Carrier out;
  for (const auto& name : obs) {
    auto found = ob_map.find(name);
    if (found == ob_map.end())
      fail(errc::missing_assignment, "no carrier assigned to object " + name);
    for (const auto& atom : found->second.atoms) out.atoms.push_back(atom);
  }
  return out;
}

namespace {

StreamOb stream_ob(const Interpretation& it, const diagram::ObPtr& e) {
  return StreamOb::constant(it.carrier_of(diagram::flatten(e)));
}

}  // namespace

StreamMor interpret(const TermPtr& term, const Interpretation& it) {
  return std::visit(
      overloaded{
          [&](const diagram::GenMor& g) -> StreamMor {
            auto found = it.mor_map.find(g.name);
            if (found == it.mor_map.end())
              fail(errc::missing_assignment, "no stream morphism assigned to generator " + g.name);
            const StreamMor& m = found->second;
            if (!m.dom().is_constant() || !m.cod().is_constant() ||
                m.dom().base() != it.carrier_of(diagram::flatten(g.dom)) ||
                m.cod().base() != it.carrier_of(diagram::flatten(g.cod)))
              fail(errc::carrier_mismatch,
                   "assigned stream morphism for " + g.name + " has the wrong type");
            return m;
          },
          [&](const diagram::IdMor& n) -> StreamMor {
            return stream::identity_stream(stream_ob(it, n.ob));
          },
          [&](const diagram::ComposeMor& n) -> StreamMor {
            return stream::compose_streams(interpret(n.first, it), interpret(n.second, it));
          },
          [&](const diagram::TensorMor& n) -> StreamMor {
            return stream::tensor_streams(interpret(n.left, it), interpret(n.right, it));
          },
          [&](const diagram::SymMor& n) -> StreamMor {
            return stream::symmetry_stream(stream_ob(it, n.a), stream_ob(it, n.b));
          },
          [&](const diagram::CopyMor& n) -> StreamMor {
            return stream::copy_stream(stream_ob(it, n.ob));
          },
          [&](const diagram::DiscardMor& n) -> StreamMor {
            return stream::discard_stream(stream_ob(it, n.ob));
          },
          [&](const diagram::FeedbackMor& n) -> StreamMor {
            ObList state = diagram::flatten(n.state);
            std::string key = diagram::ob_to_string(state);
            Carrier carrier = it.carrier_of(state);
            auto found = it.feedback_init.find(key);
            if (found == it.feedback_init.end())
              fail(errc::missing_assignment, "no initial state assigned to feedback over " + key);
            if (!stream::conforms(carrier, found->second))
              fail(errc::carrier_mismatch, "initial state for feedback over " + key +
                                               " does not fit its carrier");
            return stream::feedback_stream(interpret(n.inner, it), std::move(carrier),
                                           found->second);
          },
      },
      term->node);
}

// ---------------------------------------------------------------------------
// agent translators
// ---------------------------------------------------------------------------

const stream::Carrier& Translator::ob(const std::string& name) const {
  auto found = interp.ob_map.find(name);
  if (found == interp.ob_map.end())
    fail(errc::missing_assignment, "no carrier assigned to object " + name);
  return found->second;
}

const stream::Value& Translator::p_init() const { return interp.feedback_init.at("P"); }

std::size_t Translator::input_dim() const {
  std::size_t total = 0;
  for (const auto& atom : ob("X").atoms) {
    const auto* vec = std::get_if<stream::VecCarrier>(&atom);
    if (!vec) fail(errc::dimension_mismatch, "input carrier is not a real vector");
    total += vec->dim;
  }
  return total;
}

bool Translator::explains_nothing() const { return ob("E").atoms.empty(); }

Translator make_translator(Carrier x, Carrier y, Carrier p, Carrier e, StreamMor explainer,
                           StreamMor optimizer, Value p_init) {
  auto expect = [](const StreamMor& m, const Carrier& dom, const Carrier& cod,
                   const char* what) {
    if (!m.dom().is_constant() || !m.cod().is_constant())
      fail(errc::carrier_mismatch, std::string(what) + " needs constant stream types");
    if (m.dom().base() != dom)
      fail(errc::carrier_mismatch, std::string(what) + " domain does not match the carriers");
    if (m.cod().base() != cod)
      fail(errc::carrier_mismatch, std::string(what) + " codomain does not match the carriers");
  };
  expect(explainer, stream::product(x, p), stream::product(y, e), "explainer");
  expect(optimizer, stream::product(y, stream::product(y, p)), p, "optimizer");
  if (!stream::conforms(p, p_init))
    fail(errc::carrier_mismatch, "initial parameters do not fit the parameter carrier");

  Translator t;
  t.interp.ob_map = {{"X", std::move(x)}, {"Y", std::move(y)}, {"P", p}, {"E", std::move(e)}};
  t.interp.mor_map = {{xlearn::explainer_name, std::move(explainer)},
                      {xlearn::optimizer_name, std::move(optimizer)}};
  t.interp.feedback_init = {{"P", std::move(p_init)}};
  return t;
}

namespace {

const std::vector<double>& vec_part(const Value& v, std::size_t i) {
  const auto* vec = std::get_if<stream::VecValue>(&v.parts.at(i));
  if (!vec) fail(errc::carrier_mismatch, "expected a real-vector component");
  return vec->elems;
}

// weights first, bias last; the fold order is part of the contract so
// reference reimplementations can match parameter traces exactly
double affine(const std::vector<double>& p, const std::vector<double>& feats) {
  double z = 0.0;
  for (std::size_t i = 0; i < feats.size(); ++i) z += p[i] * feats[i];
  z += p[feats.size()];
  return z;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::vector<double> descend(const std::vector<double>& p, const std::vector<double>& feats,
                            double grad) {
  std::vector<double> next(p.size());
  for (std::size_t i = 0; i < feats.size(); ++i)
    next[i] = p[i] - learning_rate * grad * feats[i];
  next[feats.size()] = p[feats.size()] - learning_rate * grad;
  return next;
}

// the optimizer's view: (label bundle, prediction bundle, parameters)
struct OptimizerView {
  double label;
  double prediction;
  const std::vector<double>& input;  // passthrough of the prediction bundle
  const std::vector<double>& params;
};

OptimizerView optimizer_view(const Value& v) {
  return {vec_part(v, 0).at(0), vec_part(v, 2).at(0), vec_part(v, 3), vec_part(v, 4)};
}

// gradient step for a plain logistic model on nf features
StreamMor logistic_optimizer(std::size_t nf) {
  Carrier y = stream::product(stream::vec_carrier(1), stream::vec_carrier(nf));
  Carrier p = stream::vec_carrier(nf + 1);
  return stream::primitive(
      "grad.logistic" + std::to_string(nf),
      StreamOb::constant(stream::product(y, stream::product(y, p))), StreamOb::constant(p),
      [](std::size_t, stream::History h) {
        OptimizerView v = optimizer_view(h[0]);
        return stream::vec_value(descend(v.params, v.input, v.prediction - v.label));
      });
}

std::string brace_join(const std::vector<std::string>& names) {
  std::string out = "{";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ' ';
    out += names[i];
  }
  return out + "}";
}

}  // namespace

Translator perceptron_translator() {
  Carrier x = stream::vec_carrier(2);
  Carrier y = stream::product(stream::vec_carrier(1), stream::vec_carrier(2));
  Carrier p = stream::vec_carrier(3);
  Carrier e = stream::unit_carrier();
  StreamMor eta = stream::primitive(
      "eta.logistic2", StreamOb::constant(stream::product(x, p)), StreamOb::constant(y),
      [](std::size_t, stream::History h) {
        const auto& xs = vec_part(h[0], 0);
        const auto& ps = vec_part(h[0], 1);
        double yhat = sigmoid(affine(ps, xs));
        return stream::pair(stream::vec_value({yhat}), stream::vec_value(xs));
      });
  return make_translator(x, y, p, e, std::move(eta), logistic_optimizer(2),
                         stream::vec_value({0.0, 0.0, 0.0}));
}

namespace {

// degree-1 features early, degree-2 monomials once the phase flips
std::vector<double> phase_features(std::size_t n, const std::vector<double>& x) {
  std::vector<double> feats(5, 0.0);
  feats[0] = x[0];
  feats[1] = x[1];
  if (n >= phase_length) {
    feats[2] = x[0] * x[0];
    feats[3] = x[0] * x[1];
    feats[4] = x[1] * x[1];
  }
  return feats;
}

}  // namespace

Translator step_varying_translator() {
  Carrier x = stream::vec_carrier(2);
  Carrier y = stream::product(stream::vec_carrier(1), stream::vec_carrier(2));
  Carrier p = stream::vec_carrier(6);
  Carrier e = stream::unit_carrier();
  StreamMor eta = stream::primitive(
      "eta.twophase", StreamOb::constant(stream::product(x, p)), StreamOb::constant(y),
      [](std::size_t n, stream::History h) {
        const auto& xs = vec_part(h[0], 0);
        const auto& ps = vec_part(h[0], 1);
        double yhat = sigmoid(affine(ps, phase_features(n, xs)));
        return stream::pair(stream::vec_value({yhat}), stream::vec_value(xs));
      });
  StreamMor opt = stream::primitive(
      "grad.twophase", StreamOb::constant(stream::product(y, stream::product(y, p))),
      StreamOb::constant(p), [](std::size_t n, stream::History h) {
        OptimizerView v = optimizer_view(h[0]);
        return stream::vec_value(
            descend(v.params, phase_features(n, v.input), v.prediction - v.label));
      });
  return make_translator(x, y, p, e, std::move(eta), std::move(opt),
                         stream::vec_value(std::vector<double>(6, 0.0)));
}

institution::SentencePtr threshold_rule(const std::vector<double>& weights,
                                        const std::vector<std::string>& features,
                                        const std::string& output) {
  if (weights.size() != features.size())
    fail(errc::dimension_mismatch, "one weight per feature expected");
  double top = 0.0;
  for (double w : weights) top = std::max(top, std::abs(w));
  double theta = top / 2.0;
  institution::SentencePtr conj;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    institution::SentencePtr lit;
    if (weights[i] > theta)
      lit = institution::var(features[i]);
    else if (weights[i] < -theta)
      lit = institution::lnot(institution::var(features[i]));
    else
      continue;
    conj = conj ? institution::land(std::move(conj), std::move(lit)) : std::move(lit);
  }
  if (!conj) conj = institution::top();
  return institution::implies(std::move(conj), institution::var(output));
}

Translator syntactic_xla_translator(const institution::PropSignature& sig) {
  if (sig.symbols.size() < 2)
    fail(errc::symbol_mismatch, "need at least one feature symbol and an output symbol");
  std::vector<std::string> features(sig.symbols.begin(), sig.symbols.end() - 1);
  std::string output = sig.symbols.back();
  std::size_t nf = features.size();

  Carrier x = stream::vec_carrier(nf);
  Carrier y = stream::product(stream::vec_carrier(1), stream::vec_carrier(nf));
  Carrier p = stream::vec_carrier(nf + 1);
  Carrier e = stream::open_carrier("sentence");
  StreamMor eta = stream::primitive(
      "eta.rule" + std::to_string(nf), StreamOb::constant(stream::product(x, p)),
      StreamOb::constant(stream::product(y, e)),
      [features, output, nf](std::size_t, stream::History h) {
        const auto& xs = vec_part(h[0], 0);
        const auto& ps = vec_part(h[0], 1);
        double yhat = sigmoid(affine(ps, xs));
        std::vector<double> weights(ps.begin(), ps.begin() + std::ptrdiff_t(nf));
        institution::SentencePtr rule = threshold_rule(weights, features, output);
        std::string text = institution::sentence_to_string(rule);
        return stream::pair(
            stream::pair(stream::vec_value({yhat}), stream::vec_value(xs)),
            stream::open_value("sentence", std::move(text), std::move(rule)));
      });
  return make_translator(x, y, p, e, std::move(eta), logistic_optimizer(nf),
                         stream::vec_value(std::vector<double>(nf + 1, 0.0)));
}

Translator semantic_xla_translator(const institution::SaliencySignature& sig) {
  std::size_t n = sig.pixels.size();
  if (n == 0) fail(errc::dimension_mismatch, "saliency needs at least one pixel");

  Carrier x = stream::vec_carrier(n);
  Carrier y = stream::product(stream::vec_carrier(1), stream::vec_carrier(n));
  Carrier p = stream::vec_carrier(n + 1);
  Carrier e = stream::open_carrier("saliency");
  StreamMor eta = stream::primitive(
      "eta.saliency" + std::to_string(n), StreamOb::constant(stream::product(x, p)),
      StreamOb::constant(stream::product(y, e)), [sig, n](std::size_t, stream::History h) {
        const auto& xs = vec_part(h[0], 0);
        const auto& ps = vec_part(h[0], 1);
        double yhat = sigmoid(affine(ps, xs));
        // central differences; strictly-above-mean magnitudes are relevant
        // (compared in the multiplied-out form, which keeps ties exact)
        const double step = 1e-4;
        std::vector<double> sens(n);
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          std::vector<double> hi = xs, lo = xs;
          hi[j] += step;
          lo[j] -= step;
          sens[j] = std::abs(sigmoid(affine(ps, hi)) - sigmoid(affine(ps, lo))) / (2.0 * step);
          total += sens[j];
        }
        institution::SaliencyModel model{sig, {}};
        for (std::size_t j = 0; j < n; ++j)
          if (sens[j] * double(n) > total) model.pixels.push_back(sig.pixels[j]);
        std::string text = brace_join(model.pixels);
        return stream::pair(
            stream::pair(stream::vec_value({yhat}), stream::vec_value(xs)),
            stream::open_value("saliency", std::move(text), std::move(model)));
      });
  return make_translator(x, y, p, e, std::move(eta), logistic_optimizer(n),
                         stream::vec_value(std::vector<double>(n + 1, 0.0)));
}

Translator identity_optimizer_translator() {
  Translator base = perceptron_translator();
  StreamOb oy = StreamOb::constant(base.ob("Y"));
  StreamOb op = StreamOb::constant(base.ob("P"));
  StreamMor opt = stream::tensor_streams(
      stream::discard_stream(oy),
      stream::tensor_streams(stream::discard_stream(oy), stream::identity_stream(op)));
  return make_translator(base.ob("X"), base.ob("Y"), base.ob("P"), base.ob("E"),
                         base.interp.mor_map.at(xlearn::explainer_name), std::move(opt),
                         stream::vec_value({0.25, -0.5, 0.1}));
}

// ---------------------------------------------------------------------------
// datasets
// ---------------------------------------------------------------------------

std::vector<Sample> read_dataset(std::istream& in) {
  std::vector<Sample> out;
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = "dataset line " + std::to_string(lineno);
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word != "label") fail(errc::parse_error, where + ": expected `label`");
    auto parse_num = [&](const std::string& tok) {
      double v = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size())
        fail(errc::parse_error, where + ": bad number `" + tok + "`");
      return v;
    };
    std::vector<double> labels;
    std::vector<double> feats;
    bool saw_input = false;
    while (ls >> word) {
      if (word == "input") {
        if (saw_input) fail(errc::parse_error, where + ": duplicate `input`");
        saw_input = true;
        continue;
      }
      (saw_input ? feats : labels).push_back(parse_num(word));
    }
    if (!saw_input) fail(errc::parse_error, where + ": missing `input`");
    if (labels.size() != 1) fail(errc::parse_error, where + ": expected exactly one label value");
    if (feats.empty()) fail(errc::parse_error, where + ": empty feature list");
    if (dim != 0 && feats.size() != dim)
      fail(errc::dimension_mismatch,
           where + ": expected " + std::to_string(dim) + " features, got " +
               std::to_string(feats.size()));
    dim = feats.size();
    out.push_back({labels[0], std::move(feats)});
  }
  return out;
}

std::string dataset_to_string(const std::vector<Sample>& data) {
  std::string out;
  for (const Sample& s : data) {
    out += "label " + format_double(s.label) + " input";
    for (double v : s.input) out += " " + format_double(v);
    out += "\n";
  }
  return out;
}

std::vector<Sample> make_separable_dataset(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.75, 0.75);
  std::vector<Sample> out;
  out.reserve(40);
  for (int i = 0; i < 40; ++i) {
    bool positive = (i % 2) == 1;
    double cx = positive ? 1.5 : -1.5;
    double cy = positive ? 1.2 : -1.2;
    out.push_back({positive ? 1.0 : 0.0, {cx + jitter(rng), cy + jitter(rng)}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// training harness
// ---------------------------------------------------------------------------

namespace {

std::vector<double> loop_params(const std::vector<Value>& states) {
  if (states.size() != 1 || states[0].parts.size() != 1)
    fail(errc::state_shape_error, "expected exactly one parameter loop");
  const auto* vec = std::get_if<stream::VecValue>(&states[0].parts[0]);
  if (!vec) fail(errc::state_shape_error, "circulating parameters are not a real vector");
  return vec->elems;
}

institution::ExplanationPayload extract_explanation(const Value& out, std::size_t e_atoms) {
  if (e_atoms == 0) return institution::UnitPayload{};
  if (e_atoms != 1) fail(errc::unrecognized_payload, "expected a single explanation atom");
  const auto* open = std::get_if<std::shared_ptr<const stream::OpenValue>>(&out.parts.back());
  if (!open) fail(errc::unrecognized_payload, "explanation atom is not an open value");
  if ((*open)->kind == "sentence") {
    if (const auto* sen = std::any_cast<institution::SentencePtr>(&(*open)->payload))
      return std::vector<institution::SentencePtr>{*sen};
  } else if ((*open)->kind == "saliency") {
    if (const auto* model = std::any_cast<institution::SaliencyModel>(&(*open)->payload))
      return *model;
  }
  fail(errc::unrecognized_payload, "unknown explanation kind `" + (*open)->kind + "`");
}

}  // namespace

TrainingTrace run_training(const Translator& t, const std::vector<Sample>& data,
                           std::size_t steps) {
  if (data.empty()) fail(errc::dimension_mismatch, "training needs a nonempty dataset");
  const std::size_t dim = t.input_dim();
  const std::size_t e_atoms = t.ob("E").atoms.size();
  stream::EvalSession session(interpret(xlearn::observable_agent(), t.interp));

  TrainingTrace tr;
  tr.steps.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const Sample& s = data[k % data.size()];
    if (s.input.size() != dim)
      fail(errc::dimension_mismatch, "sample has " + std::to_string(s.input.size()) +
                                         " features, expected " + std::to_string(dim));
    TraceStep step;
    step.input = s.input;
    step.label = s.label;
    step.parameters = loop_params(session.feedback_states());
    Value in = stream::pair(
        stream::pair(stream::vec_value({s.label}), stream::vec_value(s.input)),
        stream::vec_value(s.input));
    Value out = session.feed(in);
    step.prediction = vec_part(out, 0).at(0);
    step.loss = binary_cross_entropy(step.prediction, s.label);
    step.explanation = extract_explanation(out, e_atoms);
    tr.steps.push_back(std::move(step));
  }
  tr.final_parameters = loop_params(session.feedback_states());
  tr.inputs = session.inputs();
  tr.outputs = session.outputs();
  return tr;
}

double classification_accuracy(const Translator& t, const std::vector<Sample>& data,
                               const std::vector<double>& params) {
  if (data.empty()) return 0.0;
  const StreamMor& eta = t.interp.mor_map.at(xlearn::explainer_name);
  std::size_t hits = 0;
  for (const Sample& s : data) {
    Value in = stream::pair(stream::vec_value(s.input), stream::vec_value(params));
    Value out = eta.step(0, stream::History(&in, 1));
    bool positive = vec_part(out, 0).at(0) >= 0.5;
    if (positive == (s.label >= 0.5)) ++hits;
  }
  return double(hits) / double(data.size());
}

double binary_cross_entropy(double prediction, double label) {
  const double eps = 1e-12;
  double p = std::clamp(prediction, eps, 1.0 - eps);
  return -(label * std::log(p) + (1.0 - label) * std::log(1.0 - p));
}

std::string explanation_to_string(const institution::ExplanationPayload& payload) {
  return std::visit(
      overloaded{
          [](const institution::UnitPayload&) -> std::string { return "*"; },
          [](const std::vector<institution::SentencePtr>& sens) -> std::string {
            std::string out;
            for (std::size_t i = 0; i < sens.size(); ++i) {
              if (i) out += "; ";
              out += institution::sentence_to_string(sens[i]);
            }
            return out;
          },
          [](const institution::Valuation& m) -> std::string {
            std::string out = "{";
            for (std::size_t i = 0; i < m.sig.symbols.size(); ++i) {
              if (i) out += ' ';
              out += m.sig.symbols[i];
              out += m.bits[i] ? "=1" : "=0";
            }
            return out + "}";
          },
          [](const institution::SaliencyModel& m) -> std::string { return brace_join(m.pixels); },
      },
      payload);
}

std::string trace_to_string(const TrainingTrace& tr) {
  std::string out;
  for (std::size_t k = 0; k < tr.steps.size(); ++k) {
    out += "step " + std::to_string(k) + ": in=" + stream::value_to_string(tr.inputs[k]) +
           " out=" + stream::value_to_string(tr.outputs[k]) + "\n";
    out += "loss=" + format_double(tr.steps[k].loss) + "\n";
    out += "explanation=" + explanation_to_string(tr.steps[k].explanation) + "\n";
  }
  return out;
}

}  // namespace catxai::translator

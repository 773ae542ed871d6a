#pragma once

#include "catxai/diagram.hpp"

namespace catxai::xlearn {

// the fixed presentation every learning-agent term lives in: objects X (input),
// Y (output), P (parameters), E (explanation); an explainer X*P -> Y*E and an
// optimizer Y*Y*P -> P taking (label, prediction, parameters)
const diagram::Presentation& presentation();

inline constexpr const char* explainer_name = "explainer";
inline constexpr const char* optimizer_name = "optimizer";

// the closed training loop: labels and inputs go in, parameters circulate on
// the feedback wire, predictions and explanations are consumed internally.
// dom Y*X, cod I. Already in normal form.
diagram::TermPtr abstract_agent();

// same loop with the prediction and explanation copied out before the
// optimizer, so a run produces a visible trace. dom Y*X, cod Y*E.
diagram::TermPtr observable_agent();

}  // namespace catxai::xlearn

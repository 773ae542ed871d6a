#include "catxai/xlearn.hpp"

namespace catxai::xlearn {

using namespace diagram;

const Presentation& presentation() {
  static const Presentation pres = [] {
    Presentation p;
    p.add_ob("X");
    p.add_ob("Y");
    p.add_ob("P");
    p.add_ob("E");
    p.add_mor(explainer_name, ob_tensor(ob("X"), ob("P")), ob_tensor(ob("Y"), ob("E")));
    p.add_mor(optimizer_name, ob_tensor({ob("Y"), ob("Y"), ob("P")}), ob("P"));
    return p;
  }();
  return pres;
}

namespace {

TermPtr explainer() {
  return gen(explainer_name, ob_tensor(ob("X"), ob("P")), ob_tensor(ob("Y"), ob("E")));
}

TermPtr optimizer() {
  return gen(optimizer_name, ob_tensor({ob("Y"), ob("Y"), ob("P")}), ob("P"));
}

}  // namespace

TermPtr abstract_agent() {
  auto Y = ob("Y"), X = ob("X"), P = ob("P"), E = ob("E");
  // on the wire: [label, input, params]
  auto fan_params = tensor(id(ob_tensor(Y, X)), copy(P));           // -> [y, x, p, p]
  auto predict = tensor(id(Y), tensor(explainer(), id(P)));         // -> [y, yhat, e, p]
  auto drop_expl = tensor(id(ob_tensor(Y, Y)), tensor(discard(E), id(P)));  // -> [y, yhat, p]
  return feedback(P, compose(fan_params, compose(predict, compose(drop_expl, optimizer()))));
}

TermPtr observable_agent() {
  auto Y = ob("Y"), X = ob("X"), P = ob("P"), E = ob("E");
  auto fan_params = tensor(id(ob_tensor(Y, X)), copy(P));    // -> [y, x, p, p]
  auto predict = tensor(id(Y), tensor(explainer(), id(P)));  // -> [y, yhat, e, p]
  // duplicate prediction and explanation: one pair continues the loop, one
  // pair leaves through the output boundary
  auto fan_out = tensor(id(Y), tensor(copy(Y), tensor(copy(E), id(P))));
  // -> [y, yhat, yhat', e, e', p]; the loop branch of e keeps its discard
  auto drop_expl = tensor(id(ob_tensor({Y, Y, Y})), tensor(discard(E), id(ob_tensor(E, P))));
  // -> [y, yhat, yhat', e', p]; route the outgoing pair in front
  auto to_front = tensor(sym(ob_tensor(Y, Y), ob_tensor(Y, E)), id(P));
  // -> [yhat', e', y, yhat, p]
  auto learn = tensor(id(ob_tensor(Y, E)), optimizer());  // -> [yhat', e', p+1]
  return feedback(
      P, compose(fan_params,
                 compose(predict, compose(fan_out, compose(drop_expl,
                                                           compose(to_front, learn))))));
}

}  // namespace catxai::xlearn

#include "catxai/stream.hpp"

#include <sstream>

#include "catxai/util.hpp"

namespace catxai::stream {

// ---------------------------------------------------------------------------
// carriers
// ---------------------------------------------------------------------------

Carrier unit_carrier() { return {}; }

Carrier enum_carrier(std::vector<std::string> labels) {
  if (labels.empty()) fail(errc::carrier_mismatch, "enum carrier needs at least one label");
  return Carrier{{EnumCarrier{std::move(labels)}}};
}

Carrier enum_carrier(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return enum_carrier(std::move(labels));
}

Carrier vec_carrier(std::size_t dim) { return Carrier{{VecCarrier{dim}}}; }

Carrier open_carrier(std::string kind) { return Carrier{{OpenCarrier{std::move(kind)}}}; }

Carrier product(const Carrier& a, const Carrier& b) {
  Carrier out = a;
  out.atoms.insert(out.atoms.end(), b.atoms.begin(), b.atoms.end());
  return out;
}

std::string carrier_to_string(const Carrier& c) {
  if (c.atoms.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < c.atoms.size(); ++i) {
    if (i) s += " x ";
    s += std::visit(
        overloaded{[](const EnumCarrier& e) { return "enum" + std::to_string(e.labels.size()); },
                   [](const VecCarrier& v) { return "R^" + std::to_string(v.dim); },
                   [](const OpenCarrier& o) { return "open<" + o.kind + ">"; }},
        c.atoms[i]);
  }
  return s;
}

bool has_open_atom(const Carrier& c) {
  for (const auto& a : c.atoms)
    if (std::holds_alternative<OpenCarrier>(a)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// values
// ---------------------------------------------------------------------------

static bool atom_equal(const AtomValue& a, const AtomValue& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      overloaded{[&](const EnumValue& x) { return x == std::get<EnumValue>(b); },
                 [&](const VecValue& x) { return x == std::get<VecValue>(b); },
                 [&](const std::shared_ptr<const OpenValue>& x) {
                   const auto& y = std::get<std::shared_ptr<const OpenValue>>(b);
                   return x->kind == y->kind && x->text == y->text;
                 }},
      a);
}

bool operator==(const Value& a, const Value& b) {
  if (a.parts.size() != b.parts.size()) return false;
  for (std::size_t i = 0; i < a.parts.size(); ++i)
    if (!atom_equal(a.parts[i], b.parts[i])) return false;
  return true;
}

Value unit_value() { return {}; }
Value enum_value(std::uint32_t index) { return Value{{EnumValue{index}}}; }
Value vec_value(std::vector<double> elems) { return Value{{VecValue{std::move(elems)}}}; }
Value open_value(std::string kind, std::string text, std::any payload) {
  return Value{{std::make_shared<const OpenValue>(
      OpenValue{std::move(kind), std::move(text), std::move(payload)})}};
}

Value pair(const Value& a, const Value& b) {
  Value out = a;
  out.parts.insert(out.parts.end(), b.parts.begin(), b.parts.end());
  return out;
}

Value slice(const Value& v, std::size_t begin, std::size_t n) {
  Value out;
  out.parts.assign(v.parts.begin() + begin, v.parts.begin() + begin + n);
  return out;
}

static std::string atom_to_string(const AtomValue& a) {
  return std::visit(
      overloaded{[](const EnumValue& e) { return std::to_string(e.index); },
                 [](const VecValue& v) {
                   std::string s = "[";
                   for (std::size_t i = 0; i < v.elems.size(); ++i) {
                     if (i) s += " ";
                     s += format_double(v.elems[i]);
                   }
                   return s + "]";
                 },
                 [](const std::shared_ptr<const OpenValue>& o) { return o->text; }},
      a);
}

std::string value_to_string(const Value& v) {
  if (v.parts.empty()) return "*";
  if (v.parts.size() == 1) return atom_to_string(v.parts[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < v.parts.size(); ++i) {
    if (i) s += ", ";
    s += atom_to_string(v.parts[i]);
  }
  return s + ")";
}

bool conforms(const Carrier& c, const Value& v) {
  if (c.atoms.size() != v.parts.size()) return false;
  for (std::size_t i = 0; i < c.atoms.size(); ++i) {
    bool ok = std::visit(
        overloaded{[&](const EnumCarrier& e) {
                     const auto* x = std::get_if<EnumValue>(&v.parts[i]);
                     return x && x->index < e.labels.size();
                   },
                   [&](const VecCarrier& d) {
                     const auto* x = std::get_if<VecValue>(&v.parts[i]);
                     return x && x->elems.size() == d.dim;
                   },
                   [&](const OpenCarrier& o) {
                     const auto* x = std::get_if<std::shared_ptr<const OpenValue>>(&v.parts[i]);
                     return x && (*x)->kind == o.kind;
                   }},
        c.atoms[i]);
    if (!ok) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// stream objects
// ---------------------------------------------------------------------------

StreamOb::StreamOb(Carrier c, std::function<Carrier(std::size_t)> fn, bool k)
    : base_(std::move(c)), at_(std::move(fn)), constant_(k) {}

StreamOb StreamOb::constant(Carrier c) { return StreamOb(std::move(c), nullptr, true); }

StreamOb StreamOb::varying(std::function<Carrier(std::size_t)> at) {
  return StreamOb(Carrier{}, std::move(at), false);
}

Carrier StreamOb::at(std::size_t n) const { return constant_ ? base_ : at_(n); }

const Carrier& StreamOb::base() const {
  if (!constant_) fail(errc::carrier_mismatch, "varying stream object has no single carrier");
  return base_;
}

static StreamOb product_ob(const StreamOb& a, const StreamOb& b) {
  if (a.is_constant() && b.is_constant()) return StreamOb::constant(product(a.base(), b.base()));
  return StreamOb::varying([a, b](std::size_t n) { return product(a.at(n), b.at(n)); });
}

// ---------------------------------------------------------------------------
// stream morphism nodes
// ---------------------------------------------------------------------------

namespace {
struct PrimitiveNode {
  std::string name;
  StepFn fn;
};
struct ComposeNode {};
struct TensorNode {};
struct FeedbackNode {
  Carrier state;
  Value init;
};
}  // namespace

struct StreamMor::Node {
  std::variant<PrimitiveNode, ComposeNode, TensorNode, FeedbackNode> data;
  std::vector<StreamMor> children;
  StreamOb dom, cod;
};

StreamMor::Kind StreamMor::kind() const {
  return std::visit(overloaded{[](const PrimitiveNode&) { return Kind::primitive; },
                               [](const ComposeNode&) { return Kind::composite; },
                               [](const TensorNode&) { return Kind::tensor; },
                               [](const FeedbackNode&) { return Kind::feedback; }},
                    node_->data);
}

const StreamOb& StreamMor::dom() const { return node_->dom; }
const StreamOb& StreamMor::cod() const { return node_->cod; }
const std::string& StreamMor::prim_name() const {
  return std::get<PrimitiveNode>(node_->data).name;
}
const StreamMor& StreamMor::first() const { return node_->children[0]; }
const StreamMor& StreamMor::second() const { return node_->children[1]; }
const StreamMor& StreamMor::inner() const { return node_->children[0]; }
const Carrier& StreamMor::state() const { return std::get<FeedbackNode>(node_->data).state; }
const Value& StreamMor::state_init() const { return std::get<FeedbackNode>(node_->data).init; }

StreamMor primitive(std::string name, StreamOb dom, StreamOb cod, StepFn fn) {
  auto n = std::make_shared<StreamMor::Node>();
  n->data = PrimitiveNode{std::move(name), std::move(fn)};
  n->dom = std::move(dom);
  n->cod = std::move(cod);
  return StreamMor(std::move(n));
}

StreamMor identity_stream(StreamOb ob) {
  return primitive("id", ob, ob, [](std::size_t, History h) { return h[0]; });
}

StreamMor compose_streams(StreamMor f, StreamMor g) {
  if (f.cod().is_constant() && g.dom().is_constant() && !(f.cod().base() == g.dom().base()))
    fail(errc::carrier_mismatch, "composition carrier mismatch: " +
                                     carrier_to_string(f.cod().base()) + " vs " +
                                     carrier_to_string(g.dom().base()));
  auto n = std::make_shared<StreamMor::Node>();
  n->data = ComposeNode{};
  n->dom = f.dom();
  n->cod = g.cod();
  n->children = {std::move(f), std::move(g)};
  return StreamMor(std::move(n));
}

StreamMor tensor_streams(StreamMor f, StreamMor g) {
  auto n = std::make_shared<StreamMor::Node>();
  n->data = TensorNode{};
  n->dom = product_ob(f.dom(), g.dom());
  n->cod = product_ob(f.cod(), g.cod());
  n->children = {std::move(f), std::move(g)};
  return StreamMor(std::move(n));
}

StreamMor copy_stream(StreamOb ob) {
  StreamOb out = product_ob(ob, ob);
  return primitive("copy", ob, out, [](std::size_t, History h) { return pair(h[0], h[0]); });
}

StreamMor discard_stream(StreamOb ob) {
  return primitive("discard", ob, StreamOb::constant(unit_carrier()),
                   [](std::size_t, History) { return unit_value(); });
}

StreamMor symmetry_stream(StreamOb a, StreamOb b) {
  StreamOb dom = product_ob(a, b);
  StreamOb cod = product_ob(b, a);
  return primitive("sym", dom, cod, [a](std::size_t n, History h) {
    std::size_t la = a.at(n).arity();
    const Value& v = h[0];
    Value right = slice(v, la, v.parts.size() - la);
    return pair(right, slice(v, 0, la));
  });
}

StreamMor feedback_stream(StreamMor inner, Carrier state, Value s_init) {
  if (!conforms(state, s_init))
    fail(errc::state_shape_error, "initial state does not inhabit the state carrier " +
                                      carrier_to_string(state));
  auto suffix_ok = [&](const StreamOb& ob) {
    if (!ob.is_constant()) return true;  // checked per step during evaluation
    const auto& atoms = ob.base().atoms;
    if (atoms.size() < state.atoms.size()) return false;
    return std::equal(state.atoms.begin(), state.atoms.end(), atoms.end() - state.atoms.size());
  };
  if (!suffix_ok(inner.dom()) || !suffix_ok(inner.cod()))
    fail(errc::state_shape_error,
         "feedback body must consume and produce the state carrier as its trailing factor");

  auto drop_suffix = [&](const StreamOb& ob) {
    if (ob.is_constant()) {
      Carrier c = ob.base();
      c.atoms.resize(c.atoms.size() - state.atoms.size());
      return StreamOb::constant(std::move(c));
    }
    std::size_t k = state.atoms.size();
    return StreamOb::varying([ob, k](std::size_t n) {
      Carrier c = ob.at(n);
      c.atoms.resize(c.atoms.size() - k);
      return c;
    });
  };

  auto n = std::make_shared<StreamMor::Node>();
  n->dom = drop_suffix(inner.dom());
  n->cod = drop_suffix(inner.cod());
  n->data = FeedbackNode{std::move(state), std::move(s_init)};
  n->children = {std::move(inner)};
  return StreamMor(std::move(n));
}

// ---------------------------------------------------------------------------
// pure denotation
// ---------------------------------------------------------------------------

Value StreamMor::step(std::size_t n, History h) const {
  return std::visit(
      overloaded{
          [&](const PrimitiveNode& p) { return p.fn(n, h); },
          [&](const ComposeNode&) {
            const StreamMor& f = first();
            const StreamMor& g = second();
            // run f over every prefix; ys is newest-first like h
            std::vector<Value> ys;
            ys.reserve(n + 1);
            for (std::size_t j = 0; j <= n; ++j) ys.push_back(f.step(n - j, h.subspan(j)));
            return g.step(n, ys);
          },
          [&](const TensorNode&) {
            const StreamMor& f = first();
            const StreamMor& g = second();
            std::vector<Value> lh, rh;
            lh.reserve(n + 1);
            rh.reserve(n + 1);
            for (std::size_t j = 0; j <= n; ++j) {
              std::size_t la = f.dom().at(n - j).arity();
              lh.push_back(slice(h[j], 0, la));
              rh.push_back(slice(h[j], la, h[j].parts.size() - la));
            }
            return pair(f.step(n, lh), g.step(n, rh));
          },
          [&](const FeedbackNode& fb) {
            const StreamMor& body = inner();
            Value s = fb.init;
            std::vector<Value> ih;  // newest-first history of body inputs
            Value y;
            for (std::size_t k = 0; k <= n; ++k) {
              ih.insert(ih.begin(), pair(h[n - k], s));
              Value out = body.step(k, ih);
              std::size_t ya = out.parts.size() - fb.state.atoms.size();
              y = slice(out, 0, ya);
              s = slice(out, ya, fb.state.atoms.size());
            }
            return y;
          }},
      node_->data);
}

// ---------------------------------------------------------------------------
// incremental evaluation
// ---------------------------------------------------------------------------

namespace {

struct SessNode {
  virtual ~SessNode() = default;
  virtual Value feed(const Value& x, std::size_t n) = 0;
  virtual void collect_states(std::vector<Value>& out) const = 0;
};

struct PrimSess : SessNode {
  const StreamMor mor;
  std::vector<Value> hist;  // newest-first
  explicit PrimSess(StreamMor m) : mor(std::move(m)) {}
  Value feed(const Value& x, std::size_t n) override {
    hist.insert(hist.begin(), x);
    return mor.step(n, hist);  // primitive step; no recursion
  }
  void collect_states(std::vector<Value>&) const override {}
};

std::unique_ptr<SessNode> make_sess(const StreamMor& m);

struct CompSess : SessNode {
  std::unique_ptr<SessNode> f, g;
  CompSess(const StreamMor& m) : f(make_sess(m.first())), g(make_sess(m.second())) {}
  Value feed(const Value& x, std::size_t n) override { return g->feed(f->feed(x, n), n); }
  void collect_states(std::vector<Value>& out) const override {
    f->collect_states(out);
    g->collect_states(out);
  }
};

struct TensSess : SessNode {
  StreamOb left_dom;
  std::unique_ptr<SessNode> f, g;
  TensSess(const StreamMor& m)
      : left_dom(m.first().dom()), f(make_sess(m.first())), g(make_sess(m.second())) {}
  Value feed(const Value& x, std::size_t n) override {
    std::size_t la = left_dom.at(n).arity();
    return pair(f->feed(slice(x, 0, la), n), g->feed(slice(x, la, x.parts.size() - la), n));
  }
  void collect_states(std::vector<Value>& out) const override {
    f->collect_states(out);
    g->collect_states(out);
  }
};

struct FbkSess : SessNode {
  std::size_t state_arity;
  Value state;
  std::unique_ptr<SessNode> body;
  FbkSess(const StreamMor& m)
      : state_arity(m.state().arity()), state(m.state_init()), body(make_sess(m.inner())) {}
  Value feed(const Value& x, std::size_t n) override {
    Value out = body->feed(pair(x, state), n);
    std::size_t ya = out.parts.size() - state_arity;
    state = slice(out, ya, state_arity);
    return slice(out, 0, ya);
  }
  void collect_states(std::vector<Value>& out) const override {
    out.push_back(state);
    body->collect_states(out);
  }
};

std::unique_ptr<SessNode> make_sess(const StreamMor& m) {
  switch (m.kind()) {
    case StreamMor::Kind::primitive: return std::make_unique<PrimSess>(m);
    case StreamMor::Kind::composite: return std::make_unique<CompSess>(m);
    case StreamMor::Kind::tensor: return std::make_unique<TensSess>(m);
    case StreamMor::Kind::feedback: return std::make_unique<FbkSess>(m);
  }
  fail(errc::carrier_mismatch, "corrupt stream morphism");
}

}  // namespace

struct EvalSession::Impl {
  StreamMor mor;
  std::unique_ptr<SessNode> root;
  std::vector<Value> in, out;
  Impl(StreamMor m) : mor(std::move(m)), root(make_sess(mor)) {}
};

EvalSession::EvalSession(StreamMor mor) : impl_(std::make_unique<Impl>(std::move(mor))) {}
EvalSession::~EvalSession() = default;
EvalSession::EvalSession(EvalSession&&) noexcept = default;
EvalSession& EvalSession::operator=(EvalSession&&) noexcept = default;

Value EvalSession::feed(const Value& x) {
  std::size_t n = impl_->in.size();
  if (!conforms(impl_->mor.dom().at(n), x))
    fail(errc::carrier_mismatch, "step " + std::to_string(n) + " input " + value_to_string(x) +
                                     " does not inhabit " +
                                     carrier_to_string(impl_->mor.dom().at(n)));
  Value y = impl_->root->feed(x, n);
  if (!conforms(impl_->mor.cod().at(n), y))
    fail(errc::carrier_mismatch, "step " + std::to_string(n) + " output " + value_to_string(y) +
                                     " does not inhabit " +
                                     carrier_to_string(impl_->mor.cod().at(n)));
  impl_->in.push_back(x);
  impl_->out.push_back(y);
  return y;
}

std::size_t EvalSession::steps() const { return impl_->in.size(); }
const std::vector<Value>& EvalSession::inputs() const { return impl_->in; }
const std::vector<Value>& EvalSession::outputs() const { return impl_->out; }
const StreamMor& EvalSession::morphism() const { return impl_->mor; }

std::vector<Value> EvalSession::feedback_states() const {
  std::vector<Value> out;
  impl_->root->collect_states(out);
  return out;
}

std::vector<Value> prefix_eval(const StreamMor& f, const std::vector<Value>& inputs) {
  EvalSession s(f);
  for (const auto& x : inputs) s.feed(x);
  return s.outputs();
}

std::string trace_to_string(const std::vector<Value>& inputs, const std::vector<Value>& outputs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < inputs.size(); ++i)
    os << "step " << i << ": in=" << value_to_string(inputs[i])
       << " out=" << value_to_string(outputs[i]) << "\n";
  return os.str();
}

}  // namespace catxai::stream

#pragma once

#include <any>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "catxai/errors.hpp"

namespace catxai::stream {

// ---------------------------------------------------------------------------
// carriers: flattened products of atoms; the unit carrier is the empty product
// ---------------------------------------------------------------------------

struct EnumCarrier {
  std::vector<std::string> labels;
  bool operator==(const EnumCarrier&) const = default;
};
struct VecCarrier {
  std::size_t dim = 0;
  bool operator==(const VecCarrier&) const = default;
};
// open-ended payload kind (explanation values); never enumerated by law checks
struct OpenCarrier {
  std::string kind;
  bool operator==(const OpenCarrier&) const = default;
};
using CarrierAtom = std::variant<EnumCarrier, VecCarrier, OpenCarrier>;

struct Carrier {
  std::vector<CarrierAtom> atoms;
  bool operator==(const Carrier&) const = default;
  std::size_t arity() const { return atoms.size(); }
};

Carrier unit_carrier();
Carrier enum_carrier(std::vector<std::string> labels);
Carrier enum_carrier(std::size_t n);  // labels "0".."n-1"
Carrier vec_carrier(std::size_t dim);
Carrier open_carrier(std::string kind);
Carrier product(const Carrier& a, const Carrier& b);
std::string carrier_to_string(const Carrier& c);
bool has_open_atom(const Carrier& c);

// ---------------------------------------------------------------------------
// values: flattened tuples mirroring their carrier
// ---------------------------------------------------------------------------

struct OpenValue {
  std::string kind;
  std::string text;  // printable form; also the comparison key
  std::any payload;
};
struct EnumValue {
  std::uint32_t index = 0;
  bool operator==(const EnumValue&) const = default;
};
struct VecValue {
  std::vector<double> elems;
  bool operator==(const VecValue&) const = default;
};
using AtomValue = std::variant<EnumValue, VecValue, std::shared_ptr<const OpenValue>>;

struct Value {
  std::vector<AtomValue> parts;  // unit is the empty tuple
};
bool operator==(const Value& a, const Value& b);
inline bool operator!=(const Value& a, const Value& b) { return !(a == b); }

Value unit_value();
Value enum_value(std::uint32_t index);
Value vec_value(std::vector<double> elems);
Value open_value(std::string kind, std::string text, std::any payload);
Value pair(const Value& a, const Value& b);              // tuple concatenation
Value slice(const Value& v, std::size_t begin, std::size_t n);
std::string value_to_string(const Value& v);             // floats as shortest round trip
bool conforms(const Carrier& c, const Value& v);

// ---------------------------------------------------------------------------
// stream objects
// ---------------------------------------------------------------------------

class StreamOb {
 public:
  StreamOb() : StreamOb(constant(Carrier{})) {}
  static StreamOb constant(Carrier c);
  static StreamOb varying(std::function<Carrier(std::size_t)> at);
  Carrier at(std::size_t n) const;
  bool is_constant() const { return constant_; }
  const Carrier& base() const;  // valid for constant objects

 private:
  StreamOb(Carrier c, std::function<Carrier(std::size_t)> fn, bool k);
  Carrier base_;
  std::function<Carrier(std::size_t)> at_;
  bool constant_ = true;
};

// ---------------------------------------------------------------------------
// stream morphisms
// ---------------------------------------------------------------------------

class StreamMor;

// history is passed newest-first: h[0] = x_n, h[n] = x_0
using History = std::span<const Value>;
using StepFn = std::function<Value(std::size_t n, History h)>;

StreamMor primitive(std::string name, StreamOb dom, StreamOb cod, StepFn fn);
StreamMor identity_stream(StreamOb ob);
StreamMor compose_streams(StreamMor f, StreamMor g);
StreamMor tensor_streams(StreamMor f, StreamMor g);
StreamMor copy_stream(StreamOb ob);
StreamMor discard_stream(StreamOb ob);
StreamMor symmetry_stream(StreamOb a, StreamOb b);
StreamMor feedback_stream(StreamMor inner, Carrier state, Value s_init);

class StreamMor {
 public:
  enum class Kind { primitive, composite, tensor, feedback };

  Kind kind() const;
  const StreamOb& dom() const;
  const StreamOb& cod() const;

  // structure accessors (first/second for composite, left/right for tensor)
  const std::string& prim_name() const;
  const StreamMor& first() const;
  const StreamMor& second() const;
  const StreamMor& inner() const;
  const Carrier& state() const;
  const Value& state_init() const;

  // pure denotation; recomputes every needed prefix, no caching
  Value step(std::size_t n, History newest_first) const;

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
  explicit StreamMor(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  friend StreamMor primitive(std::string, StreamOb, StreamOb, StepFn);
  friend StreamMor compose_streams(StreamMor, StreamMor);
  friend StreamMor tensor_streams(StreamMor, StreamMor);
  friend StreamMor feedback_stream(StreamMor, Carrier, Value);
  friend class EvalSession;
};

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

// incremental evaluator; every subterm keeps its own input history, so an
// n-step run of a size-d term costs O(n * d * step-cost)
class EvalSession {
 public:
  explicit EvalSession(StreamMor mor);
  ~EvalSession();
  EvalSession(EvalSession&&) noexcept;
  EvalSession& operator=(EvalSession&&) noexcept;

  Value feed(const Value& x);  // throws carrier_mismatch on bad input
  std::size_t steps() const;
  const std::vector<Value>& inputs() const;   // oldest-first
  const std::vector<Value>& outputs() const;  // oldest-first
  const StreamMor& morphism() const;
  // current state of every feedback node, in left-to-right term order
  std::vector<Value> feedback_states() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// memoized whole-prefix evaluation; inputs and outputs are oldest-first
std::vector<Value> prefix_eval(const StreamMor& f, const std::vector<Value>& inputs);

// "step <n>: in=<value> out=<value>" lines
std::string trace_to_string(const std::vector<Value>& inputs, const std::vector<Value>& outputs);

}  // namespace catxai::stream

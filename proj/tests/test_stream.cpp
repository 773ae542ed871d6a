#include <doctest.h>

#include "catxai/stream.hpp"

using namespace catxai;
using namespace catxai::stream;

namespace {

StreamOb bit() { return StreamOb::constant(enum_carrier({"0", "1"})); }

// f.step(n, h) = x_0, the oldest input
StreamMor echo_first(StreamOb ob) {
  return primitive("echo_first", ob, ob, [](std::size_t, History h) { return h.back(); });
}

StreamMor negation() {
  return primitive("not", bit(), bit(), [](std::size_t, History h) {
    return enum_value(1 - std::get<EnumValue>(h[0].parts[0]).index);
  });
}

std::vector<Value> bits(std::initializer_list<int> xs) {
  std::vector<Value> out;
  for (int x : xs) out.push_back(enum_value(static_cast<std::uint32_t>(x)));
  return out;
}

}  // namespace

TEST_CASE("identity stream returns the newest element") {
  auto out = prefix_eval(identity_stream(bit()), bits({1, 0, 1}));
  CHECK(out == bits({1, 0, 1}));
}

TEST_CASE("prefix evaluation of a history-dependent morphism") {
  auto out = prefix_eval(echo_first(bit()), bits({1, 0, 0}));
  CHECK(out == bits({1, 1, 1}));
  CHECK(prefix_eval(echo_first(bit()), {}).empty());
}

TEST_CASE("composition feeds the whole image prefix downstream") {
  auto fg = compose_streams(echo_first(bit()), negation());
  auto out = prefix_eval(fg, bits({1, 0, 1}));
  CHECK(out == bits({0, 0, 0}));
}

TEST_CASE("first prefix stage matches the recursive definition") {
  // fhat_1 = (id x cp) ; (f_1 x fhat_0) applied to (x_1, x_0)
  auto f = echo_first(bit());
  std::vector<Value> h1 = {enum_value(0), enum_value(1)};  // newest-first: x_1=0, x_0=1
  Value manual_f1 = f.step(1, h1);
  std::vector<Value> h0 = {enum_value(1)};
  Value manual_f0 = f.step(0, h0);
  auto hat = prefix_eval(f, bits({1, 0}));
  CHECK(hat[1] == manual_f1);
  CHECK(hat[0] == manual_f0);
}

TEST_CASE("copy, discard and symmetry act pointwise") {
  auto c = prefix_eval(copy_stream(bit()), bits({1}));
  CHECK(c[0] == pair(enum_value(1), enum_value(1)));

  auto d = prefix_eval(discard_stream(bit()), bits({1}));
  CHECK(d[0] == unit_value());

  auto s = symmetry_stream(bit(), StreamOb::constant(vec_carrier(2)));
  Value in = pair(enum_value(1), vec_value({0.5, -0.25}));
  auto o = prefix_eval(s, {in});
  CHECK(o[0] == pair(vec_value({0.5, -0.25}), enum_value(1)));
}

TEST_CASE("feedback delays the state by one step") {
  // body = symmetry on X=S=bit: y_n = s_{n-1}, s_n = x_n
  auto body = symmetry_stream(bit(), bit());
  auto fb = feedback_stream(body, enum_carrier({"0", "1"}), enum_value(0));
  auto out = prefix_eval(fb, bits({1, 0, 1}));
  CHECK(out == bits({0, 1, 0}));
}

TEST_CASE("feedback runs the accumulator fold") {
  // body: (x, p) -> p + x as pure state update, no visible output
  auto r = StreamOb::constant(vec_carrier(1));
  auto body = primitive("accum", StreamOb::constant(product(vec_carrier(1), vec_carrier(1))), r,
                        [](std::size_t, History h) {
                          double x = std::get<VecValue>(h[0].parts[0]).elems[0];
                          double p = std::get<VecValue>(h[0].parts[1]).elems[0];
                          return vec_value({p + x});
                        });
  auto fb = feedback_stream(body, vec_carrier(1), vec_value({0.0}));
  EvalSession s(fb);
  double expect = 0.0;
  for (double x : {1.0, 2.5, -0.5, 4.0}) {
    s.feed(vec_value({x}));
    expect += x;
    auto states = s.feedback_states();
    REQUIRE(states.size() == 1);
    CHECK(states[0] == vec_value({expect}));
  }
}

TEST_CASE("incremental sessions agree with the pure denotation") {
  auto ob2 = StreamOb::constant(product(enum_carrier(2), enum_carrier(2)));
  auto parity = primitive("parity", ob2, bit(), [](std::size_t, History h) {
    std::uint32_t acc = 0;
    for (const auto& v : h)
      acc ^= std::get<EnumValue>(v.parts[0]).index ^ std::get<EnumValue>(v.parts[1]).index;
    return enum_value(acc);
  });
  auto st = product(enum_carrier(2), enum_carrier(2));
  auto loop_body =
      compose_streams(tensor_streams(symmetry_stream(bit(), bit()), identity_stream(bit())),
                      tensor_streams(negation(), identity_stream(StreamOb::constant(st))));
  auto fb = feedback_stream(loop_body, st, pair(enum_value(0), enum_value(1)));
  // fb : bit -> bit with a two-atom state; chain it with parity via copy
  auto m = compose_streams(copy_stream(bit()), compose_streams(tensor_streams(fb, identity_stream(bit())), parity));

  std::vector<Value> in = bits({1, 0, 0, 1, 1});
  auto incr = prefix_eval(m, in);
  std::vector<Value> hist;
  for (std::size_t n = 0; n < in.size(); ++n) {
    hist.insert(hist.begin(), in[n]);
    CHECK(m.step(n, hist) == incr[n]);
  }
}

TEST_CASE("sessions are deterministic and record both histories") {
  auto m = compose_streams(echo_first(bit()), negation());
  EvalSession a(m), b(m);
  for (int x : {1, 0, 1}) {
    auto va = a.feed(enum_value(static_cast<std::uint32_t>(x)));
    auto vb = b.feed(enum_value(static_cast<std::uint32_t>(x)));
    CHECK(va == vb);
  }
  CHECK(a.steps() == 3);
  CHECK(a.inputs() == bits({1, 0, 1}));
  CHECK(a.outputs() == b.outputs());
}

TEST_CASE("carrier violations are reported") {
  CHECK_THROWS_AS(compose_streams(negation(), identity_stream(StreamOb::constant(vec_carrier(1)))),
                  error);
  EvalSession s(negation());
  CHECK_THROWS_AS(s.feed(vec_value({1.0})), error);
  CHECK_THROWS_AS(s.feed(enum_value(7)), error);
  CHECK_THROWS_AS(feedback_stream(symmetry_stream(bit(), bit()), enum_carrier(2), vec_value({0.0})),
                  error);
  CHECK_THROWS_AS(
      feedback_stream(identity_stream(bit()), vec_carrier(1), vec_value({0.0})), error);
}

TEST_CASE("value printing is canonical") {
  CHECK(value_to_string(unit_value()) == "*");
  CHECK(value_to_string(enum_value(2)) == "2");
  CHECK(value_to_string(vec_value({0.5, -0.25})) == "[0.5 -0.25]");
  CHECK(value_to_string(pair(enum_value(1), vec_value({0.1}))) == "(1, [0.1])");
  auto t = trace_to_string(bits({1}), bits({0}));
  CHECK(t == "step 0: in=1 out=0\n");
}

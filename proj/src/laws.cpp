#include "catxai/laws.hpp"

#include <bit>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "catxai/util.hpp"

namespace catxai::laws {

using namespace stream;

// ---------------------------------------------------------------------------
// sampling
// ---------------------------------------------------------------------------

namespace {

std::uint64_t hash_value(std::uint64_t h, const Value& v) {
  h = hash_combine(h, v.parts.size());
  for (const auto& a : v.parts) {
    std::visit(overloaded{[&](const EnumValue& e) { h = hash_combine(h, 1 + e.index); },
                          [&](const VecValue& x) {
                            h = hash_combine(h, 0x5ecull);
                            for (double d : x.elems)
                              h = hash_combine(h, std::bit_cast<std::uint64_t>(d));
                          },
                          [&](const std::shared_ptr<const OpenValue>&) {
                            fail(errc::carrier_mismatch,
                                 "law sampling never ranges over open carriers");
                          }},
               a);
  }
  return h;
}

Value decode_value(const Carrier& c, std::uint64_t h) {
  Value out;
  for (const auto& atom : c.atoms) {
    h = mix64(h);
    std::visit(overloaded{[&](const EnumCarrier& e) {
                            out.parts.push_back(EnumValue{
                                static_cast<std::uint32_t>(h % e.labels.size())});
                          },
                          [&](const VecCarrier& v) {
                            std::vector<double> xs;
                            std::uint64_t g = h;
                            for (std::size_t i = 0; i < v.dim; ++i) {
                              g = mix64(g);
                              // map to [-1, 1] with a short dyadic expansion
                              xs.push_back(static_cast<double>(static_cast<std::int64_t>(
                                               g % 2001) - 1000) / 1000.0);
                            }
                            out.parts.push_back(VecValue{std::move(xs)});
                          },
                          [&](const OpenCarrier&) {
                            fail(errc::carrier_mismatch,
                                 "law sampling never ranges over open carriers");
                          }},
               atom);
  }
  return out;
}

}  // namespace

Carrier Sampler::random_carrier(std::uint64_t salt, int max_atoms, int max_size) const {
  std::uint64_t h = hash_combine(seed, salt);
  int atoms = 1 + static_cast<int>(mix64(h) % static_cast<std::uint64_t>(max_atoms));
  Carrier c;
  for (int i = 0; i < atoms; ++i) {
    h = mix64(h + i);
    std::size_t size = 1 + h % static_cast<std::uint64_t>(max_size);
    c = product(c, enum_carrier(size));
  }
  return c;
}

Value Sampler::random_value(const Carrier& c, std::uint64_t salt) const {
  return decode_value(c, hash_combine(seed, salt));
}

StreamMor Sampler::random_mor(const Carrier& dom, const Carrier& cod, std::uint64_t salt,
                              bool memoryless) const {
  std::uint64_t key = hash_combine(seed, salt);
  auto fn = [key, cod, memoryless](std::size_t n, History h) {
    std::uint64_t acc = key;
    if (memoryless) {
      acc = hash_value(acc, h[0]);
    } else {
      acc = hash_combine(acc, n);
      for (const auto& v : h) acc = hash_value(acc, v);
    }
    return decode_value(cod, acc);
  };
  return primitive("sampled#" + std::to_string(salt), StreamOb::constant(dom),
                   StreamOb::constant(cod), fn);
}

// ---------------------------------------------------------------------------
// case runner: serial reference plus an OpenMP path over independent instances
// ---------------------------------------------------------------------------

namespace {

struct LawCase {
  std::string suite;
  std::string name;
  // returns a counterexample description for a failing instance
  std::function<std::optional<std::string>(std::uint64_t instance_seed)> run;
};

LawResult run_case(const LawCase& c, const RunOptions& opt) {
  LawResult r{c.suite, c.name, opt.samples_per_law, 0, ""};
  std::uint64_t base = hash_combine(opt.seed, std::hash<std::string>{}(c.suite + "/" + c.name));
  const std::int64_t n = static_cast<std::int64_t>(opt.samples_per_law);

  if (opt.threads == 1) {
    for (std::int64_t i = 0; i < n; ++i) {
      auto bad = c.run(hash_combine(base, static_cast<std::uint64_t>(i)));
      if (bad) {
        if (r.failures == 0) r.counterexample = *bad;
        ++r.failures;
      }
    }
    return r;
  }

  std::size_t failures = 0;
  std::string first;
  std::int64_t first_idx = -1;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : failures) \
    num_threads(opt.threads > 0 ? opt.threads : omp_get_max_threads())
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    auto bad = c.run(hash_combine(base, static_cast<std::uint64_t>(i)));
    if (bad) {
      ++failures;
#ifdef _OPENMP
#pragma omp critical(catxai_law_counterexample)
#endif
      {
        if (first_idx < 0 || i < first_idx) {
          first_idx = i;
          first = *bad;
        }
      }
    }
  }
  r.failures = failures;
  r.counterexample = first;
  return r;
}

// helpers shared by the law definitions ------------------------------------

struct Ctx {
  Sampler s;
  std::size_t steps;
  int max_enum;
};

std::vector<Value> random_inputs(const Ctx& cx, const Carrier& dom, std::uint64_t salt,
                                 std::size_t count) {
  std::vector<Value> xs;
  for (std::size_t i = 0; i < count; ++i)
    xs.push_back(cx.s.random_value(dom, hash_combine(salt, 0xd00d + i)));
  return xs;
}

std::optional<std::string> expect_equal(const StreamMor& lhs, const StreamMor& rhs,
                                        const std::vector<Value>& inputs,
                                        const std::string& what) {
  auto a = prefix_eval(lhs, inputs);
  auto b = prefix_eval(rhs, inputs);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!(a[i] == b[i])) {
      std::ostringstream os;
      os << what << " differs at step " << i << ": lhs=" << value_to_string(a[i])
         << " rhs=" << value_to_string(b[i]) << " on input " << value_to_string(inputs[i]);
      return os.str();
    }
  }
  return std::nullopt;
}

// exhaustive sweep over carrier sizes: instance i picks the i-th point of the
// {1..max}^k grid, so every size combination recurs as samples accumulate
std::vector<std::size_t> size_grid(std::uint64_t instance, int k, int max_size) {
  std::vector<std::size_t> out;
  std::uint64_t v = instance;
  for (int i = 0; i < k; ++i) {
    out.push_back(1 + v % static_cast<std::uint64_t>(max_size));
    v /= static_cast<std::uint64_t>(max_size);
  }
  return out;
}

Carrier atom(std::size_t size) { return enum_carrier(size); }

}  // namespace

// ---------------------------------------------------------------------------
// law definitions
// ---------------------------------------------------------------------------

namespace {

std::vector<LawCase> category_cases(const Ctx& cx) {
  auto steps = cx.steps;
  return {
      {"category", "left_unit",
       [cx, steps](std::uint64_t is) {
         auto sz = size_grid(is, 2, cx.max_enum);
         Carrier X = atom(sz[0]), Y = atom(sz[1]);
         auto f = cx.s.random_mor(X, Y, is);
         auto lhs = compose_streams(identity_stream(StreamOb::constant(X)), f);
         return expect_equal(lhs, f, random_inputs(cx, X, is, steps), "id ; f");
       }},
      {"category", "right_unit",
       [cx, steps](std::uint64_t is) {
         auto sz = size_grid(is, 2, cx.max_enum);
         Carrier X = atom(sz[0]), Y = atom(sz[1]);
         auto f = cx.s.random_mor(X, Y, is);
         auto lhs = compose_streams(f, identity_stream(StreamOb::constant(Y)));
         return expect_equal(lhs, f, random_inputs(cx, X, is, steps), "f ; id");
       }},
      {"category", "associativity",
       [cx, steps](std::uint64_t is) {
         auto sz = size_grid(is, 4, cx.max_enum);
         Carrier X = atom(sz[0]), Y = atom(sz[1]), Z = atom(sz[2]), W = atom(sz[3]);
         auto f = cx.s.random_mor(X, Y, hash_combine(is, 1));
         auto g = cx.s.random_mor(Y, Z, hash_combine(is, 2));
         auto h = cx.s.random_mor(Z, W, hash_combine(is, 3));
         auto lhs = compose_streams(compose_streams(f, g), h);
         auto rhs = compose_streams(f, compose_streams(g, h));
         return expect_equal(lhs, rhs, random_inputs(cx, X, is, steps), "(f;g);h vs f;(g;h)");
       }},
  };
}

std::vector<LawCase> monoidal_cases(const Ctx& cx) {
  auto steps = cx.steps;
  return {
      {"monoidal", "interchange",
       [cx, steps](std::uint64_t is) {
         auto sz = size_grid(is, 6, cx.max_enum);
         Carrier X = atom(sz[0]), Y = atom(sz[1]), Z = atom(sz[2]);
         Carrier X2 = atom(sz[3]), Y2 = atom(sz[4]), Z2 = atom(sz[5]);
         auto f = cx.s.random_mor(X, Y, hash_combine(is, 1));
         auto h = cx.s.random_mor(Y, Z, hash_combine(is, 2));
         auto g = cx.s.random_mor(X2, Y2, hash_combine(is, 3));
         auto k = cx.s.random_mor(Y2, Z2, hash_combine(is, 4));
         auto lhs = compose_streams(tensor_streams(f, g), tensor_streams(h, k));
         auto rhs = tensor_streams(compose_streams(f, h), compose_streams(g, k));
         return expect_equal(lhs, rhs, random_inputs(cx, product(X, X2), is, steps),
                             "(f*g);(h*k) vs (f;h)*(g;k)");
       }},
      {"monoidal", "tensor_unit",
       [cx, steps](std::uint64_t is) {
         auto sz = size_grid(is, 2, cx.max_enum);
         Carrier X = atom(sz[0]), Y = atom(sz[1]);
         auto f = cx.s.random_mor(X, Y, is);
         auto unit_id = identity_stream(StreamOb::constant(unit_carrier()));
         auto lhs = tensor_streams(f, unit_id);
         auto rhs = tensor_streams(unit_id, f);
         auto in = random_inputs(cx, X, is, steps);
         if (auto bad = expect_equal(lhs, f, in, "f * id_1")) return bad;
         return expect_equal(rhs, f, in, "id_1 * f");
       }},
      {"monoidal", "sym_involution",
       [cx, steps](std::uint64_t is) {
         auto sz = size_grid(is, 2, cx.max_enum);
         Carrier X = atom(sz[0]), Y = atom(sz[1]);
         auto sx = StreamOb::constant(X), sy = StreamOb::constant(Y);
         auto lhs = compose_streams(symmetry_stream(sx, sy), symmetry_stream(sy, sx));
         auto rhs = identity_stream(StreamOb::constant(product(X, Y)));
         return expect_equal(lhs, rhs, random_inputs(cx, product(X, Y), is, steps), "sym;sym");
       }},
      {"monoidal", "sym_naturality",
       [cx, steps](std::uint64_t is) {
         auto sz = size_grid(is, 4, cx.max_enum);
         Carrier X = atom(sz[0]), Y = atom(sz[1]), Z = atom(sz[2]), W = atom(sz[3]);
         auto f = cx.s.random_mor(X, Y, hash_combine(is, 1));
         auto g = cx.s.random_mor(Z, W, hash_combine(is, 2));
         auto lhs = compose_streams(tensor_streams(f, g),
                                    symmetry_stream(StreamOb::constant(Y), StreamOb::constant(W)));
         auto rhs = compose_streams(symmetry_stream(StreamOb::constant(X), StreamOb::constant(Z)),
                                    tensor_streams(g, f));
         return expect_equal(lhs, rhs, random_inputs(cx, product(X, Z), is, steps),
                             "(f*g);sym vs sym;(g*f)");
       }},
      {"monoidal", "sym_hexagon",
       [cx, steps](std::uint64_t is) {
         auto sz = size_grid(is, 3, cx.max_enum);
         Carrier X = atom(sz[0]), Y = atom(sz[1]), Z = atom(sz[2]);
         auto sx = StreamOb::constant(X), sy = StreamOb::constant(Y), sz_ = StreamOb::constant(Z);
         auto lhs = symmetry_stream(StreamOb::constant(product(X, Y)), sz_);
         auto rhs = compose_streams(tensor_streams(identity_stream(sx), symmetry_stream(sy, sz_)),
                                    tensor_streams(symmetry_stream(sx, sz_), identity_stream(sy)));
         return expect_equal(lhs, rhs, random_inputs(cx, product(product(X, Y), Z), is, steps),
                             "hexagon");
       }},
  };
}

std::vector<LawCase> cartesian_cases(const Ctx& cx) {
  auto steps = cx.steps;
  auto ob = [](const Carrier& c) { return StreamOb::constant(c); };
  return {
      {"cartesian", "copy_coassoc",
       [cx, steps, ob](std::uint64_t is) {
         Carrier X = atom(size_grid(is, 1, cx.max_enum)[0]);
         auto lhs = compose_streams(copy_stream(ob(X)),
                                    tensor_streams(copy_stream(ob(X)), identity_stream(ob(X))));
         auto rhs = compose_streams(copy_stream(ob(X)),
                                    tensor_streams(identity_stream(ob(X)), copy_stream(ob(X))));
         return expect_equal(lhs, rhs, random_inputs(cx, X, is, steps), "coassociativity");
       }},
      {"cartesian", "copy_counit",
       [cx, steps, ob](std::uint64_t is) {
         Carrier X = atom(size_grid(is, 1, cx.max_enum)[0]);
         auto l = compose_streams(copy_stream(ob(X)),
                                  tensor_streams(discard_stream(ob(X)), identity_stream(ob(X))));
         auto r = compose_streams(copy_stream(ob(X)),
                                  tensor_streams(identity_stream(ob(X)), discard_stream(ob(X))));
         auto in = random_inputs(cx, X, is, steps);
         if (auto bad = expect_equal(l, identity_stream(ob(X)), in, "counit left")) return bad;
         return expect_equal(r, identity_stream(ob(X)), in, "counit right");
       }},
      {"cartesian", "copy_cocomm",
       [cx, steps, ob](std::uint64_t is) {
         Carrier X = atom(size_grid(is, 1, cx.max_enum)[0]);
         auto lhs = compose_streams(copy_stream(ob(X)), symmetry_stream(ob(X), ob(X)));
         return expect_equal(lhs, copy_stream(ob(X)), random_inputs(cx, X, is, steps),
                             "cocommutativity");
       }},
      {"cartesian", "copy_naturality",
       [cx, steps, ob](std::uint64_t is) {
         auto sz = size_grid(is, 2, cx.max_enum);
         Carrier X = atom(sz[0]), Y = atom(sz[1]);
         auto f = cx.s.random_mor(X, Y, is);
         auto lhs = compose_streams(f, copy_stream(ob(Y)));
         auto rhs = compose_streams(copy_stream(ob(X)), tensor_streams(f, f));
         return expect_equal(lhs, rhs, random_inputs(cx, X, is, steps), "f;cp vs cp;(f*f)");
       }},
      {"cartesian", "discard_naturality",
       [cx, steps, ob](std::uint64_t is) {
         auto sz = size_grid(is, 2, cx.max_enum);
         Carrier X = atom(sz[0]), Y = atom(sz[1]);
         auto f = cx.s.random_mor(X, Y, is);
         auto lhs = compose_streams(f, discard_stream(ob(Y)));
         return expect_equal(lhs, discard_stream(ob(X)), random_inputs(cx, X, is, steps),
                             "f;discard vs discard");
       }},
      {"cartesian", "copy_coherence",
       [cx, steps, ob](std::uint64_t is) {
         auto sz = size_grid(is, 2, cx.max_enum);
         Carrier X = atom(sz[0]), Y = atom(sz[1]);
         auto lhs = copy_stream(ob(product(X, Y)));
         auto mid = tensor_streams(
             identity_stream(ob(X)),
             tensor_streams(symmetry_stream(ob(X), ob(Y)), identity_stream(ob(Y))));
         auto rhs = compose_streams(tensor_streams(copy_stream(ob(X)), copy_stream(ob(Y))), mid);
         return expect_equal(lhs, rhs, random_inputs(cx, product(X, Y), is, steps),
                             "copy on tensors");
       }},
      {"cartesian", "discard_coherence",
       [cx, steps, ob](std::uint64_t is) {
         auto sz = size_grid(is, 2, cx.max_enum);
         Carrier X = atom(sz[0]), Y = atom(sz[1]);
         auto lhs = discard_stream(ob(product(X, Y)));
         auto rhs = tensor_streams(discard_stream(ob(X)), discard_stream(ob(Y)));
         return expect_equal(lhs, rhs, random_inputs(cx, product(X, Y), is, steps),
                             "discard on tensors");
       }},
  };
}

std::vector<LawCase> stream_cases(const Ctx& cx) {
  auto steps = cx.steps;
  return {
      {"streams", "prefix_consistency",
       [cx, steps](std::uint64_t is) -> std::optional<std::string> {
         auto sz = size_grid(is, 2, cx.max_enum);
         Carrier X = atom(sz[0]), Y = atom(sz[1]);
         auto f = cx.s.random_mor(X, Y, is);
         auto in = random_inputs(cx, X, is, steps);
         auto full = prefix_eval(f, in);
         for (std::size_t cut = 0; cut < in.size(); ++cut) {
           auto part = prefix_eval(f, std::vector<Value>(in.begin(), in.begin() + cut));
           for (std::size_t i = 0; i < part.size(); ++i)
             if (!(part[i] == full[i])) return "extending a stream rewrote an earlier output";
         }
         return std::nullopt;
       }},
      {"streams", "incremental_matches_naive",
       [cx, steps](std::uint64_t is) -> std::optional<std::string> {
         auto sz = size_grid(is, 3, cx.max_enum);
         Carrier X = atom(sz[0]), Y = atom(sz[1]), Z = atom(sz[2]);
         auto f = cx.s.random_mor(X, Y, hash_combine(is, 1));
         auto g = cx.s.random_mor(product(Y, Y), Z, hash_combine(is, 2));
         auto m = compose_streams(copy_stream(StreamOb::constant(X)),
                                  compose_streams(tensor_streams(f, f), g));
         auto in = random_inputs(cx, X, is, steps);
         auto incr = prefix_eval(m, in);
         std::vector<Value> hist;
         for (std::size_t n = 0; n < in.size(); ++n) {
           hist.insert(hist.begin(), in[n]);
           if (!(m.step(n, hist) == incr[n])) return "incremental and direct evaluation differ";
         }
         return std::nullopt;
       }},
      {"streams", "session_determinism",
       [cx, steps](std::uint64_t is) -> std::optional<std::string> {
         auto sz = size_grid(is, 2, cx.max_enum);
         Carrier X = atom(sz[0]), Y = atom(sz[1]);
         auto f = cx.s.random_mor(X, Y, is);
         auto in = random_inputs(cx, X, is, steps);
         auto a = prefix_eval(f, in);
         auto b = prefix_eval(f, in);
         for (std::size_t i = 0; i < a.size(); ++i)
           if (!(a[i] == b[i])) return "same inputs, different outputs";
         return std::nullopt;
       }},
  };
}

// feedback axiom instances ---------------------------------------------------

struct FbCtx {
  Sampler s;
  std::size_t steps;
  int max_state_atoms;
};

Carrier rand_state(const FbCtx& cx, std::uint64_t salt) {
  return cx.s.random_carrier(salt, cx.max_state_atoms, 3);
}

std::vector<LawCase> feedback_cases(const FbCtx& cx) {
  auto steps = cx.steps;
  return {
      {"feedback", "tightening",
       [cx, steps](std::uint64_t is) {
         Carrier X2 = cx.s.random_carrier(hash_combine(is, 1), 1, 3);
         Carrier X = cx.s.random_carrier(hash_combine(is, 2), 1, 3);
         Carrier Y = cx.s.random_carrier(hash_combine(is, 3), 1, 3);
         Carrier Y2 = cx.s.random_carrier(hash_combine(is, 4), 1, 3);
         Carrier S = rand_state(cx, hash_combine(is, 5));
         auto g = cx.s.random_mor(X2, X, hash_combine(is, 6));
         auto f = cx.s.random_mor(product(X, S), product(Y, S), hash_combine(is, 7));
         auto h = cx.s.random_mor(Y, Y2, hash_combine(is, 8));
         Value s0 = cx.s.random_value(S, hash_combine(is, 9));
         auto ids = identity_stream(StreamOb::constant(S));
         auto lhs = feedback_stream(
             compose_streams(tensor_streams(g, ids),
                             compose_streams(f, tensor_streams(h, ids))),
             S, s0);
         auto rhs = compose_streams(g, compose_streams(feedback_stream(f, S, s0), h));
         return expect_equal(lhs, rhs, random_inputs({cx.s, steps, 3}, X2, is, steps),
                             "tightening");
       }},
      {"feedback", "joining",
       [cx, steps](std::uint64_t is) {
         Carrier X = cx.s.random_carrier(hash_combine(is, 1), 1, 3);
         Carrier Y = cx.s.random_carrier(hash_combine(is, 2), 1, 3);
         Carrier S = cx.s.random_carrier(hash_combine(is, 3), 1, 3);
         Carrier T = cx.s.random_carrier(hash_combine(is, 4), 1, 3);
         auto f = cx.s.random_mor(product(X, product(S, T)), product(Y, product(S, T)),
                                  hash_combine(is, 5));
         Value s0 = cx.s.random_value(S, hash_combine(is, 6));
         Value t0 = cx.s.random_value(T, hash_combine(is, 7));
         auto lhs = feedback_stream(f, product(S, T), pair(s0, t0));
         auto rhs = feedback_stream(feedback_stream(f, T, t0), S, s0);
         return expect_equal(lhs, rhs, random_inputs({cx.s, steps, 3}, X, is, steps), "joining");
       }},
      {"feedback", "vanishing",
       [cx, steps](std::uint64_t is) {
         Carrier X = cx.s.random_carrier(hash_combine(is, 1), 2, 3);
         Carrier Y = cx.s.random_carrier(hash_combine(is, 2), 2, 3);
         auto f = cx.s.random_mor(X, Y, hash_combine(is, 3));
         auto lhs = feedback_stream(f, unit_carrier(), unit_value());
         return expect_equal(lhs, f, random_inputs({cx.s, steps, 3}, X, is, steps), "vanishing");
       }},
      {"feedback", "strength",
       [cx, steps](std::uint64_t is) {
         Carrier A = cx.s.random_carrier(hash_combine(is, 1), 1, 3);
         Carrier B = cx.s.random_carrier(hash_combine(is, 2), 1, 3);
         Carrier X = cx.s.random_carrier(hash_combine(is, 3), 1, 3);
         Carrier Y = cx.s.random_carrier(hash_combine(is, 4), 1, 3);
         Carrier S = rand_state(cx, hash_combine(is, 5));
         auto g = cx.s.random_mor(A, B, hash_combine(is, 6));
         auto f = cx.s.random_mor(product(X, S), product(Y, S), hash_combine(is, 7));
         Value s0 = cx.s.random_value(S, hash_combine(is, 8));
         auto lhs = feedback_stream(tensor_streams(g, f), S, s0);
         auto rhs = tensor_streams(g, feedback_stream(f, S, s0));
         return expect_equal(lhs, rhs, random_inputs({cx.s, steps, 3}, product(A, X), is, steps),
                             "strength");
       }},
      {"feedback", "sliding",
       [cx, steps](std::uint64_t is) {
         Carrier X = cx.s.random_carrier(hash_combine(is, 1), 1, 3);
         Carrier Y = cx.s.random_carrier(hash_combine(is, 2), 1, 3);
         Carrier S = rand_state(cx, hash_combine(is, 3));
         Carrier T = rand_state(cx, hash_combine(is, 4));
         // the slid morphism is memoryless; loop inits must be related by it
         auto g = cx.s.random_mor(S, T, hash_combine(is, 5), /*memoryless=*/true);
         auto f = cx.s.random_mor(product(X, T), product(Y, S), hash_combine(is, 6));
         Value s0 = cx.s.random_value(S, hash_combine(is, 7));
         std::vector<Value> h0 = {s0};
         Value t0 = g.step(0, h0);
         auto idx = identity_stream(StreamOb::constant(X));
         auto idy = identity_stream(StreamOb::constant(Y));
         auto lhs = feedback_stream(compose_streams(f, tensor_streams(idy, g)), T, t0);
         auto rhs = feedback_stream(compose_streams(tensor_streams(idx, g), f), S, s0);
         return expect_equal(lhs, rhs, random_inputs({cx.s, steps, 3}, X, is, steps),
                             "sliding (inits related by the slid morphism)");
       }},
  };
}

std::vector<LawCase> cases_for(const std::string& suite, const RunOptions& opt) {
  Ctx cx{Sampler{opt.seed}, opt.steps, opt.max_enum};
  if (suite == "category") return category_cases(cx);
  if (suite == "monoidal") return monoidal_cases(cx);
  if (suite == "cartesian") return cartesian_cases(cx);
  if (suite == "streams") return stream_cases(cx);
  if (suite == "feedback") return feedback_cases(FbCtx{Sampler{opt.seed}, opt.steps, 2});
  fail(errc::usage_error, "unknown law suite '" + suite + "'");
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"category", "monoidal", "cartesian", "feedback", "streams"};
}

std::vector<LawResult> run_suite(const std::string& suite, const RunOptions& opt) {
  std::vector<LawResult> out;
  for (const auto& c : cases_for(suite, opt)) out.push_back(run_case(c, opt));
  return out;
}

std::vector<LawResult> run_all_suites(const RunOptions& opt) {
  std::vector<LawResult> out;
  for (const auto& s : suite_names())
    for (auto& r : run_suite(s, opt)) out.push_back(std::move(r));
  return out;
}

std::vector<LawResult> check_feedback_axioms(const Sampler& sampler, std::size_t instances,
                                             std::size_t steps, int threads,
                                             int max_state_atoms) {
  RunOptions opt;
  opt.seed = sampler.seed;
  opt.steps = steps;
  opt.threads = threads;
  auto cases = feedback_cases(FbCtx{sampler, steps, max_state_atoms});
  opt.samples_per_law = (instances + cases.size() - 1) / cases.size();
  std::vector<LawResult> out;
  for (const auto& c : cases) out.push_back(run_case(c, opt));
  return out;
}

std::string format_results(const std::vector<LawResult>& rs) {
  std::ostringstream os;
  for (const auto& r : rs) {
    os << (r.ok() ? "ok  " : "FAIL") << " " << r.suite << "/" << r.name << " (" << r.cases
       << " cases";
    if (!r.ok()) os << ", " << r.failures << " failures; first: " << r.counterexample;
    os << ")\n";
  }
  return os.str();
}

}  // namespace catxai::laws

#include <doctest.h>

#include <random>
#include <sstream>

#include "catxai/institution.hpp"

using namespace catxai;
using namespace catxai::institution;

namespace {

PropSignature abc() { return {{"a", "b", "c"}}; }

SentencePtr random_sentence(std::mt19937_64& rng, const PropSignature& sig, int depth) {
  std::uniform_int_distribution<int> kind(0, depth <= 1 ? 1 : 5);
  switch (kind(rng)) {
    case 0:
      return top();
    case 1: {
      std::uniform_int_distribution<std::size_t> pick(0, sig.symbols.size() - 1);
      return var(sig.symbols[pick(rng)]);
    }
    case 2:
      return lnot(random_sentence(rng, sig, depth - 1));
    case 3:
      return land(random_sentence(rng, sig, depth - 1), random_sentence(rng, sig, depth - 1));
    case 4:
      return lor(random_sentence(rng, sig, depth - 1), random_sentence(rng, sig, depth - 1));
    default:
      return implies(random_sentence(rng, sig, depth - 1), random_sentence(rng, sig, depth - 1));
  }
}

}  // namespace

TEST_CASE("sentence printing uses minimal parentheses") {
  auto a = var("a"), b = var("b"), c = var("c");
  CHECK(sentence_to_string(implies(land(a, lnot(b)), c)) == "a & ~b -> c");
  CHECK(sentence_to_string(land(a, land(b, c))) == "a & (b & c)");
  CHECK(sentence_to_string(land(land(a, b), c)) == "a & b & c");
  CHECK(sentence_to_string(lor(land(a, b), c)) == "a & b | c");
  CHECK(sentence_to_string(land(lor(a, b), c)) == "(a | b) & c");
  CHECK(sentence_to_string(implies(a, implies(b, c))) == "a -> b -> c");
  CHECK(sentence_to_string(implies(implies(a, b), c)) == "(a -> b) -> c");
  CHECK(sentence_to_string(lnot(land(a, b))) == "~(a & b)");
  CHECK(sentence_to_string(lnot(lnot(a))) == "~~a");
  CHECK(sentence_to_string(top()) == "T");
}

TEST_CASE("parser handles precedence, associativity and junk") {
  CHECK(sentence_equal(parse_sentence("a & ~b -> c"),
                       implies(land(var("a"), lnot(var("b"))), var("c"))));
  CHECK(sentence_equal(parse_sentence("a -> b -> c"),
                       implies(var("a"), implies(var("b"), var("c")))));
  CHECK(sentence_equal(parse_sentence("a & b & c"), land(land(var("a"), var("b")), var("c"))));
  CHECK(sentence_equal(parse_sentence("a | b & c"), lor(var("a"), land(var("b"), var("c")))));
  CHECK(sentence_equal(parse_sentence("  T  "), top()));
  CHECK(sentence_equal(parse_sentence("~( a | b )"), lnot(lor(var("a"), var("b")))));
  CHECK_THROWS_WITH_AS(parse_sentence("a &"), doctest::Contains("E_PARSE"), error);
  CHECK_THROWS_WITH_AS(parse_sentence("a b"), doctest::Contains("E_PARSE"), error);
  CHECK_THROWS_WITH_AS(parse_sentence("(a"), doctest::Contains("E_PARSE"), error);
  CHECK_THROWS_WITH_AS(parse_sentence(""), doctest::Contains("E_PARSE"), error);
}

TEST_CASE("printer and parser round-trip on random sentences") {
  std::mt19937_64 rng(19);
  auto sig = abc();
  for (int i = 0; i < 500; ++i) {
    auto s = random_sentence(rng, sig, 6);
    auto back = parse_sentence(sentence_to_string(s));
    CHECK(sentence_equal(s, back));
  }
}

TEST_CASE("satisfaction evaluates classically") {
  PropSignature sig{{"x_flies", "x_animal", "x_plane"}};
  Valuation m{sig, {1, 0, 1}};
  auto e = parse_sentence("x_flies & ~x_animal -> x_plane");
  check_wellformed(e, sig);
  CHECK(satisfies(m, e));
  CHECK(satisfies(m, top()));
  CHECK(!satisfies(Valuation{{{"a"}}, {0}}, var("a")));
  CHECK_THROWS_WITH_AS(satisfies(m, var("zig")), doctest::Contains("E_SIGNATURE_MISMATCH"),
                       error);
}

TEST_CASE("well-formedness rejects foreign symbols") {
  CHECK_THROWS_WITH_AS(check_wellformed(var("zig"), abc()), doctest::Contains("E_SYMBOL_MISMATCH"),
                       error);
}

TEST_CASE("sentence translation renames structurally") {
  PropSignature src{{"a", "b"}}, dst{{"x", "y"}};
  SignatureMorphism rho{src, dst, {{"a", "x"}, {"b", "y"}}};
  rho.validate();
  auto e = land(var("a"), lnot(var("b")));
  CHECK(sentence_to_string(sen_translate(rho, e)) == "x & ~y");
  CHECK(sentence_equal(sen_translate(identity_morphism(src), e), e));
  CHECK_THROWS_WITH_AS(sen_translate(rho, var("c")), doctest::Contains("E_SYMBOL_NOT_IN_SOURCE"),
                       error);
}

TEST_CASE("translation is functorial on small signatures") {
  PropSignature s1{{"a", "b"}}, s2{{"p", "q"}}, s3{{"u"}};
  for (const auto& r1 : enumerate_morphisms(s1, s2))
    for (const auto& r2 : enumerate_morphisms(s2, s3)) {
      auto both = compose_morphisms(r1, r2);
      for (const auto& e : enumerate_sentences(s1, 3))
        CHECK(sentence_equal(sen_translate(both, e), sen_translate(r2, sen_translate(r1, e))));
    }
}

TEST_CASE("model reduct composes contravariantly") {
  PropSignature s1{{"a", "b"}}, s2{{"p", "q", "r"}}, s3{{"u", "v"}};
  for (const auto& r1 : enumerate_morphisms(s1, s2))
    for (const auto& r2 : enumerate_morphisms(s2, s3)) {
      auto both = compose_morphisms(r1, r2);
      for (const auto& m : enumerate_valuations(s3)) {
        auto direct = mod_reduct(both, m);
        auto staged = mod_reduct(r1, mod_reduct(r2, m));
        CHECK(direct.sig == staged.sig);
        CHECK(direct.bits == staged.bits);
      }
    }
}

TEST_CASE("reduct reads values through the morphism") {
  PropSignature src{{"a"}}, dst{{"x", "y"}};
  SignatureMorphism rho{src, dst, {{"a", "x"}}};
  Valuation m{dst, {1, 0}};
  CHECK(mod_reduct(rho, m).value("a"));
}

TEST_CASE("the satisfaction condition survives a collapsing morphism") {
  PropSignature src{{"a", "b"}}, dst{{"x"}};
  SignatureMorphism rho{src, dst, {{"a", "x"}, {"b", "x"}}};
  auto e = land(var("a"), lnot(var("b")));  // collapses to x & ~x
  for (const auto& m : enumerate_valuations(dst)) {
    CHECK(check_satisfaction_condition(rho, e, m));
    CHECK(!satisfies(m, sen_translate(rho, e)));
  }
}

TEST_CASE("satisfaction condition sweep is clean on small signatures") {
  auto st = satisfaction_sweep(2, 3, 1);
  CHECK(st.failures == 0);
  CHECK(st.checked > 10000);
  auto par = satisfaction_sweep(2, 3, 0);
  CHECK(par.checked == st.checked);
  CHECK(par.failures == 0);
}

TEST_CASE("per-morphism satisfaction check covers all models and sentences") {
  PropSignature src{{"a", "b"}}, dst{{"x", "y"}};
  SignatureMorphism rho{src, dst, {{"a", "x"}, {"b", "x"}}};
  auto st = satisfaction_check(rho, 2, 1);
  // 11 sentences of depth <= 2 over 2 symbols... 3 atoms + 3 nots + 3*9 binaries = 33, 4 models
  CHECK(st.checked == 33u * 4u);
  CHECK(st.failures == 0);
}

TEST_CASE("sentence pools have the expected exact sizes") {
  PropSignature sig{{"a", "b", "c", "d"}};
  CHECK(enumerate_sentences(sig, 1).size() == 5);
  CHECK(enumerate_sentences(sig, 2).size() == 85);
  CHECK(enumerate_sentences(sig, 3).size() == 21765);
  for (const auto& s : enumerate_sentences(sig, 2)) CHECK(sentence_depth(s) <= 2);
}

TEST_CASE("saliency satisfaction is subset containment") {
  SaliencySignature sig{{"p1", "p2", "p3"}};
  CHECK(saliency_satisfies({sig, {"p1", "p2"}}, {sig, {"p1"}}));
  CHECK(!saliency_satisfies({sig, {"p1"}}, {sig, {"p1", "p2"}}));
  CHECK(saliency_satisfies({sig, {}}, {sig, {}}));  // empty conjunction
  CHECK(saliency_satisfies({sig, {"p3"}}, {sig, {}}));
  SaliencySignature other{{"q1"}};
  CHECK_THROWS_WITH_AS(saliency_satisfies({sig, {}}, {other, {}}),
                       doctest::Contains("E_SIGNATURE_MISMATCH"), error);
}

TEST_CASE("payload classification tags sentences and models") {
  CHECK(classify_explanation(std::vector<SentencePtr>{var("a")}) == ExplanationKind::syntactic);
  CHECK(classify_explanation(Valuation{{{"a"}}, {1}}) == ExplanationKind::semantic);
  CHECK(classify_explanation(SaliencyModel{{{"p1"}}, {"p1"}}) == ExplanationKind::semantic);
  CHECK_THROWS_WITH_AS(classify_explanation(UnitPayload{}),
                       doctest::Contains("E_UNRECOGNIZED_PAYLOAD"), error);
}

TEST_CASE("signature and morphism files parse and validate") {
  std::istringstream sig_text("x\ny\n# comment\nz\n");
  auto sig = read_signature(sig_text);
  CHECK(sig.symbols == std::vector<std::string>{"x", "y", "z"});

  std::istringstream dup("x\nx\n");
  CHECK_THROWS_WITH_AS(read_signature(dup), doctest::Contains("E_DUPLICATE_NAME"), error);

  std::istringstream mor_text("a = x\nb = z\n");
  auto rho = read_morphism(mor_text, sig);
  CHECK(rho.source.symbols == std::vector<std::string>{"a", "b"});
  CHECK(rho.map.at("b") == "z");

  std::istringstream bad("a = w\n");
  CHECK_THROWS_WITH_AS(read_morphism(bad, sig), doctest::Contains("E_SYMBOL_MISMATCH"), error);
  std::istringstream malformed("a x\n");
  CHECK_THROWS_WITH_AS(read_morphism(malformed, sig), doctest::Contains("E_PARSE"), error);
}

#include <doctest.h>

#include <random>
#include <string>

#include "catxai/dsl.hpp"
#include "catxai/errors.hpp"
#include "support/term_gen.hpp"

using namespace catxai;
using namespace catxai::diagram;
using dsl::document_equal;
using dsl::document_to_string;
using dsl::parse_document;

TEST_CASE("a document collects obs, mors and terms") {
  auto doc = parse_document("ob X; mor f : X -> X; term t = f ; f;");
  CHECK(doc.presentation.ob_gens == std::vector<std::string>{"X"});
  CHECK(doc.presentation.mor_gens.size() == 1);
  CHECK(doc.terms.size() == 1);
  CHECK(doc.has_term("t"));
  CHECK(!doc.has_term("f"));

  auto f = gen("f", ob("X"), ob("X"));
  CHECK(term_equal(doc.term("t"), compose(f, f)));
  auto ty = typecheck(doc.term("t"), doc.presentation);
  CHECK(ty.dom == ObList{"X"});
  CHECK(ty.cod == ObList{"X"});

  CHECK_THROWS_WITH_AS(doc.term("missing"), doctest::Contains("E_USAGE"), error);
}

TEST_CASE("a semicolon continues a composite only before another factor") {
  auto doc = parse_document(
      "ob X;\n"
      "mor f : X -> X;\n"
      "term a = f; term b = f ; id(X);\n");
  auto f = gen("f", ob("X"), ob("X"));
  CHECK(doc.terms.size() == 2);
  CHECK(term_equal(doc.term("a"), f));
  CHECK(term_equal(doc.term("b"), compose(f, id(ob("X")))));

  // the second `;` cannot start a factor, so the first one ends the term
  // and the leftover one is a malformed declaration
  CHECK_THROWS_WITH_AS(parse_document("ob X; mor f : X -> X; term t = f ;;"),
                       doctest::Contains("col 35"), error);
  CHECK_THROWS_WITH_AS(parse_document("ob X; mor f : X -> X; term t = f ;;"),
                       doctest::Contains("expected ob, mor or term"), error);
}

TEST_CASE("composition binds looser than tensor and both nest to the right") {
  auto doc = parse_document(
      "ob X; mor f : X -> X; mor g : X -> X; mor h : X -> X;\n"
      "term a = f ; g * h;\n"
      "term b = f * g ; h;\n"
      "term c = (f ; g) * h;\n"
      "term d = f ; g ; h;\n"
      "term e = f * g * h;\n");
  auto f = gen("f", ob("X"), ob("X"));
  auto g = gen("g", ob("X"), ob("X"));
  auto h = gen("h", ob("X"), ob("X"));
  CHECK(term_equal(doc.term("a"), compose(f, tensor(g, h))));
  CHECK(term_equal(doc.term("b"), compose(tensor(f, g), h)));
  CHECK(term_equal(doc.term("c"), tensor(compose(f, g), h)));
  CHECK(term_equal(doc.term("d"), compose(f, compose(g, h))));
  CHECK(term_equal(doc.term("e"), tensor(f, tensor(g, h))));
  CHECK(!term_equal(doc.term("d"), compose(compose(f, g), h)));
}

TEST_CASE("every structural form and object expression parses") {
  auto doc = parse_document(
      "ob A; ob B;\n"
      "mor f : A -> B;\n"
      "mor e : I -> A * A;\n"
      "term t1 = id(A * B);\n"
      "term t2 = copy(B);\n"
      "term t3 = discard(A);\n"
      "term t4 = sym(A, B);\n"
      "term t5 = fbk[B](f * id(B));\n"
      "term t6 = id(I);\n"
      "term t7 = fbk[I](f);\n"
      "term t8 = id((A * B) * A);\n");
  auto f = gen("f", ob("A"), ob("B"));
  CHECK(term_equal(doc.term("t1"), id(ob_tensor(ob("A"), ob("B")))));
  CHECK(term_equal(doc.term("t2"), copy(ob("B"))));
  CHECK(term_equal(doc.term("t3"), discard(ob("A"))));
  CHECK(term_equal(doc.term("t4"), sym(ob("A"), ob("B"))));
  CHECK(term_equal(doc.term("t5"), feedback(ob("B"), tensor(f, id(ob("B"))))));
  CHECK(term_equal(doc.term("t6"), id(ob_unit())));
  CHECK(term_equal(doc.term("t7"), feedback(ob_unit(), f)));
  CHECK(term_equal(doc.term("t8"), id(ob_tensor(ob_tensor(ob("A"), ob("B")), ob("A")))));

  const auto& sig = doc.presentation.mor_gens.at("e");
  CHECK(flatten(sig.dom).empty());
  CHECK(flatten(sig.cod) == ObList{"A", "A"});
}

TEST_CASE("comments and blank lines are skipped") {
  auto doc = parse_document(
      "# a small document\n"
      "ob X;  # the only object\n"
      "\n"
      "mor f : X -> X;\n"
      "# term t = not parsed;\n"
      "term t = f;\n");
  CHECK(doc.presentation.ob_gens.size() == 1);
  CHECK(doc.terms.size() == 1);
}

TEST_CASE("printing a document reparses to an equal one") {
  auto doc = parse_document(
      "ob A; ob B;\n"
      "mor f : A -> B; mor g : B -> A; mor u : I -> B; mor w : A * B -> I;\n"
      "term t = copy(A) ; f * id(A) ; sym(B, A) ; w ; u;\n"
      "term s = fbk[A * B](sym(A * B, A * B));\n");
  std::string printed = document_to_string(doc);
  auto again = parse_document(printed);
  CHECK(document_equal(doc, again));
  CHECK(document_to_string(again) == printed);
  CHECK(!document_equal(doc, parse_document("ob A;")));
  auto other = parse_document("ob A; ob B; mor f : A -> B; term t = f;");
  CHECK(!document_equal(doc, other));
}

TEST_CASE("the term printer and the parser agree on random terms") {
  auto pres = testgen::small_presentation();
  std::string header =
      "ob A; ob B;\n"
      "mor f : A -> B;\n"
      "mor g : B -> A;\n"
      "mor h : A * B -> B;\n"
      "mor k : A -> B * B;\n";

  std::mt19937_64 rng(20260814);
  std::vector<TermPtr> expected;
  std::string text = header;
  for (int i = 0; i < 80; ++i) {
    int ops = static_cast<int>(rng() % 7);
    auto sample = testgen::random_term(pres, rng, ops, true);
    expected.push_back(sample.term);
    text += "term t" + std::to_string(i) + " = " + term_to_string(sample.term) + ";\n";
  }

  auto doc = parse_document(text);
  REQUIRE(doc.terms.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CAPTURE(i);
    CAPTURE(term_to_string(expected[i]));
    CHECK(term_equal(doc.terms[i].second, expected[i]));
    CHECK(term_to_string(doc.terms[i].second) == term_to_string(expected[i]));
  }

  std::string printed = document_to_string(doc);
  CHECK(document_equal(parse_document(printed), doc));
}

TEST_CASE("malformed documents fail with positions") {
  // name clashes
  CHECK_THROWS_WITH_AS(parse_document("ob X; ob X;"), doctest::Contains("E_DUPLICATE_NAME"),
                       error);
  CHECK_THROWS_WITH_AS(parse_document("ob X; mor X : X -> X;"),
                       doctest::Contains("E_DUPLICATE_NAME"), error);
  CHECK_THROWS_WITH_AS(parse_document("ob X; mor f : X -> X; term f = f;"),
                       doctest::Contains("E_DUPLICATE_NAME"), error);
  CHECK_THROWS_WITH_AS(parse_document("ob X; mor f : X -> X; term t = f; term t = f;"),
                       doctest::Contains("E_DUPLICATE_NAME"), error);

  // unresolved names
  CHECK_THROWS_WITH_AS(parse_document("ob X; mor f : X -> Y;"),
                       doctest::Contains("E_UNKNOWN_GENERATOR"), error);
  CHECK_THROWS_WITH_AS(parse_document("ob X;\nterm t = f;"),
                       doctest::Contains("E_UNKNOWN_GENERATOR"), error);
  CHECK_THROWS_WITH_AS(parse_document("ob X;\nterm t = f;"),
                       doctest::Contains("line 2 col 10: morphism `f` not declared"), error);

  // syntax
  CHECK_THROWS_WITH_AS(parse_document("ob X; mor f : X -> X; term t = ;"),
                       doctest::Contains("expected a morphism expression"), error);
  CHECK_THROWS_WITH_AS(parse_document("ob X; mor f : X - X;"), doctest::Contains("stray `-`"),
                       error);
  CHECK_THROWS_WITH_AS(parse_document("ob X; mor f : X X;"), doctest::Contains("expected `->`"),
                       error);
  CHECK_THROWS_WITH_AS(parse_document("ob X"), doctest::Contains("`;` after the declaration"),
                       error);
  CHECK_THROWS_WITH_AS(parse_document("ob X; @"), doctest::Contains("unexpected character `@`"),
                       error);
  CHECK_THROWS_WITH_AS(parse_document("ob X;\nmor f : X -> X;\nterm t = f @;\n"),
                       doctest::Contains("line 3"), error);
  CHECK_THROWS_WITH_AS(parse_document("ob copy;"), doctest::Contains("a name after `ob`"), error);
  CHECK_THROWS_WITH_AS(parse_document("ob I;"), doctest::Contains("a name after `ob`"), error);
  CHECK_THROWS_WITH_AS(parse_document("ob X; mor f : X -> X; term t = fbk(f);"),
                       doctest::Contains("expected `[`"), error);
  CHECK_THROWS_WITH_AS(parse_document("ob X; mor f : X -> X; term t = sym(X);"),
                       doctest::Contains("expected `,`"), error);
  CHECK_THROWS_WITH_AS(parse_document("ob X; mor f : X -> X; term t = (f;"),
                       doctest::Contains("expected `)`"), error);
}

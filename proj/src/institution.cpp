#include "catxai/institution.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "catxai/util.hpp"

namespace catxai::institution {

bool PropSignature::has(const std::string& s) const {
  return std::find(symbols.begin(), symbols.end(), s) != symbols.end();
}

// ---------------------------------------------------------------------------
// sentence construction and structure
// ---------------------------------------------------------------------------

namespace {
SentencePtr make(Sentence&& s) { return std::make_shared<const Sentence>(std::move(s)); }
}  // namespace

SentencePtr var(const std::string& name) { return make({VarSen{name}}); }
SentencePtr top() { return make({TopSen{}}); }
SentencePtr lnot(SentencePtr s) { return make({NotSen{std::move(s)}}); }
SentencePtr land(SentencePtr a, SentencePtr b) { return make({AndSen{std::move(a), std::move(b)}}); }
SentencePtr lor(SentencePtr a, SentencePtr b) { return make({OrSen{std::move(a), std::move(b)}}); }
SentencePtr implies(SentencePtr a, SentencePtr b) {
  return make({ImpliesSen{std::move(a), std::move(b)}});
}

bool sentence_equal(const SentencePtr& a, const SentencePtr& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{[&](const VarSen& v) { return v.name == std::get<VarSen>(b->node).name; },
                 [&](const TopSen&) { return true; },
                 [&](const NotSen& n) {
                   return sentence_equal(n.inner, std::get<NotSen>(b->node).inner);
                 },
                 [&](const AndSen& n) {
                   const auto& o = std::get<AndSen>(b->node);
                   return sentence_equal(n.left, o.left) && sentence_equal(n.right, o.right);
                 },
                 [&](const OrSen& n) {
                   const auto& o = std::get<OrSen>(b->node);
                   return sentence_equal(n.left, o.left) && sentence_equal(n.right, o.right);
                 },
                 [&](const ImpliesSen& n) {
                   const auto& o = std::get<ImpliesSen>(b->node);
                   return sentence_equal(n.left, o.left) && sentence_equal(n.right, o.right);
                 }},
      a->node);
}

int sentence_depth(const SentencePtr& s) {
  return std::visit(
      overloaded{[](const VarSen&) { return 1; }, [](const TopSen&) { return 1; },
                 [](const NotSen& n) { return 1 + sentence_depth(n.inner); },
                 [](const AndSen& n) {
                   return 1 + std::max(sentence_depth(n.left), sentence_depth(n.right));
                 },
                 [](const OrSen& n) {
                   return 1 + std::max(sentence_depth(n.left), sentence_depth(n.right));
                 },
                 [](const ImpliesSen& n) {
                   return 1 + std::max(sentence_depth(n.left), sentence_depth(n.right));
                 }},
      s->node);
}

// ---------------------------------------------------------------------------
// concrete syntax
// ---------------------------------------------------------------------------

namespace {

// precedence: -> is 1, | is 2, & is 3, ~ is 4, atoms are 5
int prec(const SentencePtr& s) {
  return std::visit(overloaded{[](const VarSen&) { return 5; }, [](const TopSen&) { return 5; },
                               [](const NotSen&) { return 4; }, [](const AndSen&) { return 3; },
                               [](const OrSen&) { return 2; },
                               [](const ImpliesSen&) { return 1; }},
                    s->node);
}

void print_sentence(std::ostream& os, const SentencePtr& s);

void print_child(std::ostream& os, const SentencePtr& child, int min_prec) {
  if (prec(child) < min_prec) {
    os << "(";
    print_sentence(os, child);
    os << ")";
  } else {
    print_sentence(os, child);
  }
}

void print_sentence(std::ostream& os, const SentencePtr& s) {
  std::visit(overloaded{[&](const VarSen& v) { os << v.name; }, [&](const TopSen&) { os << "T"; },
                        [&](const NotSen& n) {
                          os << "~";
                          print_child(os, n.inner, 4);
                        },
                        [&](const AndSen& n) {
                          // & and | print left-associated, so the right child
                          // needs parentheses at equal precedence
                          print_child(os, n.left, 3);
                          os << " & ";
                          print_child(os, n.right, 4);
                        },
                        [&](const OrSen& n) {
                          print_child(os, n.left, 2);
                          os << " | ";
                          print_child(os, n.right, 3);
                        },
                        [&](const ImpliesSen& n) {
                          print_child(os, n.left, 2);  // nested -> on the left needs parens
                          os << " -> ";
                          print_child(os, n.right, 1);
                        }},
             s->node);
}

struct SentenceParser {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  bool eat_arrow() {
    skip_ws();
    if (pos + 1 < text.size() && text[pos] == '-' && text[pos + 1] == '>') {
      pos += 2;
      return true;
    }
    return false;
  }

  [[noreturn]] void bad(const std::string& what) {
    fail(errc::parse_error, what + " at offset " + std::to_string(pos) + " in sentence '" + text + "'");
  }

  SentencePtr atom() {
    skip_ws();
    if (eat('(')) {
      auto s = imp();
      if (!eat(')')) bad("expected ')'");
      return s;
    }
    if (eat('~')) return lnot(atom());
    skip_ws();
    if (pos >= text.size()) bad("expected a sentence");
    if (!(std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      bad("expected a symbol");
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    std::string name = text.substr(start, pos - start);
    if (name == "T") return top();
    return var(name);
  }

  SentencePtr conj() {
    auto s = atom();
    while (eat('&')) s = land(std::move(s), atom());
    return s;
  }

  SentencePtr disj() {
    auto s = conj();
    while (eat('|')) s = lor(std::move(s), conj());
    return s;
  }

  SentencePtr imp() {
    auto s = disj();
    if (eat_arrow()) return implies(std::move(s), imp());
    return s;
  }
};

}  // namespace

std::string sentence_to_string(const SentencePtr& s) {
  std::ostringstream os;
  print_sentence(os, s);
  return os.str();
}

SentencePtr parse_sentence(const std::string& text) {
  SentenceParser p{text};
  auto s = p.imp();
  p.skip_ws();
  if (p.pos != text.size()) p.bad("trailing input");
  return s;
}

void check_wellformed(const SentencePtr& s, const PropSignature& sig) {
  std::visit(overloaded{[&](const VarSen& v) {
                          if (!sig.has(v.name))
                            fail(errc::symbol_mismatch,
                                 "symbol '" + v.name + "' is not in the signature");
                        },
                        [&](const TopSen&) {}, [&](const NotSen& n) { check_wellformed(n.inner, sig); },
                        [&](const AndSen& n) {
                          check_wellformed(n.left, sig);
                          check_wellformed(n.right, sig);
                        },
                        [&](const OrSen& n) {
                          check_wellformed(n.left, sig);
                          check_wellformed(n.right, sig);
                        },
                        [&](const ImpliesSen& n) {
                          check_wellformed(n.left, sig);
                          check_wellformed(n.right, sig);
                        }},
             s->node);
}

// ---------------------------------------------------------------------------
// signature morphisms, translation, reducts, satisfaction
// ---------------------------------------------------------------------------

void SignatureMorphism::validate() const {
  for (const auto& s : source.symbols) {
    auto it = map.find(s);
    if (it == map.end())
      fail(errc::symbol_not_in_source, "morphism misses source symbol '" + s + "'");
    if (!target.has(it->second))
      fail(errc::symbol_mismatch, "morphism target '" + it->second + "' is not in the target signature");
  }
}

SignatureMorphism identity_morphism(const PropSignature& sig) {
  SignatureMorphism rho{sig, sig, {}};
  for (const auto& s : sig.symbols) rho.map[s] = s;
  return rho;
}

SignatureMorphism compose_morphisms(const SignatureMorphism& first,
                                    const SignatureMorphism& second) {
  if (!(first.target == second.source))
    fail(errc::signature_mismatch, "morphisms do not compose: middle signatures differ");
  SignatureMorphism rho{first.source, second.target, {}};
  for (const auto& [s, mid] : first.map) {
    auto it = second.map.find(mid);
    if (it == second.map.end())
      fail(errc::symbol_not_in_source, "composite morphism misses symbol '" + mid + "'");
    rho.map[s] = it->second;
  }
  return rho;
}

SentencePtr sen_translate(const SignatureMorphism& rho, const SentencePtr& e) {
  return std::visit(
      overloaded{[&](const VarSen& v) {
                   auto it = rho.map.find(v.name);
                   if (it == rho.map.end())
                     fail(errc::symbol_not_in_source,
                          "symbol '" + v.name + "' has no image under the morphism");
                   return var(it->second);
                 },
                 [&](const TopSen&) { return top(); },
                 [&](const NotSen& n) { return lnot(sen_translate(rho, n.inner)); },
                 [&](const AndSen& n) {
                   return land(sen_translate(rho, n.left), sen_translate(rho, n.right));
                 },
                 [&](const OrSen& n) {
                   return lor(sen_translate(rho, n.left), sen_translate(rho, n.right));
                 },
                 [&](const ImpliesSen& n) {
                   return implies(sen_translate(rho, n.left), sen_translate(rho, n.right));
                 }},
      e->node);
}

bool Valuation::value(const std::string& symbol) const {
  for (std::size_t i = 0; i < sig.symbols.size(); ++i)
    if (sig.symbols[i] == symbol) return bits[i] != 0;
  fail(errc::signature_mismatch, "valuation has no symbol '" + symbol + "'");
}

Valuation mod_reduct(const SignatureMorphism& rho, const Valuation& target_model) {
  if (!(target_model.sig == rho.target))
    fail(errc::signature_mismatch, "model signature does not match the morphism target");
  Valuation m{rho.source, {}};
  for (const auto& s : rho.source.symbols) {
    auto it = rho.map.find(s);
    if (it == rho.map.end())
      fail(errc::symbol_not_in_source, "morphism misses source symbol '" + s + "'");
    m.bits.push_back(target_model.value(it->second) ? 1 : 0);
  }
  return m;
}

bool satisfies(const Valuation& m, const SentencePtr& e) {
  return std::visit(
      overloaded{[&](const VarSen& v) { return m.value(v.name); }, [&](const TopSen&) { return true; },
                 [&](const NotSen& n) { return !satisfies(m, n.inner); },
                 [&](const AndSen& n) { return satisfies(m, n.left) && satisfies(m, n.right); },
                 [&](const OrSen& n) { return satisfies(m, n.left) || satisfies(m, n.right); },
                 [&](const ImpliesSen& n) {
                   return !satisfies(m, n.left) || satisfies(m, n.right);
                 }},
      e->node);
}

bool check_satisfaction_condition(const SignatureMorphism& rho, const SentencePtr& e,
                                  const Valuation& target_model) {
  bool translated_side = satisfies(target_model, sen_translate(rho, e));
  bool reduct_side = satisfies(mod_reduct(rho, target_model), e);
  return translated_side == reduct_side;
}

// ---------------------------------------------------------------------------
// enumeration and the exhaustive sweep
// ---------------------------------------------------------------------------

std::vector<SentencePtr> enumerate_sentences(const PropSignature& sig, int max_depth) {
  std::vector<SentencePtr> atoms;
  for (const auto& s : sig.symbols) atoms.push_back(var(s));
  atoms.push_back(top());
  std::vector<std::vector<SentencePtr>> by_depth = {atoms};  // by_depth[d-1] = exactly depth d
  std::vector<SentencePtr> pool = atoms;
  for (int d = 2; d <= max_depth; ++d) {
    const auto& deepest = by_depth.back();
    std::size_t shallow_count = pool.size() - deepest.size();  // depth <= d-2
    std::vector<SentencePtr> fresh;
    for (const auto& s : deepest) fresh.push_back(lnot(s));
    auto binary = [&](const SentencePtr& a, const SentencePtr& b) {
      fresh.push_back(land(a, b));
      fresh.push_back(lor(a, b));
      fresh.push_back(implies(a, b));
    };
    // depth d needs at least one operand of depth exactly d-1
    for (const auto& a : deepest)
      for (const auto& b : pool) binary(a, b);
    for (std::size_t i = 0; i < shallow_count; ++i)
      for (const auto& b : deepest) binary(pool[i], b);
    pool.insert(pool.end(), fresh.begin(), fresh.end());
    by_depth.push_back(std::move(fresh));
  }
  return pool;
}

std::vector<Valuation> enumerate_valuations(const PropSignature& sig) {
  std::vector<Valuation> out;
  std::size_t n = sig.symbols.size();
  for (std::size_t mask = 0; mask < (1ull << n); ++mask) {
    Valuation m{sig, std::vector<char>(n, 0)};
    for (std::size_t i = 0; i < n; ++i) m.bits[i] = (mask >> i) & 1;
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<SignatureMorphism> enumerate_morphisms(const PropSignature& source,
                                                   const PropSignature& target) {
  std::vector<SignatureMorphism> out;
  std::size_t k = source.symbols.size(), m = target.symbols.size();
  if (k > 0 && m == 0) return out;  // no total maps into an empty vocabulary
  std::size_t count = 1;
  for (std::size_t i = 0; i < k; ++i) count *= m;
  for (std::size_t idx = 0; idx < std::max<std::size_t>(count, 1); ++idx) {
    SignatureMorphism rho{source, target, {}};
    std::size_t v = idx;
    for (std::size_t i = 0; i < k; ++i) {
      rho.map[source.symbols[i]] = target.symbols[v % m];
      v /= m;
    }
    out.push_back(std::move(rho));
  }
  return out;
}

namespace {

PropSignature letters(int n, char base) {
  PropSignature sig;
  for (int i = 0; i < n; ++i) sig.symbols.push_back(std::string(1, static_cast<char>(base + i)));
  return sig;
}

SweepStats check_one_morphism(const SignatureMorphism& rho,
                              const std::vector<SentencePtr>& sentences,
                              const std::vector<Valuation>& models) {
  SweepStats st;
  // translate each sentence once, then sweep the models; recomputing the
  // reduct per (model, sentence) would swamp the runtime
  std::vector<Valuation> reducts;
  reducts.reserve(models.size());
  for (const auto& m : models) reducts.push_back(mod_reduct(rho, m));
  for (const auto& e : sentences) {
    SentencePtr te = sen_translate(rho, e);
    for (std::size_t i = 0; i < models.size(); ++i) {
      bool lhs = satisfies(models[i], te);
      bool rhs = satisfies(reducts[i], e);
      ++st.checked;
      st.failures += (lhs != rhs);
    }
  }
  return st;
}

SweepStats sweep_morphisms(const std::vector<SignatureMorphism>& rhos,
                           const std::vector<SentencePtr>& sentences,
                           const std::vector<Valuation>& models, int threads) {
  unsigned long long checked = 0, failures = 0;
  const std::int64_t n = static_cast<std::int64_t>(rhos.size());
  if (threads == 1) {
    for (std::int64_t i = 0; i < n; ++i) {
      auto st = check_one_morphism(rhos[static_cast<std::size_t>(i)], sentences, models);
      checked += st.checked;
      failures += st.failures;
    }
  } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(+ : checked, failures) \
    num_threads(threads > 0 ? threads : omp_get_max_threads())
#endif
    for (std::int64_t i = 0; i < n; ++i) {
      auto st = check_one_morphism(rhos[static_cast<std::size_t>(i)], sentences, models);
      checked += st.checked;
      failures += st.failures;
    }
  }
  return {checked, failures};
}

}  // namespace

SweepStats satisfaction_sweep(int max_symbols, int max_depth, int threads) {
  SweepStats total;
  for (int k = 0; k <= max_symbols; ++k) {
    PropSignature source = letters(k, 'a');
    auto sentences = enumerate_sentences(source, max_depth);
    for (int m = 0; m <= max_symbols; ++m) {
      PropSignature target = letters(m, 'p');
      auto rhos = enumerate_morphisms(source, target);
      if (rhos.empty()) continue;
      auto models = enumerate_valuations(target);
      auto st = sweep_morphisms(rhos, sentences, models, threads);
      total.checked += st.checked;
      total.failures += st.failures;
    }
  }
  return total;
}

SweepStats satisfaction_check(const SignatureMorphism& rho, int max_depth, int threads) {
  rho.validate();
  auto sentences = enumerate_sentences(rho.source, max_depth);
  auto models = enumerate_valuations(rho.target);
  return sweep_morphisms({rho}, sentences, models, threads == 1 ? 1 : threads);
}

// ---------------------------------------------------------------------------
// saliency institution
// ---------------------------------------------------------------------------

bool saliency_satisfies(const SaliencyModel& m, const SaliencySentence& e) {
  if (!(m.sig == e.sig))
    fail(errc::signature_mismatch, "saliency model and sentence use different signatures");
  for (const auto& p : e.pixels)
    if (std::find(m.pixels.begin(), m.pixels.end(), p) == m.pixels.end()) return false;
  return true;
}

ExplanationKind classify_explanation(const ExplanationPayload& payload) {
  return std::visit(
      overloaded{[](const UnitPayload&) -> ExplanationKind {
                   fail(errc::unrecognized_payload,
                        "a unit payload carries no explanation to classify");
                 },
                 [](const std::vector<SentencePtr>&) { return ExplanationKind::syntactic; },
                 [](const Valuation&) { return ExplanationKind::semantic; },
                 [](const SaliencyModel&) { return ExplanationKind::semantic; }},
      payload);
}

// ---------------------------------------------------------------------------
// file formats
// ---------------------------------------------------------------------------

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

PropSignature read_signature(std::istream& in) {
  PropSignature sig;
  std::string line;
  while (std::getline(in, line)) {
    std::string s = trimmed(line);
    if (s.empty() || s[0] == '#') continue;
    if (sig.has(s)) fail(errc::duplicate_name, "signature symbol '" + s + "' repeats");
    sig.symbols.push_back(s);
  }
  return sig;
}

SignatureMorphism read_morphism(std::istream& in, const PropSignature& target) {
  SignatureMorphism rho{{}, target, {}};
  std::string line;
  while (std::getline(in, line)) {
    std::string s = trimmed(line);
    if (s.empty() || s[0] == '#') continue;
    auto eq = s.find('=');
    if (eq == std::string::npos)
      fail(errc::parse_error, "morphism line '" + s + "' is not of the form src=dst");
    std::string src = trimmed(s.substr(0, eq));
    std::string dst = trimmed(s.substr(eq + 1));
    if (src.empty() || dst.empty())
      fail(errc::parse_error, "morphism line '" + s + "' is not of the form src=dst");
    if (rho.map.count(src)) fail(errc::duplicate_name, "morphism maps '" + src + "' twice");
    rho.source.symbols.push_back(src);
    rho.map[src] = dst;
  }
  rho.validate();
  return rho;
}

}  // namespace catxai::institution

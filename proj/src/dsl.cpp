#include "catxai/dsl.hpp"

#include <cctype>
#include <string>
#include <vector>

#include "catxai/errors.hpp"

namespace catxai::dsl {

using diagram::ObPtr;
using diagram::TermPtr;

bool DslDocument::has_term(const std::string& name) const {
  for (const auto& [n, t] : terms)
    if (n == name) return true;
  return false;
}

const TermPtr& DslDocument::term(const std::string& name) const {
  for (const auto& [n, t] : terms)
    if (n == name) return t;
  fail(errc::usage_error, "no term named `" + name + "` in the document");
}

namespace {

enum class Tok {
  ident,
  kw_ob,
  kw_mor,
  kw_term,
  kw_id,
  kw_copy,
  kw_discard,
  kw_sym,
  kw_fbk,
  kw_unit,
  semi,
  star,
  colon,
  arrow,
  equals,
  lparen,
  rparen,
  lbracket,
  rbracket,
  comma,
  eof,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line = 1, col = 1;
};

[[noreturn]] void fail_at(const Token& t, const std::string& msg) {
  fail(errc::parse_error,
       "line " + std::to_string(t.line) + " col " + std::to_string(t.col) + ": " + msg);
}

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto bump = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      bump();
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') bump();
      continue;
    }
    Token tok{Tok::eof, {}, line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        word += text[i];
        bump();
      }
      tok.text = word;
      if (word == "ob") tok.kind = Tok::kw_ob;
      else if (word == "mor") tok.kind = Tok::kw_mor;
      else if (word == "term") tok.kind = Tok::kw_term;
      else if (word == "id") tok.kind = Tok::kw_id;
      else if (word == "copy") tok.kind = Tok::kw_copy;
      else if (word == "discard") tok.kind = Tok::kw_discard;
      else if (word == "sym") tok.kind = Tok::kw_sym;
      else if (word == "fbk") tok.kind = Tok::kw_fbk;
      else if (word == "I") tok.kind = Tok::kw_unit;
      else tok.kind = Tok::ident;
      out.push_back(tok);
      continue;
    }
    if (c == '-') {
      if (i + 1 < text.size() && text[i + 1] == '>') {
        tok.kind = Tok::arrow;
        tok.text = "->";
        bump(2);
        out.push_back(tok);
        continue;
      }
      fail_at(tok, "stray `-` (did you mean `->`?)");
    }
    switch (c) {
      case ';': tok.kind = Tok::semi; break;
      case '*': tok.kind = Tok::star; break;
      case ':': tok.kind = Tok::colon; break;
      case '=': tok.kind = Tok::equals; break;
      case '(': tok.kind = Tok::lparen; break;
      case ')': tok.kind = Tok::rparen; break;
      case '[': tok.kind = Tok::lbracket; break;
      case ']': tok.kind = Tok::rbracket; break;
      case ',': tok.kind = Tok::comma; break;
      default: fail_at(tok, std::string("unexpected character `") + c + "`");
    }
    tok.text = std::string(1, c);
    bump();
    out.push_back(tok);
  }
  out.push_back({Tok::eof, "<end of input>", line, col});
  return out;
}

struct Parser {
  std::vector<Token> toks;
  std::size_t pos = 0;
  DslDocument doc;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t at = pos + ahead;
    return toks[at < toks.size() ? at : toks.size() - 1];
  }
  const Token& next() { return toks[pos < toks.size() - 1 ? pos++ : pos]; }
  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail_at(peek(), std::string("expected ") + what);
    return next();
  }

  ObPtr parse_ob_factor() {
    const Token& t = peek();
    if (t.kind == Tok::kw_unit) {
      next();
      return diagram::ob_unit();
    }
    if (t.kind == Tok::ident) {
      next();
      return diagram::ob(t.text);
    }
    if (t.kind == Tok::lparen) {
      next();
      ObPtr inner = parse_obexpr();
      expect(Tok::rparen, "`)`");
      return inner;
    }
    fail_at(t, "expected an object expression");
  }

  ObPtr parse_obexpr() {
    ObPtr left = parse_ob_factor();
    if (peek().kind == Tok::star) {
      next();
      return diagram::ob_tensor(left, parse_obexpr());
    }
    return left;
  }

  TermPtr parse_mor_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::ident: {
        next();
        auto found = doc.presentation.mor_gens.find(t.text);
        if (found == doc.presentation.mor_gens.end())
          fail(errc::unknown_generator, "line " + std::to_string(t.line) + " col " +
                                            std::to_string(t.col) + ": morphism `" + t.text +
                                            "` not declared");
        return diagram::gen(t.text, found->second.dom, found->second.cod);
      }
      case Tok::kw_id: {
        next();
        expect(Tok::lparen, "`(`");
        ObPtr ob = parse_obexpr();
        expect(Tok::rparen, "`)`");
        return diagram::id(ob);
      }
      case Tok::kw_copy: {
        next();
        expect(Tok::lparen, "`(`");
        ObPtr ob = parse_obexpr();
        expect(Tok::rparen, "`)`");
        return diagram::copy(ob);
      }
      case Tok::kw_discard: {
        next();
        expect(Tok::lparen, "`(`");
        ObPtr ob = parse_obexpr();
        expect(Tok::rparen, "`)`");
        return diagram::discard(ob);
      }
      case Tok::kw_sym: {
        next();
        expect(Tok::lparen, "`(`");
        ObPtr a = parse_obexpr();
        expect(Tok::comma, "`,`");
        ObPtr b = parse_obexpr();
        expect(Tok::rparen, "`)`");
        return diagram::sym(a, b);
      }
      case Tok::kw_fbk: {
        next();
        expect(Tok::lbracket, "`[`");
        ObPtr state = parse_obexpr();
        expect(Tok::rbracket, "`]`");
        expect(Tok::lparen, "`(`");
        TermPtr inner = parse_morexpr();
        expect(Tok::rparen, "`)`");
        return diagram::feedback(state, inner);
      }
      case Tok::lparen: {
        next();
        TermPtr inner = parse_morexpr();
        expect(Tok::rparen, "`)`");
        return inner;
      }
      default: fail_at(t, "expected a morphism expression");
    }
  }

  static bool starts_mor_factor(Tok kind) {
    switch (kind) {
      case Tok::ident:
      case Tok::kw_id:
      case Tok::kw_copy:
      case Tok::kw_discard:
      case Tok::kw_sym:
      case Tok::kw_fbk:
      case Tok::lparen: return true;
      default: return false;
    }
  }

  TermPtr parse_mor_tensor() {
    TermPtr left = parse_mor_atom();
    if (peek().kind == Tok::star) {
      next();
      return diagram::tensor(left, parse_mor_tensor());
    }
    return left;
  }

  // a `;` continues the composite only when a factor follows; otherwise it
  // is the declaration terminator and stays unconsumed
  TermPtr parse_morexpr() {
    TermPtr left = parse_mor_tensor();
    if (peek().kind == Tok::semi && starts_mor_factor(peek(1).kind)) {
      next();
      return diagram::compose(left, parse_morexpr());
    }
    return left;
  }

  void parse_decl() {
    const Token& t = peek();
    if (t.kind == Tok::kw_ob) {
      next();
      const Token& name = expect(Tok::ident, "a name after `ob`");
      doc.presentation.add_ob(name.text);
    } else if (t.kind == Tok::kw_mor) {
      next();
      const Token& name = expect(Tok::ident, "a name after `mor`");
      expect(Tok::colon, "`:`");
      ObPtr dom = parse_obexpr();
      expect(Tok::arrow, "`->`");
      ObPtr cod = parse_obexpr();
      doc.presentation.add_mor(name.text, dom, cod);
    } else if (t.kind == Tok::kw_term) {
      next();
      Token name = expect(Tok::ident, "a name after `term`");
      expect(Tok::equals, "`=`");
      TermPtr body = parse_morexpr();
      if (doc.presentation.has_ob(name.text) || doc.presentation.has_mor(name.text) ||
          doc.has_term(name.text))
        fail(errc::duplicate_name, "name '" + name.text + "' redeclared");
      doc.terms.emplace_back(name.text, body);
    } else {
      fail_at(t, "expected ob, mor or term");
    }
    expect(Tok::semi, "`;` after the declaration");
  }

  DslDocument run() {
    while (peek().kind != Tok::eof) parse_decl();
    return std::move(doc);
  }
};

}  // namespace

DslDocument parse_document(const std::string& text) {
  Parser p;
  p.toks = tokenize(text);
  return p.run();
}

std::string document_to_string(const DslDocument& doc) {
  std::string out;
  for (const auto& name : doc.presentation.ob_gens) out += "ob " + name + ";\n";
  for (const auto& [name, sig] : doc.presentation.mor_gens)
    out += "mor " + name + " : " + diagram::ob_to_string(sig.dom) + " -> " +
           diagram::ob_to_string(sig.cod) + ";\n";
  for (const auto& [name, body] : doc.terms)
    out += "term " + name + " = " + diagram::term_to_string(body) + ";\n";
  return out;
}

bool document_equal(const DslDocument& a, const DslDocument& b) {
  if (a.presentation.ob_gens != b.presentation.ob_gens) return false;
  if (a.presentation.mor_gens.size() != b.presentation.mor_gens.size()) return false;
  for (const auto& [name, sig] : a.presentation.mor_gens) {
    auto found = b.presentation.mor_gens.find(name);
    if (found == b.presentation.mor_gens.end()) return false;
    if (!diagram::ob_equal(sig.dom, found->second.dom)) return false;
    if (!diagram::ob_equal(sig.cod, found->second.cod)) return false;
  }
  if (a.terms.size() != b.terms.size()) return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    if (a.terms[i].first != b.terms[i].first) return false;
    if (!diagram::term_equal(a.terms[i].second, b.terms[i].second)) return false;
  }
  return true;
}

}  // namespace catxai::dsl

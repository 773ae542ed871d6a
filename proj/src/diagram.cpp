#include "catxai/diagram.hpp"

#include <algorithm>
#include <sstream>

#include "catxai/util.hpp"

namespace catxai::diagram {

// ---------------------------------------------------------------------------
// objects
// ---------------------------------------------------------------------------

ObPtr ob_unit() {
  static const ObPtr u = std::make_shared<ObExpr>(ObExpr{ObUnit{}});
  return u;
}

ObPtr ob(const std::string& name) { return std::make_shared<ObExpr>(ObExpr{ObGen{name}}); }

ObPtr ob_tensor(ObPtr a, ObPtr b) {
  return std::make_shared<ObExpr>(ObExpr{ObTensor{std::move(a), std::move(b)}});
}

ObPtr ob_tensor(std::initializer_list<ObPtr> parts) {
  if (parts.size() == 0) return ob_unit();
  auto it = parts.end();
  ObPtr acc = *--it;
  while (it != parts.begin()) acc = ob_tensor(*--it, acc);
  return acc;
}

static void flatten_into(const ObPtr& e, ObList& out) {
  std::visit(overloaded{[&](const ObUnit&) {},
                        [&](const ObGen& g) { out.push_back(g.name); },
                        [&](const ObTensor& t) {
                          flatten_into(t.left, out);
                          flatten_into(t.right, out);
                        }},
             e->node);
}

ObList flatten(const ObPtr& e) {
  ObList out;
  flatten_into(e, out);
  return out;
}

bool ob_equal(const ObPtr& a, const ObPtr& b) { return flatten(a) == flatten(b); }

static void ob_print(const ObPtr& e, std::ostream& os, bool parens_tensor) {
  std::visit(overloaded{[&](const ObUnit&) { os << "I"; },
                        [&](const ObGen& g) { os << g.name; },
                        [&](const ObTensor& t) {
                          if (parens_tensor) os << "(";
                          ob_print(t.left, os, true);
                          os << " * ";
                          ob_print(t.right, os, false);
                          if (parens_tensor) os << ")";
                        }},
             e->node);
}

std::string ob_to_string(const ObPtr& e) {
  std::ostringstream os;
  ob_print(e, os, false);
  return os.str();
}

std::string ob_to_string(const ObList& atoms) {
  if (atoms.empty()) return "I";
  std::string s;
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (i) s += " * ";
    s += atoms[i];
  }
  return s;
}

ObPtr ob_of_list(const ObList& atoms) {
  if (atoms.empty()) return ob_unit();
  ObPtr acc = ob(atoms.back());
  for (size_t i = atoms.size() - 1; i-- > 0;) acc = ob_tensor(ob(atoms[i]), acc);
  return acc;
}

// ---------------------------------------------------------------------------
// terms
// ---------------------------------------------------------------------------

static TermPtr mk(MorTerm&& t) { return std::make_shared<MorTerm>(std::move(t)); }

TermPtr gen(const std::string& name, ObPtr dom, ObPtr cod) {
  return mk(MorTerm{GenMor{name, std::move(dom), std::move(cod)}});
}
TermPtr id(ObPtr o) { return mk(MorTerm{IdMor{std::move(o)}}); }
TermPtr compose(TermPtr f, TermPtr g) {
  return mk(MorTerm{ComposeMor{std::move(f), std::move(g)}});
}
TermPtr tensor(TermPtr f, TermPtr g) { return mk(MorTerm{TensorMor{std::move(f), std::move(g)}}); }

static TermPtr chain(std::initializer_list<TermPtr> fs, TermPtr (*op)(TermPtr, TermPtr)) {
  auto it = fs.end();
  TermPtr acc = *--it;
  while (it != fs.begin()) acc = op(*--it, acc);
  return acc;
}

TermPtr compose(std::initializer_list<TermPtr> fs) { return chain(fs, compose); }
TermPtr tensor(std::initializer_list<TermPtr> fs) { return chain(fs, tensor); }

TermPtr sym(ObPtr a, ObPtr b) { return mk(MorTerm{SymMor{std::move(a), std::move(b)}}); }
TermPtr copy(ObPtr o) { return mk(MorTerm{CopyMor{std::move(o)}}); }
TermPtr discard(ObPtr o) { return mk(MorTerm{DiscardMor{std::move(o)}}); }
TermPtr feedback(ObPtr state, TermPtr inner) {
  return mk(MorTerm{FeedbackMor{std::move(state), std::move(inner)}});
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const GenMor& x) {
            const auto& y = std::get<GenMor>(b->node);
            return x.name == y.name && ob_equal(x.dom, y.dom) && ob_equal(x.cod, y.cod);
          },
          [&](const IdMor& x) { return ob_equal(x.ob, std::get<IdMor>(b->node).ob); },
          [&](const ComposeMor& x) {
            const auto& y = std::get<ComposeMor>(b->node);
            return term_equal(x.first, y.first) && term_equal(x.second, y.second);
          },
          [&](const TensorMor& x) {
            const auto& y = std::get<TensorMor>(b->node);
            return term_equal(x.left, y.left) && term_equal(x.right, y.right);
          },
          [&](const SymMor& x) {
            const auto& y = std::get<SymMor>(b->node);
            return ob_equal(x.a, y.a) && ob_equal(x.b, y.b);
          },
          [&](const CopyMor& x) { return ob_equal(x.ob, std::get<CopyMor>(b->node).ob); },
          [&](const DiscardMor& x) { return ob_equal(x.ob, std::get<DiscardMor>(b->node).ob); },
          [&](const FeedbackMor& x) {
            const auto& y = std::get<FeedbackMor>(b->node);
            return ob_equal(x.state, y.state) && term_equal(x.inner, y.inner);
          }},
      a->node);
}

bool has_feedback(const TermPtr& t) {
  return std::visit(overloaded{[](const FeedbackMor&) { return true; },
                               [](const ComposeMor& c) {
                                 return has_feedback(c.first) || has_feedback(c.second);
                               },
                               [](const TensorMor& c) {
                                 return has_feedback(c.left) || has_feedback(c.right);
                               },
                               [](const auto&) { return false; }},
                    t->node);
}

// precedence: ';' binds looser than '*'; both parse right-nested, so left-nested
// subtrees get explicit parens to keep print/parse a structural round trip
namespace {
enum class Prec { seq, ten, atom };

void term_print(const TermPtr& t, std::ostream& os, Prec ctx);

void print_child(const TermPtr& t, std::ostream& os, Prec ctx, bool force_parens) {
  if (force_parens) {
    os << "(";
    term_print(t, os, Prec::seq);
    os << ")";
  } else {
    term_print(t, os, ctx);
  }
}

void term_print(const TermPtr& t, std::ostream& os, Prec ctx) {
  std::visit(
      overloaded{
          [&](const GenMor& g) { os << g.name; },
          [&](const IdMor& m) { os << "id(" << ob_to_string(m.ob) << ")"; },
          [&](const ComposeMor& c) {
            bool parens = ctx != Prec::seq;
            if (parens) os << "(";
            print_child(c.first, os, Prec::ten, std::holds_alternative<ComposeMor>(c.first->node));
            os << " ; ";
            term_print(c.second, os, Prec::seq);
            if (parens) os << ")";
          },
          [&](const TensorMor& c) {
            bool parens = ctx == Prec::atom;
            if (parens) os << "(";
            print_child(c.left, os, Prec::atom, false);
            os << " * ";
            print_child(c.right, os, Prec::ten, false);
            if (parens) os << ")";
          },
          [&](const SymMor& s) {
            os << "sym(" << ob_to_string(s.a) << ", " << ob_to_string(s.b) << ")";
          },
          [&](const CopyMor& m) { os << "copy(" << ob_to_string(m.ob) << ")"; },
          [&](const DiscardMor& m) { os << "discard(" << ob_to_string(m.ob) << ")"; },
          [&](const FeedbackMor& f) {
            os << "fbk[" << ob_to_string(f.state) << "](";
            term_print(f.inner, os, Prec::seq);
            os << ")";
          }},
      t->node);
}
}  // namespace

std::string term_to_string(const TermPtr& t) {
  std::ostringstream os;
  term_print(t, os, Prec::seq);
  return os.str();
}

// ---------------------------------------------------------------------------
// presentations
// ---------------------------------------------------------------------------

bool Presentation::has_ob(const std::string& name) const {
  return std::find(ob_gens.begin(), ob_gens.end(), name) != ob_gens.end();
}

bool Presentation::has_mor(const std::string& name) const { return mor_gens.count(name) != 0; }

void Presentation::add_ob(const std::string& name) {
  if (has_ob(name) || has_mor(name)) fail(errc::duplicate_name, "generator '" + name + "' redeclared");
  ob_gens.push_back(name);
}

void Presentation::add_mor(const std::string& name, ObPtr dom, ObPtr cod) {
  if (has_ob(name) || has_mor(name)) fail(errc::duplicate_name, "generator '" + name + "' redeclared");
  validate_ob_expr(dom);
  validate_ob_expr(cod);
  mor_gens.emplace(name, MorSig{std::move(dom), std::move(cod)});
}

void Presentation::validate_ob_expr(const ObPtr& e) const {
  for (const auto& atom : flatten(e))
    if (!has_ob(atom)) fail(errc::unknown_generator, "object generator '" + atom + "' not declared");
}

// ---------------------------------------------------------------------------
// typechecking
// ---------------------------------------------------------------------------

namespace {

std::string path_str(const std::vector<int>& path) {
  if (path.empty()) return "root";
  std::string s;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) s += ".";
    s += std::to_string(path[i]);
  }
  return s;
}

// true when `whole` ends with `suffix`
bool ends_with(const ObList& whole, const ObList& suffix) {
  if (suffix.size() > whole.size()) return false;
  return std::equal(suffix.begin(), suffix.end(), whole.end() - suffix.size());
}

MorType check(const TermPtr& t, const Presentation& pres, std::vector<int>& path) {
  return std::visit(
      overloaded{
          [&](const GenMor& g) -> MorType {
            auto it = pres.mor_gens.find(g.name);
            if (it == pres.mor_gens.end())
              fail(errc::unknown_generator,
                   "morphism generator '" + g.name + "' not declared (at " + path_str(path) + ")");
            if (!ob_equal(g.dom, it->second.dom) || !ob_equal(g.cod, it->second.cod))
              fail(errc::generator_mismatch,
                   "generator '" + g.name + "' used at " + ob_to_string(flatten(g.dom)) + " -> " +
                       ob_to_string(flatten(g.cod)) + " but declared " +
                       ob_to_string(flatten(it->second.dom)) + " -> " +
                       ob_to_string(flatten(it->second.cod)));
            return {flatten(g.dom), flatten(g.cod)};
          },
          [&](const IdMor& m) -> MorType {
            pres.validate_ob_expr(m.ob);
            auto a = flatten(m.ob);
            return {a, a};
          },
          [&](const ComposeMor& c) -> MorType {
            path.push_back(0);
            MorType lt = check(c.first, pres, path);
            path.back() = 1;
            MorType rt = check(c.second, pres, path);
            path.pop_back();
            if (lt.cod != rt.dom)
              fail(errc::composition_type_mismatch,
                   "composition mismatch at " + path_str(path) + ": left produces " +
                       ob_to_string(lt.cod) + ", right consumes " + ob_to_string(rt.dom));
            return {lt.dom, rt.cod};
          },
          [&](const TensorMor& c) -> MorType {
            path.push_back(0);
            MorType lt = check(c.left, pres, path);
            path.back() = 1;
            MorType rt = check(c.right, pres, path);
            path.pop_back();
            ObList dom = lt.dom, cod = lt.cod;
            dom.insert(dom.end(), rt.dom.begin(), rt.dom.end());
            cod.insert(cod.end(), rt.cod.begin(), rt.cod.end());
            return {dom, cod};
          },
          [&](const SymMor& s) -> MorType {
            pres.validate_ob_expr(s.a);
            pres.validate_ob_expr(s.b);
            auto a = flatten(s.a), b = flatten(s.b);
            ObList dom = a, cod = b;
            dom.insert(dom.end(), b.begin(), b.end());
            cod.insert(cod.end(), a.begin(), a.end());
            return {dom, cod};
          },
          [&](const CopyMor& m) -> MorType {
            pres.validate_ob_expr(m.ob);
            auto a = flatten(m.ob);
            ObList cod = a;
            cod.insert(cod.end(), a.begin(), a.end());
            return {a, cod};
          },
          [&](const DiscardMor& m) -> MorType {
            pres.validate_ob_expr(m.ob);
            return {flatten(m.ob), {}};
          },
          [&](const FeedbackMor& f) -> MorType {
            pres.validate_ob_expr(f.state);
            auto s = flatten(f.state);
            path.push_back(0);
            MorType it = check(f.inner, pres, path);
            path.pop_back();
            if (!ends_with(it.dom, s) || !ends_with(it.cod, s))
              fail(errc::feedback_shape_error,
                   "feedback at " + path_str(path) + " over state " + ob_to_string(s) +
                       " needs inner type of shape X * " + ob_to_string(s) + " -> Y * " +
                       ob_to_string(s) + ", got " + ob_to_string(it.dom) + " -> " +
                       ob_to_string(it.cod));
            return {ObList(it.dom.begin(), it.dom.end() - s.size()),
                    ObList(it.cod.begin(), it.cod.end() - s.size())};
          }},
      t->node);
}

}  // namespace

MorType typecheck(const TermPtr& t, const Presentation& pres) {
  std::vector<int> path;
  return check(t, pres, path);
}

// ---------------------------------------------------------------------------
// normalization
// ---------------------------------------------------------------------------

namespace {

void collect_compose(const TermPtr& t, std::vector<TermPtr>& out) {
  if (const auto* c = std::get_if<ComposeMor>(&t->node)) {
    collect_compose(c->first, out);
    collect_compose(c->second, out);
  } else {
    out.push_back(t);
  }
}

void collect_tensor(const TermPtr& t, std::vector<TermPtr>& out) {
  if (const auto* c = std::get_if<TensorMor>(&t->node)) {
    collect_tensor(c->left, out);
    collect_tensor(c->right, out);
  } else {
    out.push_back(t);
  }
}

TermPtr rebuild(std::vector<TermPtr> parts, TermPtr (*op)(TermPtr, TermPtr)) {
  TermPtr acc = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;) acc = op(parts[i], acc);
  return acc;
}

bool is_identity(const TermPtr& t) { return std::holds_alternative<IdMor>(t->node); }

bool is_unit_identity(const TermPtr& t) {
  const auto* m = std::get_if<IdMor>(&t->node);
  return m && flatten(m->ob).empty();
}

}  // namespace

TermPtr normalize(const TermPtr& t) {
  return std::visit(
      overloaded{
          [&](const ComposeMor& c) -> TermPtr {
            std::vector<TermPtr> parts;
            collect_compose(normalize(c.first), parts);
            collect_compose(normalize(c.second), parts);
            std::vector<TermPtr> kept;
            TermPtr dropped_id;
            for (auto& n : parts) {
              if (is_identity(n))
                dropped_id = n;
              else
                kept.push_back(n);
            }
            if (kept.empty()) return dropped_id;
            return rebuild(std::move(kept), compose);
          },
          [&](const TensorMor& c) -> TermPtr {
            std::vector<TermPtr> parts;
            collect_tensor(normalize(c.left), parts);
            collect_tensor(normalize(c.right), parts);
            std::vector<TermPtr> kept;
            TermPtr dropped_unit;
            for (auto& n : parts) {
              if (is_unit_identity(n))
                dropped_unit = n;
              else
                kept.push_back(n);
            }
            if (kept.empty()) return dropped_unit;
            return rebuild(std::move(kept), tensor);
          },
          [&](const FeedbackMor& f) -> TermPtr { return feedback(f.state, normalize(f.inner)); },
          [&](const auto&) -> TermPtr { return t; }},
      t->node);
}

// ---------------------------------------------------------------------------
// error tags
// ---------------------------------------------------------------------------

}  // namespace catxai::diagram

namespace catxai {

const char* errc_tag(errc c) {
  switch (c) {
    case errc::parse_error: return "E_PARSE";
    case errc::usage_error: return "E_USAGE";
    case errc::duplicate_name: return "E_DUPLICATE_NAME";
    case errc::unknown_generator: return "E_UNKNOWN_GENERATOR";
    case errc::generator_mismatch: return "E_GENERATOR_MISMATCH";
    case errc::composition_type_mismatch: return "E_COMPOSITION_TYPE_MISMATCH";
    case errc::feedback_shape_error: return "E_FEEDBACK_SHAPE";
    case errc::feedback_not_supported: return "E_FEEDBACK_NOT_SUPPORTED";
    case errc::type_mismatch: return "E_TYPE_MISMATCH";
    case errc::carrier_mismatch: return "E_CARRIER_MISMATCH";
    case errc::state_shape_error: return "E_STATE_SHAPE";
    case errc::missing_assignment: return "E_MISSING_ASSIGNMENT";
    case errc::symbol_mismatch: return "E_SYMBOL_MISMATCH";
    case errc::dimension_mismatch: return "E_DIMENSION_MISMATCH";
    case errc::signature_mismatch: return "E_SIGNATURE_MISMATCH";
    case errc::symbol_not_in_source: return "E_SYMBOL_NOT_IN_SOURCE";
    case errc::unrecognized_payload: return "E_UNRECOGNIZED_PAYLOAD";
    case errc::ambiguous_roles: return "E_AMBIGUOUS_ROLES";
    case errc::io_error: return "E_IO";
  }
  return "E_UNKNOWN";
}

}  // namespace catxai

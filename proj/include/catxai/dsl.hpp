#pragma once

#include <string>
#include <utility>
#include <vector>

#include "catxai/diagram.hpp"

namespace catxai::dsl {

// a parsed source file: declarations feed the presentation, terms stay in
// declaration order. Terms are not typechecked here; `check` does that
struct DslDocument {
  diagram::Presentation presentation;
  std::vector<std::pair<std::string, diagram::TermPtr>> terms;

  bool has_term(const std::string& name) const;
  const diagram::TermPtr& term(const std::string& name) const;
};

// grammar: (decl ';')* with decl = ob NAME | mor NAME : ob -> ob
// | term NAME = morexpr; `;` binds looser than `*` and also terminates a
// declaration (a `;` not followed by a morphism factor ends the term).
// `#` starts a line comment
DslDocument parse_document(const std::string& text);

// obs, then mors, then terms; reparses to an equal document
std::string document_to_string(const DslDocument& doc);
bool document_equal(const DslDocument& a, const DslDocument& b);

}  // namespace catxai::dsl

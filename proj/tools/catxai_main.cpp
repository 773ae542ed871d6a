#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "catxai/dsl.hpp"
#include "catxai/errors.hpp"
#include "catxai/hypergraph.hpp"
#include "catxai/institution.hpp"
#include "catxai/laws.hpp"
#include "catxai/stream.hpp"
#include "catxai/taxonomy.hpp"
#include "catxai/translator.hpp"
#include "catxai/util.hpp"
#include "catxai/xlearn.hpp"

using namespace catxai;

namespace {

// 0 success, 1 check/eq failure, 2 usage, 3 parse, 4 type
int exit_code_for(errc code) {
  switch (code) {
    case errc::usage_error:
    case errc::io_error: return 2;
    case errc::parse_error:
    case errc::duplicate_name: return 3;
    default: return 4;
  }
}

bool color_enabled() {
  const char* v = std::getenv("CATXAI_COLOR");
  if (v != nullptr) return std::string(v) == "1";
  return isatty(STDERR_FILENO) != 0;
}

void report(const error& e) {
  if (color_enabled())
    std::cerr << "\x1b[1;31m" << e.what() << "\x1b[0m\n";
  else
    std::cerr << e.what() << "\n";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open `" + path + "`");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

dsl::DslDocument load_document(const std::string& path) {
  return dsl::parse_document(slurp(path));
}

std::vector<translator::Sample> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open `" + path + "`");
  return translator::read_dataset(in);
}

// built-in agent translators; the feature-indexed ones size their signatures
// from the dataset at hand
translator::Translator pick_translator(const std::string& name, std::size_t input_dim) {
  if (name == "perceptron") return translator::perceptron_translator();
  if (name == "step-varying") return translator::step_varying_translator();
  if (name == "identity") return translator::identity_optimizer_translator();
  if (name == "syntactic") {
    std::vector<std::string> symbols;
    for (std::size_t i = 0; i < input_dim; ++i) symbols.push_back("x" + std::to_string(i));
    symbols.push_back("out");
    return translator::syntactic_xla_translator(institution::PropSignature{symbols});
  }
  if (name == "semantic") {
    std::vector<std::string> pixels;
    for (std::size_t i = 0; i < input_dim; ++i) pixels.push_back("p" + std::to_string(i));
    return translator::semantic_xla_translator(institution::SaliencySignature{pixels});
  }
  fail(errc::usage_error, "unknown translator `" + name +
                              "` (expected perceptron, step-varying, syntactic, semantic "
                              "or identity)");
}

int run_check(const std::string& file) {
  auto doc = load_document(file);
  for (const auto& [name, body] : doc.terms) {
    try {
      diagram::typecheck(body, doc.presentation);
    } catch (const error& e) {
      std::cerr << "term `" << name << "`: " << e.what() << "\n";
      return 1;
    }
  }
  std::cout << "checked " << doc.terms.size() << " term(s)\n";
  return 0;
}

int run_normalize(const std::string& file, const std::string& term) {
  auto doc = load_document(file);
  const auto& body = doc.term(term);
  diagram::typecheck(body, doc.presentation);
  std::cout << diagram::term_to_string(diagram::normalize(body)) << "\n";
  return 0;
}

int run_eq(const std::string& file, const std::string& lhs, const std::string& rhs) {
  auto doc = load_document(file);
  const auto& a = doc.term(lhs);
  const auto& b = doc.term(rhs);
  diagram::typecheck(a, doc.presentation);
  diagram::typecheck(b, doc.presentation);
  if (hg::diagram_eq(a, b)) {
    std::cout << "equal\n";
    return 0;
  }
  std::cout << "not equal\n";
  return 1;
}

int run_render(const std::string& file, const std::string& term, const std::string& out_path) {
  auto doc = load_document(file);
  const auto& body = doc.term(term);
  diagram::typecheck(body, doc.presentation);
  std::ofstream out(out_path);
  if (!out) fail(errc::io_error, "cannot write `" + out_path + "`");
  out << hg::render_dot(body);
  return 0;
}

// dataset rows feed a term by its declared domain: Y * X gets the training
// bundle (label plus echoed features), X the features, I nothing
stream::Value row_value(const diagram::ObList& dom, const translator::Sample& s) {
  auto features = stream::vec_value(s.input);
  if (dom == diagram::ObList{"Y", "X"})
    return stream::pair(stream::pair(stream::vec_value({s.label}), features), features);
  if (dom == diagram::ObList{"X"}) return features;
  if (dom.empty()) return stream::unit_value();
  fail(errc::usage_error,
       "cannot feed domain " + diagram::ob_to_string(dom) + " from a dataset (expected Y * X, X "
                                                            "or I)");
}

int run_run(const std::string& file, const std::string& term, const std::string& trans_name,
            const std::string& inputs_path, std::size_t steps, std::uint64_t seed) {
  auto doc = load_document(file);
  const auto& body = doc.term(term);
  auto type = diagram::typecheck(body, doc.presentation);
  auto data = inputs_path.empty() ? translator::make_separable_dataset(seed)
                                  : load_dataset(inputs_path);
  if (data.empty()) fail(errc::dimension_mismatch, "the dataset is empty");

  auto t = pick_translator(trans_name, data[0].input.size());
  auto mor = translator::interpret(body, t.interp);
  stream::EvalSession session(std::move(mor));
  if (steps == 0) steps = data.size();
  for (std::size_t n = 0; n < steps; ++n) session.feed(row_value(type.dom, data[n % data.size()]));
  std::cout << stream::trace_to_string(session.inputs(), session.outputs());
  return 0;
}

int run_train(const std::string& trans_name, const std::string& data_path, std::size_t steps,
              std::uint64_t seed) {
  auto data =
      data_path.empty() ? translator::make_separable_dataset(seed) : load_dataset(data_path);
  if (data.empty()) fail(errc::dimension_mismatch, "the dataset is empty");
  auto t = pick_translator(trans_name, data[0].input.size());
  auto tr = translator::run_training(t, data, steps);
  std::cout << translator::trace_to_string(tr);
  std::string params;
  for (double p : tr.final_parameters) params += (params.empty() ? "" : " ") + format_double(p);
  std::cout << "final parameters: [" << params << "]\n";
  double acc = translator::classification_accuracy(t, data, tr.final_parameters);
  std::cout << "final accuracy: " << format_double(acc) << "\n";
  return 0;
}

int run_classify(const std::string& spec_path) {
  std::ifstream in(spec_path);
  if (!in) fail(errc::io_error, "cannot open `" + spec_path + "`");
  auto spec = taxonomy::read_explainer_spec(in);
  std::cout << taxonomy::labels_to_string(taxonomy::classify(spec)) << "\n";
  return 0;
}

int run_institution_check(const std::string& sig_path, const std::string& morph_path, int depth) {
  std::ifstream sig_in(sig_path);
  if (!sig_in) fail(errc::io_error, "cannot open `" + sig_path + "`");
  auto target = institution::read_signature(sig_in);
  std::ifstream morph_in(morph_path);
  if (!morph_in) fail(errc::io_error, "cannot open `" + morph_path + "`");
  auto rho = institution::read_morphism(morph_in, target);
  auto stats = institution::satisfaction_check(rho, depth);
  std::cout << "checked " << stats.checked << " sentence/model pairs, " << stats.failures
            << " failures\n";
  return stats.failures == 0 ? 0 : 1;
}

int run_laws(const std::string& suite, std::uint64_t seed, std::size_t samples, int threads) {
  laws::RunOptions opt;
  opt.seed = seed;
  opt.samples_per_law = samples;
  opt.threads = threads;
  std::vector<laws::LawResult> results;
  if (suite.empty()) {
    results = laws::run_all_suites(opt);
  } else {
    auto names = laws::suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end()) {
      std::string all;
      for (const auto& n : names) all += (all.empty() ? "" : ", ") + n;
      fail(errc::usage_error, "unknown suite `" + suite + "` (expected one of " + all + ")");
    }
    results = laws::run_suite(suite, opt);
  }
  std::cout << laws::format_results(results);
  for (const auto& r : results)
    if (!r.ok()) return 1;
  return 0;
}

int run_agent(const std::string& variant) {
  if (variant == "abstract") {
    std::cout << diagram::term_to_string(xlearn::abstract_agent()) << "\n";
    return 0;
  }
  if (variant == "observable") {
    std::cout << diagram::term_to_string(xlearn::observable_agent()) << "\n";
    return 0;
  }
  fail(errc::usage_error, "unknown variant `" + variant + "` (expected abstract or observable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"string diagram toolkit for learning agents that explain themselves"};
  app.require_subcommand(1);
  std::function<int()> action;

  std::string file, term, lhs, rhs, out_path, trans_name = "perceptron";
  std::string inputs_path, data_path, spec_path, sig_path, morph_path, suite, variant = "observable";
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 80;
  int threads = 0, depth = 2;

  auto* check = app.add_subcommand("check", "typecheck every term in a document");
  check->add_option("file", file, "diagram source file")->required();
  check->callback([&] { action = [&] { return run_check(file); }; });

  auto* normalize = app.add_subcommand("normalize", "print a term's normal form");
  normalize->add_option("file", file, "diagram source file")->required();
  normalize->add_option("term", term, "term name")->required();
  normalize->callback([&] { action = [&] { return run_normalize(file, term); }; });

  auto* eq = app.add_subcommand("eq", "decide equality of two feedback-free terms");
  eq->add_option("file", file, "diagram source file")->required();
  eq->add_option("lhs", lhs, "first term name")->required();
  eq->add_option("rhs", rhs, "second term name")->required();
  eq->callback([&] { action = [&] { return run_eq(file, lhs, rhs); }; });

  auto* render = app.add_subcommand("render", "write a graphviz drawing of a term");
  render->add_option("file", file, "diagram source file")->required();
  render->add_option("term", term, "term name")->required();
  render->add_option("-o,--output", out_path, "output .dot path")->required();
  render->callback([&] { action = [&] { return run_render(file, term, out_path); }; });

  auto* run = app.add_subcommand("run", "evaluate a term over a dataset and print the trace");
  run->add_option("file", file, "diagram source file")->required();
  run->add_option("term", term, "term name")->required();
  run->add_option("--translator", trans_name, "carrier assignment (default perceptron)");
  run->add_option("--inputs", inputs_path, "dataset file (default: generated from --seed)");
  run->add_option("--steps", steps, "steps to run (default: one pass over the data)");
  run->add_option("--seed", seed, "seed for the generated dataset");
  run->callback(
      [&] { action = [&] { return run_run(file, term, trans_name, inputs_path, steps, seed); }; });

  auto* train = app.add_subcommand("train", "drive the observable agent and print its trace");
  train->add_option("--translator", trans_name, "carrier assignment (default perceptron)");
  train->add_option("--data", data_path, "dataset file (default: generated from --seed)");
  train->add_option("--steps", steps, "training steps (default 200)");
  train->add_option("--seed", seed, "seed for the generated dataset");
  train->callback([&] {
    action = [&] { return run_train(trans_name, data_path, steps == 0 ? 200 : steps, seed); };
  });

  auto* classify = app.add_subcommand("classify", "print taxonomy labels for an explainer spec");
  classify->add_option("spec", spec_path, "explainer spec file")->required();
  classify->callback([&] { action = [&] { return run_classify(spec_path); }; });

  auto* inst = app.add_subcommand("institution", "institution tooling");
  inst->require_subcommand(1);
  auto* icheck = inst->add_subcommand("check", "verify the satisfaction condition for a morphism");
  icheck->add_option("signature", sig_path, "target signature file (one symbol per line)")
      ->required();
  icheck->add_option("morphism", morph_path, "morphism file (src=dst lines)")->required();
  icheck->add_option("--exhaustive-depth", depth, "sentence depth bound (default 2)");
  icheck->callback(
      [&] { action = [&] { return run_institution_check(sig_path, morph_path, depth); }; });

  auto* laws_cmd = app.add_subcommand("laws", "run the algebraic law suites");
  laws_cmd->add_option("--suite", suite,
                       "category, monoidal, cartesian, feedback or streams (default: all)");
  laws_cmd->add_option("--seed", seed, "sampler seed");
  laws_cmd->add_option("--samples", samples, "instances per named law (default 80)");
  laws_cmd->add_option("--threads", threads, "worker threads (0 = default, 1 = serial)");
  laws_cmd->callback([&] { action = [&] { return run_laws(suite, seed, samples, threads); }; });

  auto* agent = app.add_subcommand("agent", "print a built-in agent term");
  agent->add_option("--variant", variant, "abstract or observable (default observable)");
  agent->callback([&] { action = [&] { return run_agent(variant); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    return action();
  } catch (const error& e) {
    report(e);
    return exit_code_for(e.code);
  }
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "catxai/stream.hpp"

namespace catxai::laws {

// Sampled "random" morphisms are deterministic hash functions of
// (seed, step, history), so a sampled morphism behaves as a fixed value no
// matter where or how often it is evaluated.
struct Sampler {
  std::uint64_t seed = 0;

  stream::Carrier random_carrier(std::uint64_t salt, int max_atoms, int max_size) const;
  stream::Value random_value(const stream::Carrier& c, std::uint64_t salt) const;
  // memoryless morphisms depend on the newest input only (and not on the step)
  stream::StreamMor random_mor(const stream::Carrier& dom, const stream::Carrier& cod,
                               std::uint64_t salt, bool memoryless = false) const;
};

struct LawResult {
  std::string suite;
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string counterexample;  // first failing instance, if any
  bool ok() const { return failures == 0; }
};

struct RunOptions {
  std::uint64_t seed = 0;
  std::size_t samples_per_law = 80;  // instances per named law
  std::size_t steps = 5;             // stream length per instance
  int max_enum = 3;                  // finite carrier size cap
  int threads = 0;                   // 0 = default parallel, 1 = serial reference
};

std::vector<std::string> suite_names();  // category monoidal cartesian feedback streams
std::vector<LawResult> run_suite(const std::string& suite, const RunOptions& opt);
std::vector<LawResult> run_all_suites(const RunOptions& opt);

// the five feedback axioms, instances split evenly; sliding is checked in its
// initial-state-qualified form (loop inits related by the slid morphism)
std::vector<LawResult> check_feedback_axioms(const Sampler& sampler, std::size_t instances,
                                             std::size_t steps, int threads = 0,
                                             int max_state_atoms = 2);

std::string format_results(const std::vector<LawResult>& rs);

}  // namespace catxai::laws

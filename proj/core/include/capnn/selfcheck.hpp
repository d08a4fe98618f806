#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "capnn/dyadic.hpp"
#include "capnn/learners.hpp"
#include "capnn/processes.hpp"

namespace capnn {

// Invariant suites shared by `capnn selftest` and the test binaries.

struct CheckResult {
  std::string name;
  bool passed = false;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::string detail;
};

// Random online sequence over a small dyadic grid, so that exact duplicates and
// equidistant neighbors are common.
struct FuzzSequence {
  std::vector<Dyadic> xs;
  std::vector<Label> ys;
};
FuzzSequence fuzz_sequence(std::uint64_t seed, std::uint64_t index, std::uint64_t max_len);

// Filtered compare against pure exact comparison (and an mpq cross-check),
// with near-ties built at bit positions up to max_bits.
CheckResult check_dyadic_filter(std::uint64_t seed, std::uint64_t cases,
                                std::uint64_t max_bits = 4096);

// Learner against ReferenceLearner: predictions at every step, full state at
// regular intervals and at the end. The reference always uses the clean rule.
CheckResult check_oracle_equivalence(const LearnerConfig& config, std::uint64_t seed,
                                     std::uint64_t sequences, std::uint64_t max_len);

// Rule variants exercised by the oracle suite.
std::vector<LearnerConfig> oracle_variants();

// child_count <= k, and a time is in the dataset iff it is a non-duplicate
// time that has not been deleted; deletion happens exactly at the k-th child.
CheckResult check_cap_invariant(std::uint32_t k, std::uint64_t seed, std::uint64_t sequences,
                                std::uint64_t max_len);

// 2C1NN run on the given process, then the sampled path inequality check.
CheckResult check_path_inequality_on(const GeneratorConfig& generator, std::uint64_t seed,
                             std::uint64_t max_pairs);

struct SelftestOptions {
  std::uint64_t seed = 0x5eed;
  bool corrupt_tie_break = false;
};

std::vector<CheckResult> run_selftest(const SelftestOptions& options);

}  // namespace capnn

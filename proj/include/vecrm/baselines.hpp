#pragma once

#include <cstdint>
#include <stdexcept>

#include "vecrm/learner.hpp"

namespace vecrm {

class EnumerationCapExceeded : public std::runtime_error {
 public:
  explicit EnumerationCapExceeded(const std::string& what)
      : std::runtime_error(what) {}
};

struct EsResult {
  JointAction best;
  double objective = 0.0;
  bool found_feasible = false;
  std::uint64_t profiles_enumerated = 0;
};

// Lexicographic scan of every joint action; keeps the feasible profile with
// the smallest objective, ties resolved toward the lexicographically smaller
// profile. Deterministic at any thread count. Throws EnumerationCapExceeded
// when the profile space exceeds `cap`.
EsResult exhaustive_search(Game& game, std::uint64_t cap = 10'000'000,
                           int threads = 1);

// Plain time-averaged regret matching: the same loop as the forgetting
// learner with harmonic averaging weights.
ExperimentTrace run_trm(Game& game, int rounds, std::uint64_t master_seed,
                        const MuRule& mu = {}, int threads = 1);

}  // namespace vecrm

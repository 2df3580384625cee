#include "vecrm/baselines.hpp"

#include <limits>
#include <string>

#include "vecrm/util.hpp"

namespace vecrm {

namespace {

JointAction profile_from_rank(std::uint64_t rank, const std::vector<std::size_t>& radices) {
  JointAction a(radices.size(), 0);
  for (std::size_t i = radices.size(); i-- > 0;) {
    a[i] = static_cast<std::size_t>(rank % radices[i]);
    rank /= radices[i];
  }
  return a;
}

// Mixed-radix increment; rank order equals lexicographic profile order.
void advance_profile(JointAction& a, const std::vector<std::size_t>& radices) {
  for (std::size_t i = radices.size(); i-- > 0;) {
    if (++a[i] < radices[i]) return;
    a[i] = 0;
  }
}

struct ChunkBest {
  double objective = std::numeric_limits<double>::infinity();
  std::uint64_t rank = 0;
  bool found = false;
};

}  // namespace

EsResult exhaustive_search(Game& game, std::uint64_t cap, int threads) {
  std::vector<std::size_t> radices(game.player_count());
  std::uint64_t profiles = 1;
  for (std::size_t i = 0; i < radices.size(); ++i) {
    radices[i] = game.action_count(i);
    const auto radix = static_cast<std::uint64_t>(radices[i]);
    if (radix == 0 || profiles > cap / radix) {
      throw EnumerationCapExceeded(
          "exhaustive search: profile space exceeds the enumeration cap " +
          std::to_string(cap));
    }
    profiles *= radix;
  }

  game.begin_round(1);

  const std::uint64_t total = profiles;
  if (threads < 1) threads = 1;
  const std::uint64_t chunks =
      std::min<std::uint64_t>(total, static_cast<std::uint64_t>(threads));
  std::vector<ChunkBest> results(static_cast<std::size_t>(chunks));

  parallel_for(static_cast<std::size_t>(chunks), threads,
               [&](std::size_t begin_chunk, std::size_t end_chunk) {
                 for (std::size_t c = begin_chunk; c < end_chunk; ++c) {
                   const std::uint64_t begin = total / chunks * c +
                                               std::min<std::uint64_t>(c, total % chunks);
                   const std::uint64_t end = begin + total / chunks +
                                             (c < total % chunks ? 1 : 0);
                   ChunkBest best;
                   JointAction a = profile_from_rank(begin, radices);
                   for (std::uint64_t rank = begin; rank < end; ++rank) {
                     if (game.feasible(a)) {
                       const double obj = game.objective(a);
                       // Strict improvement only: scanning in rank order makes
                       // ties resolve to the lexicographically smaller profile.
                       if (!best.found || obj < best.objective) {
                         best.objective = obj;
                         best.rank = rank;
                         best.found = true;
                       }
                     }
                     advance_profile(a, radices);
                   }
                   results[c] = best;
                 }
               });

  EsResult out;
  out.profiles_enumerated = total;
  ChunkBest overall;
  for (const ChunkBest& b : results) {
    if (!b.found) continue;
    if (!overall.found || b.objective < overall.objective ||
        (b.objective == overall.objective && b.rank < overall.rank)) {
      overall = b;
    }
  }
  if (overall.found) {
    out.found_feasible = true;
    out.objective = overall.objective;
    out.best = profile_from_rank(overall.rank, radices);
  }
  return out;
}

ExperimentTrace run_trm(Game& game, int rounds, std::uint64_t master_seed,
                        const MuRule& mu, int threads) {
  LearnerConfig config;
  config.rounds = rounds;
  config.mode = AveragingMode::kHarmonic;
  config.mu = mu;
  config.threads = threads;
  return run_learning(game, config, master_seed);
}

}  // namespace vecrm

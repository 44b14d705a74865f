#pragma once

#include <cstddef>
#include <vector>

#include "polarmwd/construction.hpp"
#include "polarmwd/information_set.hpp"

namespace polarmwd {

enum class ReorderRule { kEntropy, kPwSequence };

const char* to_string(ReorderRule rule);

struct BgrConfig {
  CodeParams params{1};
  std::size_t k = 1;
  std::size_t list_size = 1;
  double design_snr_db = 0.0;  // Eb/N0; the GA runs at rate K/N
  ReorderRule reorder_rule = ReorderRule::kEntropy;
};

// One pass over the degree groups [a, b].
struct BgrIteration {
  int a = 0;
  int b = 0;
  double entropy_bits = 0.0;  // H(A) after the pass
  std::vector<ChannelIndex> removed;
  std::vector<ChannelIndex> added;
};

enum class BgrTermination {
  kInitiallySatisfied,
  kSatisfied,
  kFixedPointAtFullRange,  // entropy rule: the full-range pass changed nothing
  kFullRange,              // PW rule: stops on reaching [0, n] without updating
};

const char* to_string(BgrTermination termination);

struct BgrTrace {
  double initial_entropy_bits = 0.0;
  std::vector<BgrIteration> iterations;
  bool satisfied = false;
  BgrTermination termination = BgrTermination::kInitiallySatisfied;
};

struct BgrResult {
  InformationSet set;
  BgrTrace trace;
};

double entropy_of_set(const ChannelEntropies& entropies, const InformationSet& set);

// log2(L) >= H(A).
bool satisfies_entropy_constraint(std::size_t list_size, double entropy_bits);
bool satisfies_entropy_constraint(const BgrConfig& cfg, const ChannelEntropies& entropies,
                                  const InformationSet& set);

// GA entropies at the configuration's design SNR and rate K/N.
ChannelEntropies bgr_entropies(const BgrConfig& cfg);

// Starts from the first K channels of the MWD sequence and reorders within
// widening degree groups until the entropy constraint holds. Throws
// InvalidArgument for K outside [1, N] or L = 0.
BgrResult bgr_construct(const BgrConfig& cfg, const ChannelEntropies& entropies);
BgrResult bgr_construct(const BgrConfig& cfg);

// Convenience forms that override cfg.reorder_rule.
BgrResult bgr_mwd(BgrConfig cfg);
BgrResult bgr_mwd_pw(BgrConfig cfg);

}  // namespace polarmwd

#include "polarmwd/bgr.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "polarmwd/errors.hpp"

namespace polarmwd {

const char* to_string(ReorderRule rule) {
  switch (rule) {
    case ReorderRule::kEntropy:
      return "entropy";
    case ReorderRule::kPwSequence:
      return "pw";
  }
  return "?";
}

const char* to_string(BgrTermination termination) {
  switch (termination) {
    case BgrTermination::kInitiallySatisfied:
      return "initially-satisfied";
    case BgrTermination::kSatisfied:
      return "satisfied";
    case BgrTermination::kFixedPointAtFullRange:
      return "fixed-point-at-full-range";
    case BgrTermination::kFullRange:
      return "full-range";
  }
  return "?";
}

double entropy_of_set(const ChannelEntropies& entropies, const InformationSet& set) {
  double sum = 0.0;
  for (ChannelIndex j : set.indices()) sum += entropies.bits.at(j);
  return sum;
}

bool satisfies_entropy_constraint(std::size_t list_size, double entropy_bits) {
  return std::log2(static_cast<double>(list_size)) >= entropy_bits;
}

bool satisfies_entropy_constraint(const BgrConfig& cfg, const ChannelEntropies& entropies,
                                  const InformationSet& set) {
  return satisfies_entropy_constraint(cfg.list_size, entropy_of_set(entropies, set));
}

ChannelEntropies bgr_entropies(const BgrConfig& cfg) {
  const double rate = static_cast<double>(cfg.k) / static_cast<double>(cfg.params.length());
  return channel_entropies(ga_llr_means(cfg.params, cfg.design_snr_db, rate));
}

BgrResult bgr_construct(const BgrConfig& cfg, const ChannelEntropies& entropies) {
  const std::size_t length = cfg.params.length();
  if (cfg.k == 0 || cfg.k > length) {
    throw InvalidArgument("information length K must be in [1, " + std::to_string(length) + "], got " +
                          std::to_string(cfg.k));
  }
  if (cfg.list_size == 0) throw InvalidArgument("list size must be at least 1");
  if (entropies.bits.size() != length) throw InvalidArgument("entropy vector length differs from N");

  const int n = cfg.params.n();
  auto degree = [n](ChannelIndex j) { return n - std::popcount(j); };

  // Sort keys: smaller is preferred.
  std::vector<double> key(length);
  if (cfg.reorder_rule == ReorderRule::kEntropy) {
    key = entropies.bits;
  } else {
    const PwWeights pw = pw_weights(cfg.params);
    for (std::size_t j = 0; j < length; ++j) key[j] = -pw.weights[j];
  }
  auto preferred = [&](ChannelIndex x, ChannelIndex y) {
    if (key[x] != key[y]) return key[x] < key[y];
    return x > y;
  };

  InformationSet initial = information_set_from_sequence(mwd_sequence(cfg.params), cfg.k);
  std::vector<std::uint8_t> member(initial.membership().begin(), initial.membership().end());
  std::vector<ChannelIndex> order(initial.selection_order().begin(), initial.selection_order().end());

  auto current_entropy = [&] {
    double sum = 0.0;
    for (std::size_t j = 0; j < length; ++j) {
      if (member[j] != 0) sum += entropies.bits[j];
    }
    return sum;
  };

  BgrTrace trace;
  trace.initial_entropy_bits = current_entropy();
  trace.satisfied = satisfies_entropy_constraint(cfg.list_size, trace.initial_entropy_bits);
  if (trace.satisfied) return BgrResult{std::move(initial), std::move(trace)};

  int k = 0;
  for (ChannelIndex j : initial.indices()) k = std::max(k, degree(j));
  int a = std::max(k - 1, 0);
  int b = k;

  std::vector<ChannelIndex> group;
  for (;;) {
    const bool full_range = a == 0 && b == n;
    if (cfg.reorder_rule == ReorderRule::kPwSequence && full_range) {
      trace.termination = BgrTermination::kFullRange;
      break;
    }

    group.clear();
    std::size_t taken = 0;
    for (std::size_t j = 0; j < length; ++j) {
      const int d = degree(static_cast<ChannelIndex>(j));
      if (d >= a && d <= b) {
        group.push_back(static_cast<ChannelIndex>(j));
        if (member[j] != 0) ++taken;
      }
    }
    std::sort(group.begin(), group.end(), preferred);

    BgrIteration step;
    step.a = a;
    step.b = b;
    std::vector<std::uint8_t> chosen(length, 0);
    for (std::size_t t = 0; t < taken; ++t) chosen[group[t]] = 1;
    for (ChannelIndex j : group) {
      if (member[j] != 0 && chosen[j] == 0) step.removed.push_back(j);
      if (member[j] == 0 && chosen[j] != 0) step.added.push_back(j);
    }
    std::sort(step.removed.begin(), step.removed.end());
    std::sort(step.added.begin(), step.added.end());

    if (cfg.reorder_rule == ReorderRule::kEntropy && step.added.empty() && full_range) {
      step.entropy_bits = current_entropy();
      trace.iterations.push_back(std::move(step));
      trace.termination = BgrTermination::kFixedPointAtFullRange;
      break;
    }

    // Keep the ungrouped part of the selection order, then the new group
    // members in preference order.
    std::erase_if(order, [&](ChannelIndex j) {
      const int d = degree(j);
      return d >= a && d <= b;
    });
    for (std::size_t t = 0; t < taken; ++t) order.push_back(group[t]);
    for (ChannelIndex j : group) member[j] = chosen[j];

    step.entropy_bits = current_entropy();
    trace.iterations.push_back(std::move(step));
    if (satisfies_entropy_constraint(cfg.list_size, trace.iterations.back().entropy_bits)) {
      trace.satisfied = true;
      trace.termination = BgrTermination::kSatisfied;
      break;
    }
    a = std::max(a - 1, 0);
    b = std::min(b + 1, n);
  }

  return BgrResult{InformationSet(cfg.params, std::move(order)), std::move(trace)};
}

BgrResult bgr_construct(const BgrConfig& cfg) { return bgr_construct(cfg, bgr_entropies(cfg)); }

BgrResult bgr_mwd(BgrConfig cfg) {
  cfg.reorder_rule = ReorderRule::kEntropy;
  return bgr_construct(cfg);
}

BgrResult bgr_mwd_pw(BgrConfig cfg) {
  cfg.reorder_rule = ReorderRule::kPwSequence;
  return bgr_construct(cfg);
}

}  // namespace polarmwd

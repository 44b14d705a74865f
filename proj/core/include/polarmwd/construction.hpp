#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "polarmwd/information_set.hpp"

namespace polarmwd {

// A full ordering of the N channel indices; position 0 is the most reliable.
class ReliabilitySequence {
 public:
  // Throws InvalidArgument unless `order` is a permutation of [0, N) with N a
  // supported power of two.
  explicit ReliabilitySequence(std::vector<ChannelIndex> order);

  const CodeParams& params() const noexcept { return params_; }
  std::size_t length() const noexcept { return order_.size(); }
  std::span<const ChannelIndex> order() const noexcept { return order_; }
  ChannelIndex operator[](std::size_t position) const { return order_[position]; }
  std::size_t position_of(ChannelIndex index) const { return position_[index]; }

  friend bool operator==(const ReliabilitySequence& a, const ReliabilitySequence& b) {
    return a.order_ == b.order_;
  }

 private:
  CodeParams params_;
  std::vector<ChannelIndex> order_;
  std::vector<std::size_t> position_;
};

// Channels grouped by ascending monomial degree, then ascending A_i, then
// descending index.
ReliabilitySequence mwd_sequence(const CodeParams& params);

// The first k entries of the sequence. Throws InvalidArgument unless 0 < k <= N.
InformationSet information_set_from_sequence(const ReliabilitySequence& sequence, std::size_t k);

// Polarization weight w_i = sum_l b_l(i) 2^(l/4); larger is more reliable.
struct PwWeights {
  std::vector<double> weights;
};

PwWeights pw_weights(const CodeParams& params);
ReliabilitySequence pw_sequence(const CodeParams& params);

// Gaussian approximation of the LLR density of every synthetic channel.
struct GaState {
  double design_snr_db = 0.0;  // Eb/N0
  double rate = 1.0;
  std::vector<double> llr_means;
};

// phi(x) of the Gaussian approximation, in log domain: ln phi(x).
double ga_log_phi(double mean);
// Mean of the check-node output whose inputs both have mean `mean`.
double ga_check_node_mean(double mean);

GaState ga_llr_means(const CodeParams& params, double design_snr_db, double rate);
// Channels by descending LLR mean; ties favour the larger index.
ReliabilitySequence ga_sequence(const GaState& ga);

// Per-channel entropy H(W_N^(j)) in bits.
struct ChannelEntropies {
  std::vector<double> bits;
};

// E[log2(1 + e^{-L})] for L ~ Normal(mean, 2 mean), clamped to [0, 1].
double channel_entropy(double llr_mean);
ChannelEntropies channel_entropies(const GaState& ga);

// Gauss-Hermite rule used by channel_entropy (weight function e^{-x^2}).
inline constexpr std::size_t kEntropyQuadratureNodes = 100;
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const QuadratureRule& gauss_hermite_rule();

// Sequence files: line 1 "N=<int>", then N decimal indices, most reliable
// first. '#' starts a comment.
ReliabilitySequence parse_sequence(std::istream& in, std::optional<std::size_t> expected_length = {});
void write_sequence(std::ostream& out, const ReliabilitySequence& sequence);
ReliabilitySequence load_sequence_file(const std::filesystem::path& path,
                                       std::optional<std::size_t> expected_length = {});
void save_sequence_file(const ReliabilitySequence& sequence, const std::filesystem::path& path);

}  // namespace polarmwd

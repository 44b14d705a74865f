#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "polarmwd/information_set.hpp"

namespace polarmwd {

using Bits = std::vector<std::uint8_t>;

// Channel LLRs are clamped to +/- this value before decoding.
inline constexpr double kLlrClamp = 40.0;

// In-place x <- x * F^{(x)n} over GF(2), natural (non bit-reversed) order.
// The transform is its own inverse.
void polar_transform(std::span<std::uint8_t> bits);

// u with information bits at the set's positions (ascending index order) and
// zeros elsewhere.
struct MessageFrame {
  Bits info_bits;
  Bits u;
};

MessageFrame make_frame(const InformationSet& set, std::span<const std::uint8_t> info_bits);

Bits encode(const InformationSet& set, std::span<const std::uint8_t> info_bits);

// Exact LLR-domain check-node update 2 atanh(tanh(a/2) tanh(b/2)).
double boxplus(double a, double b) noexcept;

// Path-metric increment for deciding bit u against LLR llr: ln(1 + e^{-(1-2u) llr}).
double decision_penalty(double llr, std::uint8_t u) noexcept;

struct DecodedPath {
  Bits info_bits;
  double path_metric = 0.0;
};

struct DecoderOutput {
  Bits info_bits;
  // -ln of the selected path's likelihood up to a frame-wide constant; lower is better.
  double path_metric = 0.0;
  // Surviving candidates sorted by metric, filled on request.
  std::vector<DecodedPath> list;
};

// Successive cancellation. Holds mutable workspace: one instance per thread.
class ScDecoder {
 public:
  explicit ScDecoder(InformationSet set);

  DecoderOutput decode(std::span<const double> llrs);

  const InformationSet& information_set() const noexcept { return set_; }

 private:
  void calc_llr(int layer, std::size_t phase);
  void update_bits(int layer, std::size_t phase);

  InformationSet set_;
  int n_;
  std::vector<std::vector<double>> llr_;
  std::vector<std::vector<std::uint8_t>> bits_;
  Bits codeword_;
};

// Successive cancellation list decoding with lazily copied per-layer arrays.
// Holds mutable workspace: one instance per thread.
class SclDecoder {
 public:
  SclDecoder(InformationSet set, std::size_t list_size);

  DecoderOutput decode(std::span<const double> llrs, bool dump_list = false);

  const InformationSet& information_set() const noexcept { return set_; }
  std::size_t list_size() const noexcept { return list_size_; }

 private:
  using Slot = int;

  void reset();
  int assign_initial_path();
  int clone_path(int path);
  void kill_path(int path);

  double* llr_for_write(int layer, int path);
  const double* llr_for_read(int layer, int path) const;
  std::uint8_t* bits_for_write(int layer, int path);
  const std::uint8_t* bits_for_read(int layer, int path) const;
  Slot detach(int layer, int path);

  void calc_llr(int layer, std::size_t phase);
  void update_bits(int layer, std::size_t phase);
  void decide_frozen(std::size_t phase);
  void split_and_prune(std::size_t phase);
  Bits extract_info_bits(int path);

  InformationSet set_;
  std::size_t list_size_;
  int n_;
  std::size_t length_;

  // Per layer: list_size_ slots of 2^(n - layer) LLRs and 2 * 2^(n - layer) bits.
  std::vector<std::vector<double>> llr_;
  std::vector<std::vector<std::uint8_t>> bits_;
  std::vector<std::vector<Slot>> path_slot_;   // [layer][path]
  std::vector<std::vector<int>> ref_count_;    // [layer][slot]
  std::vector<std::vector<Slot>> free_slots_;  // [layer]
  std::vector<int> free_paths_;
  std::vector<std::uint8_t> active_;
  std::vector<double> metric_;

  struct Candidate {
    double metric;
    std::uint8_t bit;
    int path;
  };
  std::vector<Candidate> candidates_;
  std::vector<std::uint8_t> keep_;
  std::vector<double> fork_metric_;  // [2 * path + bit]
  std::vector<int> forked_;
  Bits scratch_;
};

}  // namespace polarmwd

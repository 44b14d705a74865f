#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace polarmwd {

using ChannelIndex = std::uint32_t;

// Code length N = 2^n. The length cap keeps every minimum-weight codeword
// count below 2^128.
class CodeParams {
 public:
  static constexpr int kMaxLog2Length = 20;

  explicit CodeParams(int log2_length);
  static CodeParams from_length(std::size_t length);

  int n() const noexcept { return n_; }
  std::size_t length() const noexcept { return std::size_t{1} << n_; }

  friend bool operator==(const CodeParams&, const CodeParams&) = default;

 private:
  int n_;
};

// The K channel indices carrying information bits. Indices are kept sorted
// for set semantics; the order in which they were selected (e.g. the prefix of
// a reliability sequence) is retained separately.
class InformationSet {
 public:
  InformationSet(CodeParams params, std::vector<ChannelIndex> selection_order);

  const CodeParams& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return sorted_.size(); }
  bool empty() const noexcept { return sorted_.empty(); }

  std::span<const ChannelIndex> indices() const noexcept { return sorted_; }
  std::span<const ChannelIndex> selection_order() const noexcept { return order_; }

  bool contains(ChannelIndex index) const noexcept {
    return index < membership_.size() && membership_[index] != 0;
  }
  // One byte per channel: 1 for information, 0 for frozen.
  std::span<const std::uint8_t> membership() const noexcept { return membership_; }

  friend bool operator==(const InformationSet& a, const InformationSet& b) {
    return a.params_ == b.params_ && a.sorted_ == b.sorted_;
  }

 private:
  CodeParams params_;
  std::vector<ChannelIndex> order_;
  std::vector<ChannelIndex> sorted_;
  std::vector<std::uint8_t> membership_;
};

}  // namespace polarmwd

#include "polarmwd/information_set.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "polarmwd/errors.hpp"

namespace polarmwd {

CodeParams::CodeParams(int log2_length) : n_(log2_length) {
  if (log2_length < 1 || log2_length > kMaxLog2Length) {
    throw InvalidArgument("log2 code length must be in [1, " + std::to_string(kMaxLog2Length) +
                          "], got " + std::to_string(log2_length));
  }
}

CodeParams CodeParams::from_length(std::size_t length) {
  if (length < 2 || !std::has_single_bit(length)) {
    throw InvalidArgument("code length must be a power of two >= 2, got " + std::to_string(length));
  }
  return CodeParams(std::countr_zero(length));
}

InformationSet::InformationSet(CodeParams params, std::vector<ChannelIndex> selection_order)
    : params_(params), order_(std::move(selection_order)), membership_(params.length(), 0) {
  for (ChannelIndex index : order_) {
    if (index >= params_.length()) {
      throw InvalidArgument("channel index " + std::to_string(index) + " out of range for N=" +
                            std::to_string(params_.length()));
    }
    if (membership_[index] != 0) {
      throw InvalidArgument("duplicate channel index " + std::to_string(index));
    }
    membership_[index] = 1;
  }
  sorted_ = order_;
  std::sort(sorted_.begin(), sorted_.end());
}

}  // namespace polarmwd

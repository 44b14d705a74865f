#include "polarmwd/codec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polarmwd/errors.hpp"

namespace polarmwd {

void polar_transform(std::span<std::uint8_t> bits) {
  const std::size_t length = bits.size();
  for (std::size_t half = 1; half < length; half <<= 1) {
    for (std::size_t block = 0; block < length; block += 2 * half) {
      for (std::size_t j = block; j < block + half; ++j) bits[j] ^= bits[j + half];
    }
  }
}

MessageFrame make_frame(const InformationSet& set, std::span<const std::uint8_t> info_bits) {
  if (info_bits.size() != set.size()) {
    throw InvalidArgument("expected " + std::to_string(set.size()) + " information bits, got " +
                          std::to_string(info_bits.size()));
  }
  MessageFrame frame;
  frame.info_bits.assign(info_bits.begin(), info_bits.end());
  frame.u.assign(set.params().length(), 0);
  const auto indices = set.indices();
  for (std::size_t k = 0; k < indices.size(); ++k) frame.u[indices[k]] = info_bits[k] & 1u;
  return frame;
}

Bits encode(const InformationSet& set, std::span<const std::uint8_t> info_bits) {
  Bits c = make_frame(set, info_bits).u;
  polar_transform(c);
  return c;
}

namespace {

// log1p(x) as log(1 + x) * x / ((1 + x) - 1): accurate to a few ulps and
// cheaper than the library log1p.
double fast_log1p(double x) noexcept {
  const double u = 1.0 + x;
  return u == 1.0 ? x : std::log(u) * x / (u - 1.0);
}

double softplus(double x) noexcept {
  const double t = std::abs(x);
  return std::max(x, 0.0) + (t < kLlrClamp ? fast_log1p(std::exp(-t)) : 0.0);
}

double clamp_llr(double llr) noexcept {
  if (std::isnan(llr)) return 0.0;
  return std::clamp(llr, -kLlrClamp, kLlrClamp);
}

// Right-branch update: the left sibling's codeword bit u flips the upper LLR.
double g_update(double upper, double lower, std::uint8_t u) noexcept {
  return u != 0 ? lower - upper : lower + upper;
}

Bits info_bits_from_codeword(const InformationSet& set, std::span<const std::uint8_t> codeword,
                             Bits& scratch) {
  scratch.assign(codeword.begin(), codeword.end());
  polar_transform(scratch);
  Bits info;
  info.reserve(set.size());
  for (ChannelIndex i : set.indices()) info.push_back(scratch[i]);
  return info;
}

}  // namespace

double boxplus(double a, double b) noexcept {
  const double magnitude = std::min(std::abs(a), std::abs(b));
  const double sign = (std::signbit(a) == std::signbit(b)) ? 1.0 : -1.0;
  // correction = log1p(e^{-|a+b|}) - log1p(e^{-|a-b|}) = log1p(x) with
  // x = (e^{-|a+b|} - e^{-|a-b|}) / (1 + e^{-|a-b|}). Exponentials below e^{-40}
  // are dropped.
  const double sum = std::abs(a + b);
  const double diff = std::abs(a - b);
  const double e_sum = sum < kLlrClamp ? std::exp(-sum) : 0.0;
  const double e_diff = diff < kLlrClamp ? std::exp(-diff) : 0.0;
  return sign * magnitude + fast_log1p((e_sum - e_diff) / (1.0 + e_diff));
}

double decision_penalty(double llr, std::uint8_t u) noexcept {
  return softplus(u != 0 ? llr : -llr);
}

// ---------------------------------------------------------------------------
// SC

ScDecoder::ScDecoder(InformationSet set) : set_(std::move(set)), n_(set_.params().n()) {
  llr_.resize(n_ + 1);
  bits_.resize(n_ + 1);
  for (int layer = 0; layer <= n_; ++layer) {
    const std::size_t size = std::size_t{1} << (n_ - layer);
    llr_[layer].assign(size, 0.0);
    bits_[layer].assign(2 * size, 0);
  }
}

void ScDecoder::calc_llr(int layer, std::size_t phase) {
  if (layer == 0) return;
  if (phase % 2 == 0) calc_llr(layer - 1, phase >> 1);
  const std::size_t half = std::size_t{1} << (n_ - layer);
  double* out = llr_[layer].data();
  const double* parent = llr_[layer - 1].data();
  if (phase % 2 == 0) {
    for (std::size_t b = 0; b < half; ++b) out[b] = boxplus(parent[b], parent[b + half]);
  } else {
    const std::uint8_t* left = bits_[layer].data();
    for (std::size_t b = 0; b < half; ++b) out[b] = g_update(parent[b], parent[b + half], left[b]);
  }
}

void ScDecoder::update_bits(int layer, std::size_t phase) {
  const std::size_t half = std::size_t{1} << (n_ - layer);
  const std::size_t parent_phase = phase >> 1;
  const std::uint8_t* left = bits_[layer].data();
  const std::uint8_t* right = left + half;
  std::uint8_t* dest = bits_[layer - 1].data() + (parent_phase % 2) * (2 * half);
  for (std::size_t b = 0; b < half; ++b) {
    dest[b] = left[b] ^ right[b];
    dest[b + half] = right[b];
  }
  if (parent_phase % 2 == 1) update_bits(layer - 1, parent_phase);
}

DecoderOutput ScDecoder::decode(std::span<const double> llrs) {
  const std::size_t length = set_.params().length();
  if (llrs.size() != length) {
    throw InvalidArgument("expected " + std::to_string(length) + " LLRs, got " +
                          std::to_string(llrs.size()));
  }
  for (std::size_t j = 0; j < length; ++j) llr_[0][j] = clamp_llr(llrs[j]);

  double metric = 0.0;
  for (std::size_t phase = 0; phase < length; ++phase) {
    calc_llr(n_, phase);
    const double llr = llr_[n_][0];
    const double zero = metric + decision_penalty(llr, 0);
    const double one = metric + decision_penalty(llr, 1);
    std::uint8_t u = 0;
    // Same comparison the list decoder makes with a single survivor.
    if (set_.contains(static_cast<ChannelIndex>(phase)) && one < zero) u = 1;
    metric = u != 0 ? one : zero;
    bits_[n_][phase % 2] = u;
    if (phase % 2 == 1) update_bits(n_, phase);
  }

  DecoderOutput out;
  out.info_bits = info_bits_from_codeword(
      set_, std::span<const std::uint8_t>(bits_[0].data(), length), codeword_);
  out.path_metric = metric;
  return out;
}

// ---------------------------------------------------------------------------
// SCL

SclDecoder::SclDecoder(InformationSet set, std::size_t list_size)
    : set_(std::move(set)), list_size_(list_size), n_(set_.params().n()),
      length_(set_.params().length()) {
  if (list_size_ < 1) throw InvalidArgument("list size must be >= 1");
  llr_.resize(n_ + 1);
  bits_.resize(n_ + 1);
  path_slot_.assign(n_ + 1, std::vector<Slot>(list_size_, 0));
  ref_count_.assign(n_ + 1, std::vector<int>(list_size_, 0));
  free_slots_.resize(n_ + 1);
  for (int layer = 0; layer <= n_; ++layer) {
    const std::size_t size = std::size_t{1} << (n_ - layer);
    llr_[layer].assign(list_size_ * size, 0.0);
    bits_[layer].assign(list_size_ * 2 * size, 0);
    free_slots_[layer].reserve(list_size_);
  }
  free_paths_.reserve(list_size_);
  active_.assign(list_size_, 0);
  metric_.assign(list_size_, 0.0);
  candidates_.reserve(2 * list_size_);
  keep_.assign(2 * list_size_, 0);
  fork_metric_.assign(2 * list_size_, 0.0);
  forked_.reserve(list_size_);
}

void SclDecoder::reset() {
  free_paths_.clear();
  for (std::size_t p = list_size_; p-- > 0;) free_paths_.push_back(static_cast<int>(p));
  std::fill(active_.begin(), active_.end(), 0);
  std::fill(metric_.begin(), metric_.end(), 0.0);
  for (int layer = 0; layer <= n_; ++layer) {
    free_slots_[layer].clear();
    for (std::size_t s = list_size_; s-- > 0;) free_slots_[layer].push_back(static_cast<Slot>(s));
    std::fill(ref_count_[layer].begin(), ref_count_[layer].end(), 0);
  }
}

int SclDecoder::assign_initial_path() {
  const int path = free_paths_.back();
  free_paths_.pop_back();
  active_[path] = 1;
  metric_[path] = 0.0;
  for (int layer = 0; layer <= n_; ++layer) {
    const Slot s = free_slots_[layer].back();
    free_slots_[layer].pop_back();
    path_slot_[layer][path] = s;
    ref_count_[layer][s] = 1;
  }
  return path;
}

int SclDecoder::clone_path(int path) {
  const int copy = free_paths_.back();
  free_paths_.pop_back();
  active_[copy] = 1;
  metric_[copy] = metric_[path];
  for (int layer = 0; layer <= n_; ++layer) {
    const Slot s = path_slot_[layer][path];
    path_slot_[layer][copy] = s;
    ++ref_count_[layer][s];
  }
  return copy;
}

void SclDecoder::kill_path(int path) {
  active_[path] = 0;
  free_paths_.push_back(path);
  for (int layer = 0; layer <= n_; ++layer) {
    const Slot s = path_slot_[layer][path];
    if (--ref_count_[layer][s] == 0) free_slots_[layer].push_back(s);
  }
}

SclDecoder::Slot SclDecoder::detach(int layer, int path) {
  const Slot s = path_slot_[layer][path];
  if (ref_count_[layer][s] == 1) return s;
  const Slot fresh = free_slots_[layer].back();
  free_slots_[layer].pop_back();
  const std::size_t size = std::size_t{1} << (n_ - layer);
  std::copy_n(llr_[layer].begin() + s * size, size, llr_[layer].begin() + fresh * size);
  std::copy_n(bits_[layer].begin() + s * 2 * size, 2 * size, bits_[layer].begin() + fresh * 2 * size);
  --ref_count_[layer][s];
  ref_count_[layer][fresh] = 1;
  path_slot_[layer][path] = fresh;
  return fresh;
}

double* SclDecoder::llr_for_write(int layer, int path) {
  const std::size_t size = std::size_t{1} << (n_ - layer);
  return llr_[layer].data() + detach(layer, path) * size;
}

const double* SclDecoder::llr_for_read(int layer, int path) const {
  const std::size_t size = std::size_t{1} << (n_ - layer);
  return llr_[layer].data() + path_slot_[layer][path] * size;
}

std::uint8_t* SclDecoder::bits_for_write(int layer, int path) {
  const std::size_t size = std::size_t{2} << (n_ - layer);
  return bits_[layer].data() + detach(layer, path) * size;
}

const std::uint8_t* SclDecoder::bits_for_read(int layer, int path) const {
  const std::size_t size = std::size_t{2} << (n_ - layer);
  return bits_[layer].data() + path_slot_[layer][path] * size;
}

void SclDecoder::calc_llr(int layer, std::size_t phase) {
  if (layer == 0) return;
  if (phase % 2 == 0) calc_llr(layer - 1, phase >> 1);
  const std::size_t half = std::size_t{1} << (n_ - layer);
  for (std::size_t p = 0; p < list_size_; ++p) {
    if (active_[p] == 0) continue;
    const int path = static_cast<int>(p);
    double* out = llr_for_write(layer, path);
    const double* parent = llr_for_read(layer - 1, path);
    if (phase % 2 == 0) {
      for (std::size_t b = 0; b < half; ++b) out[b] = boxplus(parent[b], parent[b + half]);
    } else {
      const std::uint8_t* left = bits_for_read(layer, path);
      for (std::size_t b = 0; b < half; ++b) out[b] = g_update(parent[b], parent[b + half], left[b]);
    }
  }
}

void SclDecoder::update_bits(int layer, std::size_t phase) {
  const std::size_t half = std::size_t{1} << (n_ - layer);
  const std::size_t parent_phase = phase >> 1;
  for (std::size_t p = 0; p < list_size_; ++p) {
    if (active_[p] == 0) continue;
    const int path = static_cast<int>(p);
    std::uint8_t* dest = bits_for_write(layer - 1, path) + (parent_phase % 2) * (2 * half);
    const std::uint8_t* left = bits_for_read(layer, path);
    const std::uint8_t* right = left + half;
    for (std::size_t b = 0; b < half; ++b) {
      dest[b] = left[b] ^ right[b];
      dest[b + half] = right[b];
    }
  }
  if (parent_phase % 2 == 1) update_bits(layer - 1, parent_phase);
}

void SclDecoder::decide_frozen(std::size_t phase) {
  for (std::size_t p = 0; p < list_size_; ++p) {
    if (active_[p] == 0) continue;
    const int path = static_cast<int>(p);
    metric_[p] += decision_penalty(llr_for_read(n_, path)[0], 0);
    bits_for_write(n_, path)[phase % 2] = 0;
  }
}

void SclDecoder::split_and_prune(std::size_t phase) {
  candidates_.clear();
  for (std::size_t p = 0; p < list_size_; ++p) {
    if (active_[p] == 0) continue;
    const int path = static_cast<int>(p);
    const double llr = llr_for_read(n_, path)[0];
    candidates_.push_back({metric_[p] + decision_penalty(llr, 0), 0, path});
    candidates_.push_back({metric_[p] + decision_penalty(llr, 1), 1, path});
  }
  for (const Candidate& c : candidates_) fork_metric_[2 * c.path + c.bit] = c.metric;

  const std::size_t survivors = std::min(list_size_, candidates_.size());
  std::partial_sort(candidates_.begin(), candidates_.begin() + survivors, candidates_.end(),
                    [](const Candidate& a, const Candidate& b) {
                      if (a.metric != b.metric) return a.metric < b.metric;
                      if (a.bit != b.bit) return a.bit < b.bit;
                      return a.path < b.path;
                    });
  std::fill(keep_.begin(), keep_.end(), 0);
  for (std::size_t c = 0; c < survivors; ++c) keep_[2 * candidates_[c].path + candidates_[c].bit] = 1;

  forked_.clear();
  for (std::size_t p = 0; p < list_size_; ++p) {
    if (active_[p] == 0) continue;
    if (keep_[2 * p] == 0 && keep_[2 * p + 1] == 0) {
      kill_path(static_cast<int>(p));
    } else {
      forked_.push_back(static_cast<int>(p));
    }
  }
  const std::size_t parity = phase % 2;
  for (int path : forked_) {
    const bool keep_zero = keep_[2 * path] != 0;
    const bool keep_one = keep_[2 * path + 1] != 0;
    if (keep_zero && keep_one) {
      const int copy = clone_path(path);
      metric_[path] = fork_metric_[2 * path];
      bits_for_write(n_, path)[parity] = 0;
      metric_[copy] = fork_metric_[2 * path + 1];
      bits_for_write(n_, copy)[parity] = 1;
    } else {
      const std::uint8_t u = keep_one ? 1 : 0;
      metric_[path] = fork_metric_[2 * path + u];
      bits_for_write(n_, path)[parity] = u;
    }
  }
}

Bits SclDecoder::extract_info_bits(int path) {
  return info_bits_from_codeword(set_, std::span<const std::uint8_t>(bits_for_read(0, path), length_),
                                 scratch_);
}

DecoderOutput SclDecoder::decode(std::span<const double> llrs, bool dump_list) {
  if (llrs.size() != length_) {
    throw InvalidArgument("expected " + std::to_string(length_) + " LLRs, got " +
                          std::to_string(llrs.size()));
  }
  reset();
  const int root = assign_initial_path();
  double* channel = llr_for_write(0, root);
  for (std::size_t j = 0; j < length_; ++j) channel[j] = clamp_llr(llrs[j]);

  for (std::size_t phase = 0; phase < length_; ++phase) {
    calc_llr(n_, phase);
    if (set_.contains(static_cast<ChannelIndex>(phase))) {
      split_and_prune(phase);
    } else {
      decide_frozen(phase);
    }
    if (phase % 2 == 1) update_bits(n_, phase);
  }

  int best = -1;
  for (std::size_t p = 0; p < list_size_; ++p) {
    if (active_[p] == 0) continue;
    if (best < 0 || metric_[p] < metric_[best]) best = static_cast<int>(p);
  }

  DecoderOutput out;
  out.info_bits = extract_info_bits(best);
  out.path_metric = metric_[best];
  if (dump_list) {
    for (std::size_t p = 0; p < list_size_; ++p) {
      if (active_[p] == 0) continue;
      out.list.push_back({extract_info_bits(static_cast<int>(p)), metric_[p]});
    }
    std::stable_sort(out.list.begin(), out.list.end(),
                     [](const DecodedPath& a, const DecodedPath& b) { return a.path_metric < b.path_metric; });
  }
  return out;
}

}  // namespace polarmwd

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "polarmwd/codec.hpp"
#include "polarmwd/information_set.hpp"

namespace polarmwd {

// Q(x) = P[Z > x] for a standard normal Z.
double q_function(double x);

// BPSK over AWGN at Eb/N0 = ebn0_db for a code of rate `rate`.
struct ChannelModel {
  double ebn0_db = 0.0;
  double rate = 1.0;
  double sigma = 1.0;

  // Throws InvalidArgument unless rate is in (0, 1] and ebn0_db is finite.
  static ChannelModel make(double ebn0_db, double rate);
  double llr_scale() const noexcept { return 2.0 / (sigma * sigma); }
};

struct AubPoint {
  double ebn0_db = 0.0;
  double aub = 0.0;
};

// A_dmin Q(sqrt(2 d_min R Eb/N0)) per grid point, R = K/N. Throws
// NonDecreasingSet for sets outside the closed form's domain.
std::vector<AubPoint> aub(const InformationSet& set, std::span<const double> ebn0_db_grid);

// A decoder reduced to what the simulator needs. One instance per worker.
class FrameDecoder {
 public:
  virtual ~FrameDecoder() = default;
  virtual Bits decode(std::span<const double> llrs) = 0;
};

using DecoderFactory = std::function<std::unique_ptr<FrameDecoder>()>;

// SC for list_size 1, SCL otherwise.
DecoderFactory make_decoder_factory(const InformationSet& set, std::size_t list_size);

struct StopRule {
  std::uint64_t max_frames = 100000;
  std::uint64_t target_errors = 100;
};

struct BlerPoint {
  double ebn0_db = 0.0;
  std::uint64_t frames = 0;
  std::uint64_t errors = 0;
  double bler = 0.0;
  std::uint64_t master_seed = 0;
};

// Seed of frame `frame_index`'s generator; frames are independent of each
// other and of the order they are simulated in.
std::uint64_t frame_seed(std::uint64_t master_seed, std::uint64_t frame_index);

// The noisy observation of one frame, as the simulator draws it.
struct SimulatedFrame {
  Bits info_bits;
  std::vector<double> llrs;
};

SimulatedFrame draw_frame(const InformationSet& set, const ChannelModel& channel, std::uint64_t seed);

struct SimulationOptions {
  StopRule stop;
  std::uint64_t master_seed = 1;
  unsigned threads = 1;
};

// Monte-Carlo block error rate. The counted frames are exactly frames
// [0, frames): the run ends at the frame that produces the target-th error or
// at max_frames, so the result does not depend on `threads`.
BlerPoint simulate_bler(const InformationSet& set, const DecoderFactory& decoder, double ebn0_db,
                        const SimulationOptions& options);

struct RequiredSnrResult {
  double ebn0_db = 0.0;
  std::vector<BlerPoint> probes;  // in probing order
};

inline constexpr double kRequiredSnrStepDb = 0.1;

// Bisection over the grid lo, lo + 0.1, ..., hi. Each probe simulates up to
// ceil(target_errors / target_bler) frames, so a probe passes iff it sees
// fewer than target_errors errors in that budget (or stops early with
// measured BLER <= target). Returns the smallest passing grid point found.
// Throws InvalidArgument when hi does not pass.
RequiredSnrResult required_snr(const InformationSet& set, const DecoderFactory& decoder, double target_bler,
                               double lo_db, double hi_db, std::uint64_t master_seed, unsigned threads = 1,
                               std::uint64_t target_errors = 100);

}  // namespace polarmwd

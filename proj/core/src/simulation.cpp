#include "polarmwd/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <thread>

#include "polarmwd/errors.hpp"
#include "polarmwd/monomial.hpp"

namespace polarmwd {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t splitmix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class ScFrameDecoder final : public FrameDecoder {
 public:
  explicit ScFrameDecoder(const InformationSet& set) : decoder_(set) {}
  Bits decode(std::span<const double> llrs) override { return decoder_.decode(llrs).info_bits; }

 private:
  ScDecoder decoder_;
};

class SclFrameDecoder final : public FrameDecoder {
 public:
  SclFrameDecoder(const InformationSet& set, std::size_t list_size) : decoder_(set, list_size) {}
  Bits decode(std::span<const double> llrs) override { return decoder_.decode(llrs).info_bits; }

 private:
  SclDecoder decoder_;
};

double rate_of(const InformationSet& set) {
  return static_cast<double>(set.size()) / static_cast<double>(set.params().length());
}

}  // namespace

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

ChannelModel ChannelModel::make(double ebn0_db, double rate) {
  if (!(rate > 0.0) || rate > 1.0) throw InvalidArgument("rate must be in (0, 1]");
  if (!std::isfinite(ebn0_db)) throw InvalidArgument("Eb/N0 must be finite");
  const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
  return ChannelModel{ebn0_db, rate, std::sqrt(1.0 / (2.0 * rate * ebn0))};
}

std::vector<AubPoint> aub(const InformationSet& set, std::span<const double> ebn0_db_grid) {
  const MwdResult mwd = mwd_of(set);
  const auto* summary = std::get_if<MwdSummary>(&mwd);
  if (summary == nullptr) throw InvalidArgument("AUB is undefined for an empty information set");
  const double rate = rate_of(set);
  const double multiplicity = to_double(summary->a_dmin);
  std::vector<AubPoint> points;
  points.reserve(ebn0_db_grid.size());
  for (double ebn0_db : ebn0_db_grid) {
    const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
    points.push_back({ebn0_db, multiplicity * q_function(std::sqrt(2.0 * summary->d_min * rate * ebn0))});
  }
  return points;
}

DecoderFactory make_decoder_factory(const InformationSet& set, std::size_t list_size) {
  if (list_size == 0) throw InvalidArgument("list size must be at least 1");
  if (list_size == 1) {
    return [set]() -> std::unique_ptr<FrameDecoder> { return std::make_unique<ScFrameDecoder>(set); };
  }
  return [set, list_size]() -> std::unique_ptr<FrameDecoder> {
    return std::make_unique<SclFrameDecoder>(set, list_size);
  };
}

std::uint64_t frame_seed(std::uint64_t master_seed, std::uint64_t frame_index) {
  return splitmix64(splitmix64(master_seed) ^ (frame_index * kGolden));
}

SimulatedFrame draw_frame(const InformationSet& set, const ChannelModel& channel, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  SimulatedFrame frame;
  frame.info_bits.resize(set.size());
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < frame.info_bits.size(); ++i) {
    if (i % 64 == 0) word = gen();
    frame.info_bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  const Bits codeword = encode(set, frame.info_bits);
  std::normal_distribution<double> noise(0.0, channel.sigma);
  const double scale = channel.llr_scale();
  frame.llrs.resize(codeword.size());
  for (std::size_t i = 0; i < codeword.size(); ++i) {
    const double y = (codeword[i] != 0 ? -1.0 : 1.0) + noise(gen);
    frame.llrs[i] = scale * y;
  }
  return frame;
}

BlerPoint simulate_bler(const InformationSet& set, const DecoderFactory& decoder, double ebn0_db,
                        const SimulationOptions& options) {
  const StopRule& stop = options.stop;
  if (stop.max_frames == 0) throw InvalidArgument("stop rule needs max_frames >= 1");
  if (stop.target_errors == 0) throw InvalidArgument("stop rule needs target_errors >= 1");
  if (set.empty()) throw InvalidArgument("cannot simulate an empty information set");
  const ChannelModel channel = ChannelModel::make(ebn0_db, rate_of(set));
  const unsigned threads = std::max(1u, options.threads);

  std::vector<std::unique_ptr<FrameDecoder>> decoders;
  for (unsigned t = 0; t < threads; ++t) decoders.push_back(decoder());

  auto run_frames = [&](unsigned worker, std::uint64_t first, std::uint64_t count, std::uint8_t* failed) {
    FrameDecoder& dec = *decoders[worker];
    for (std::uint64_t f = worker; f < count; f += threads) {
      const SimulatedFrame frame = draw_frame(set, channel, frame_seed(options.master_seed, first + f));
      failed[f] = dec.decode(frame.llrs) != frame.info_bits ? 1 : 0;
    }
  };

  const std::uint64_t batch = std::max<std::uint64_t>(256, 64ull * threads);
  std::vector<std::uint8_t> failed(batch);
  BlerPoint point;
  point.ebn0_db = ebn0_db;
  point.master_seed = options.master_seed;

  while (point.frames < stop.max_frames && point.errors < stop.target_errors) {
    const std::uint64_t count = std::min(batch, stop.max_frames - point.frames);
    if (threads == 1) {
      run_frames(0, point.frames, count, failed.data());
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run_frames, t, point.frames, count, failed.data());
    }
    for (std::uint64_t f = 0; f < count; ++f) {
      ++point.frames;
      point.errors += failed[f];
      if (point.errors == stop.target_errors) break;
    }
  }
  point.bler = static_cast<double>(point.errors) / static_cast<double>(point.frames);
  return point;
}

RequiredSnrResult required_snr(const InformationSet& set, const DecoderFactory& decoder, double target_bler,
                               double lo_db, double hi_db, std::uint64_t master_seed, unsigned threads,
                               std::uint64_t target_errors) {
  if (!(target_bler > 0.0) || target_bler > 1.0) throw InvalidArgument("target BLER must be in (0, 1]");
  if (!std::isfinite(lo_db) || !std::isfinite(hi_db) || hi_db < lo_db) {
    throw InvalidArgument("search range must satisfy lo <= hi");
  }
  if (target_errors == 0) throw InvalidArgument("target_errors must be at least 1");

  RequiredSnrResult result;
  if (target_bler >= 1.0) {
    result.ebn0_db = lo_db;
    return result;
  }

  const auto steps = static_cast<long>(std::llround((hi_db - lo_db) / kRequiredSnrStepDb));
  auto grid = [&](long i) { return lo_db + static_cast<double>(i) * kRequiredSnrStepDb; };

  SimulationOptions options;
  options.stop.target_errors = target_errors;
  options.stop.max_frames = static_cast<std::uint64_t>(std::ceil(static_cast<double>(target_errors) / target_bler));
  options.master_seed = master_seed;
  options.threads = threads;

  std::map<long, bool> passed;
  auto probe = [&](long i) {
    if (auto it = passed.find(i); it != passed.end()) return it->second;
    const BlerPoint point = simulate_bler(set, decoder, grid(i), options);
    result.probes.push_back(point);
    return passed[i] = point.bler <= target_bler;
  };

  if (!probe(steps)) {
    throw InvalidArgument("search range does not bracket the target: BLER above target at " +
                          std::to_string(grid(steps)) + " dB");
  }
  long fail = -1;
  long pass = steps;
  if (probe(0)) {
    pass = 0;
  } else {
    fail = 0;
  }
  while (pass - fail > 1) {
    const long mid = fail + (pass - fail) / 2;
    if (probe(mid)) {
      pass = mid;
    } else {
      fail = mid;
    }
  }
  result.ebn0_db = grid(pass);
  return result;
}

}  // namespace polarmwd

#include "polarmwd/construction.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "polarmwd/errors.hpp"
#include "polarmwd/monomial.hpp"

namespace polarmwd {

namespace {

CodeParams params_for_order(const std::vector<ChannelIndex>& order) {
  return CodeParams::from_length(order.size());
}

ReliabilitySequence sequence_by_score(std::size_t length, const std::vector<double>& score) {
  std::vector<ChannelIndex> order(length);
  std::iota(order.begin(), order.end(), ChannelIndex{0});
  std::sort(order.begin(), order.end(), [&](ChannelIndex a, ChannelIndex b) {
    if (score[a] != score[b]) return score[a] > score[b];
    return a > b;
  });
  return ReliabilitySequence(std::move(order));
}

}  // namespace

ReliabilitySequence::ReliabilitySequence(std::vector<ChannelIndex> order)
    : params_(params_for_order(order)), order_(std::move(order)), position_(order_.size()) {
  std::vector<std::uint8_t> seen(order_.size(), 0);
  for (std::size_t pos = 0; pos < order_.size(); ++pos) {
    const ChannelIndex index = order_[pos];
    if (index >= order_.size()) {
      throw InvalidArgument("sequence entry " + std::to_string(index) + " out of range for N=" +
                            std::to_string(order_.size()));
    }
    if (seen[index] != 0) {
      throw InvalidArgument("sequence entry " + std::to_string(index) + " appears twice");
    }
    seen[index] = 1;
    position_[index] = pos;
  }
}

ReliabilitySequence mwd_sequence(const CodeParams& params) {
  const std::size_t length = params.length();
  std::vector<PartialMwd> partial(length);
  for (std::size_t i = 0; i < length; ++i) partial[i] = partial_mwd_of(params, static_cast<ChannelIndex>(i));

  std::vector<ChannelIndex> order(length);
  std::iota(order.begin(), order.end(), ChannelIndex{0});
  std::sort(order.begin(), order.end(), [&](ChannelIndex a, ChannelIndex b) {
    if (partial[a].d_log != partial[b].d_log) return partial[a].d_log > partial[b].d_log;
    if (partial[a].a_log != partial[b].a_log) return partial[a].a_log < partial[b].a_log;
    return a > b;
  });
  return ReliabilitySequence(std::move(order));
}

InformationSet information_set_from_sequence(const ReliabilitySequence& sequence, std::size_t k) {
  if (k == 0 || k > sequence.length()) {
    throw InvalidArgument("information length K must be in [1, " + std::to_string(sequence.length()) +
                          "], got " + std::to_string(k));
  }
  const auto order = sequence.order();
  return InformationSet(sequence.params(), std::vector<ChannelIndex>(order.begin(), order.begin() + k));
}

PwWeights pw_weights(const CodeParams& params) {
  PwWeights pw;
  pw.weights.resize(params.length());
  for (std::size_t i = 0; i < params.length(); ++i) {
    double w = 0.0;
    for (int l = 0; l < params.n(); ++l) {
      if (((i >> l) & 1u) != 0) w += std::exp2(l / 4.0);
    }
    pw.weights[i] = w;
  }
  return pw;
}

ReliabilitySequence pw_sequence(const CodeParams& params) {
  return sequence_by_score(params.length(), pw_weights(params).weights);
}

// Two-segment approximation of phi(x) = 1 - E[tanh(L/2)], L ~ N(x, 2x).
double ga_log_phi(double mean) {
  if (!(mean > 0.0)) return 0.0;
  // The power-law segment exceeds 1 near zero; a quadratic-exponent segment
  // with phi(0) = 1 takes over below the point where the two meet.
  if (mean <= 0.867861) return 0.0564 * mean * mean - 0.48560 * mean;
  if (mean < 10.0) return -0.4527 * std::pow(mean, 0.86) + 0.0218;
  return 0.5 * std::log(std::numbers::pi / mean) - mean / 4.0 + std::log1p(-10.0 / (7.0 * mean));
}

double ga_check_node_mean(double mean) {
  if (!(mean > 0.0)) return 0.0;
  // phi(out) = 1 - (1 - phi(in))^2 = phi(in) (2 - phi(in)).
  const double log_phi = ga_log_phi(mean);
  const double target = log_phi + std::log1p(-std::expm1(log_phi));
  if (target >= 0.0) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  while (ga_log_phi(hi) > target) hi *= 2.0;
  for (int iter = 0; iter < 400 && hi - lo > 1e-10 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (ga_log_phi(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

GaState ga_llr_means(const CodeParams& params, double design_snr_db, double rate) {
  if (!(rate > 0.0) || rate > 1.0) throw InvalidArgument("rate must be in (0, 1]");
  if (!std::isfinite(design_snr_db)) throw InvalidArgument("design SNR must be finite");

  // sigma^2 = 1 / (2 R Eb/N0); the channel LLR 2y/sigma^2 has mean 2/sigma^2.
  const double root = 4.0 * rate * std::pow(10.0, design_snr_db / 10.0);
  std::vector<double> means{root};
  // Expand from the channel side: the most significant index bit selects the
  // branch nearest the channel (0 = check node, 1 = variable node).
  for (int level = 0; level < params.n(); ++level) {
    std::vector<double> next(means.size() * 2);
    for (std::size_t p = 0; p < means.size(); ++p) {
      next[2 * p] = ga_check_node_mean(means[p]);
      next[2 * p + 1] = 2.0 * means[p];
    }
    means = std::move(next);
  }
  return GaState{design_snr_db, rate, std::move(means)};
}

ReliabilitySequence ga_sequence(const GaState& ga) {
  return sequence_by_score(ga.llr_means.size(), ga.llr_means);
}

const QuadratureRule& gauss_hermite_rule() {
  // Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix of the
  // Hermite recurrence, weights sqrt(pi) times the squared first components.
  static const QuadratureRule rule = [] {
    const auto size = static_cast<Eigen::Index>(kEntropyQuadratureNodes);
    Eigen::VectorXd diagonal = Eigen::VectorXd::Zero(size);
    Eigen::VectorXd off(size - 1);
    for (Eigen::Index k = 1; k < size; ++k) off(k - 1) = std::sqrt(static_cast<double>(k) / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diagonal, off, Eigen::ComputeEigenvectors);
    QuadratureRule r;
    r.nodes.resize(kEntropyQuadratureNodes);
    r.weights.resize(kEntropyQuadratureNodes);
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    for (Eigen::Index k = 0; k < size; ++k) {
      r.nodes[k] = solver.eigenvalues()(k);
      const double v = solver.eigenvectors()(0, k);
      r.weights[k] = sqrt_pi * v * v;
    }
    return r;
  }();
  return rule;
}

double channel_entropy(double llr_mean) {
  if (!(llr_mean > 0.0)) return 1.0;
  if (std::isinf(llr_mean)) return 0.0;
  const QuadratureRule& rule = gauss_hermite_rule();
  // L = mean + sqrt(2 * 2 mean) x turns the Gaussian expectation into the
  // Hermite weight e^{-x^2}.
  const double scale = 2.0 * std::sqrt(llr_mean);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double l = llr_mean + scale * rule.nodes[k];
    const double softplus = std::max(-l, 0.0) + std::log1p(std::exp(-std::abs(l)));
    sum += rule.weights[k] * softplus;
  }
  const double h = sum / (std::sqrt(std::numbers::pi) * std::numbers::ln2);
  return std::clamp(h, 0.0, 1.0);
}

ChannelEntropies channel_entropies(const GaState& ga) {
  ChannelEntropies h;
  h.bits.reserve(ga.llr_means.size());
  for (double m : ga.llr_means) h.bits.push_back(channel_entropy(m));
  return h;
}

}  // namespace polarmwd

#include "polarmwd/monomial.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <limits>

#include "polarmwd/codec.hpp"
#include "polarmwd/errors.hpp"

namespace polarmwd {

std::string to_string(Count value) {
  if (value == 0) return "0";
  std::string digits;
  while (value != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

double to_double(Count value) {
  const auto high = static_cast<std::uint64_t>(value >> 64);
  const auto low = static_cast<std::uint64_t>(value);
  return static_cast<double>(high) * 18446744073709551616.0 + static_cast<double>(low);
}

const char* to_string(PoRelation relation) {
  switch (relation) {
    case PoRelation::kEqual: return "equal";
    case PoRelation::kAPrecedesB: return "a_precedes_b";
    case PoRelation::kBPrecedesA: return "b_precedes_a";
    case PoRelation::kIncomparable: return "incomparable";
  }
  return "?";
}

Monomial monomial_of(const CodeParams& params, ChannelIndex index) {
  if (index >= params.length()) {
    throw InvalidArgument("channel index " + std::to_string(index) + " out of range for N=" +
                          std::to_string(params.length()));
  }
  Monomial m;
  m.index = index;
  m.n = params.n();
  for (int l = 0; l < params.n(); ++l) {
    if (((index >> l) & 1u) == 0) m.variables.push_back(l);
  }
  return m;
}

int lambda_of(const Monomial& m) {
  const long long deg = m.degree();
  long long value = deg * (1 - deg) / 2;
  for (int v : m.variables) value += v;
  assert(value >= 0);
  return static_cast<int>(value);
}

PartialMwd partial_mwd_of(const CodeParams& params, ChannelIndex index) {
  const Monomial m = monomial_of(params, index);
  PartialMwd p{params.n() - m.degree(), m.degree() + lambda_of(m)};
  assert(p.d_log >= 0 && p.d_log <= params.n());
  assert(p.a_log >= 0);
  return p;
}

namespace {

// Compares a against the top a.degree() variables of b, elementwise.
bool dominated_by_top(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t offset = b.size() - a.size();
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (a[m] > b[offset + m]) return false;
  }
  return true;
}

bool dominated_by_some_divisor(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t k = a.size();
  const std::size_t d = b.size();
  // Walk all k-subsets of b's variables in lexicographic order of positions.
  std::vector<std::size_t> pick(k);
  for (std::size_t m = 0; m < k; ++m) pick[m] = m;
  while (true) {
    bool ok = true;
    for (std::size_t m = 0; m < k && ok; ++m) ok = a[m] <= b[pick[m]];
    if (ok) return true;
    std::size_t m = k;
    while (m > 0 && pick[m - 1] == d - k + (m - 1)) --m;
    if (m == 0) return false;
    ++pick[m - 1];
    for (std::size_t r = m; r < k; ++r) pick[r] = pick[r - 1] + 1;
  }
}

}  // namespace

PoRelation po_compare_same_degree(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) {
    throw InvalidArgument("po_compare_same_degree: degree mismatch (" + std::to_string(a.degree()) +
                          " vs " + std::to_string(b.degree()) + ")");
  }
  bool a_le = true;
  bool b_le = true;
  for (std::size_t m = 0; m < a.variables.size(); ++m) {
    a_le = a_le && a.variables[m] <= b.variables[m];
    b_le = b_le && b.variables[m] <= a.variables[m];
  }
  if (a_le && b_le) return PoRelation::kEqual;
  if (a_le) return PoRelation::kAPrecedesB;
  if (b_le) return PoRelation::kBPrecedesA;
  return PoRelation::kIncomparable;
}

PoRelation po_compare(const Monomial& a, const Monomial& b) {
  if (a.degree() == b.degree()) return po_compare_same_degree(a, b);
  if (a.degree() < b.degree()) {
    return dominated_by_top(a.variables, b.variables) ? PoRelation::kAPrecedesB
                                                       : PoRelation::kIncomparable;
  }
  return dominated_by_top(b.variables, a.variables) ? PoRelation::kBPrecedesA
                                                     : PoRelation::kIncomparable;
}

PoRelation po_compare_divisor_search(const Monomial& a, const Monomial& b) {
  if (a.degree() == b.degree()) return po_compare_same_degree(a, b);
  if (a.degree() < b.degree()) {
    return dominated_by_some_divisor(a.variables, b.variables) ? PoRelation::kAPrecedesB
                                                                : PoRelation::kIncomparable;
  }
  return dominated_by_some_divisor(b.variables, a.variables) ? PoRelation::kBPrecedesA
                                                              : PoRelation::kIncomparable;
}

bool is_decreasing_set(const InformationSet& set) {
  // The order is generated by two covering moves: dropping a variable (set a
  // zero bit) and replacing x_l by x_{l-1} when x_{l-1} is absent (move a zero
  // from bit l down to bit l-1). Closure under both is closure under the order.
  const int n = set.params().n();
  for (ChannelIndex j : set.indices()) {
    for (int l = 0; l < n; ++l) {
      if (((j >> l) & 1u) != 0) continue;
      if (!set.contains(j | (ChannelIndex{1} << l))) return false;
      if (l >= 1 && ((j >> (l - 1)) & 1u) != 0) {
        if (!set.contains(j + (ChannelIndex{1} << (l - 1)))) return false;
      }
    }
  }
  return true;
}

MwdResult mwd_of(const InformationSet& set) {
  if (set.empty()) return EmptyCode{};
  if (!is_decreasing_set(set)) throw NonDecreasingSet();

  const CodeParams& params = set.params();
  int r_max = 0;
  for (ChannelIndex i : set.indices()) {
    r_max = std::max(r_max, params.n() - std::popcount(i));
  }
  Count sum = 0;
  for (ChannelIndex i : set.indices()) {
    const Monomial m = monomial_of(params, i);
    if (m.degree() == r_max) sum += Count{1} << lambda_of(m);
  }
  MwdSummary summary;
  summary.r_max = r_max;
  summary.d_min = std::uint32_t{1} << (params.n() - r_max);
  summary.a_dmin = sum << r_max;
  return summary;
}

MwdResult brute_force_mwd(const InformationSet& set) {
  const std::size_t k = set.size();
  if (k > kMaxBruteForceDimension) {
    throw InvalidArgument("brute-force enumeration limited to K <= " +
                          std::to_string(kMaxBruteForceDimension) + ", got K=" + std::to_string(k));
  }
  if (k == 0) return EmptyCode{};

  const std::size_t length = set.params().length();
  const std::size_t words = (length + 63) / 64;

  // Generator rows are the encoder's images of the unit messages.
  std::vector<std::uint64_t> rows(k * words, 0);
  std::vector<std::uint8_t> u(length);
  for (std::size_t r = 0; r < k; ++r) {
    std::fill(u.begin(), u.end(), 0);
    u[set.indices()[r]] = 1;
    polar_transform(u);
    for (std::size_t j = 0; j < length; ++j) {
      if (u[j] != 0) rows[r * words + j / 64] |= std::uint64_t{1} << (j % 64);
    }
  }

  std::vector<std::uint64_t> codeword(words, 0);
  std::uint32_t d_min = std::numeric_limits<std::uint32_t>::max();
  Count count = 0;
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t g = 1; g < total; ++g) {
    // Gray-code walk: consecutive messages differ in exactly one row.
    const int flip = std::countr_zero(g);
    const std::uint64_t* row = &rows[static_cast<std::size_t>(flip) * words];
    std::uint32_t weight = 0;
    for (std::size_t w = 0; w < words; ++w) {
      codeword[w] ^= row[w];
      weight += static_cast<std::uint32_t>(std::popcount(codeword[w]));
    }
    if (weight < d_min) {
      d_min = weight;
      count = 1;
    } else if (weight == d_min) {
      ++count;
    }
  }

  MwdSummary summary;
  summary.d_min = d_min;
  summary.a_dmin = count;
  summary.r_max = set.params().n() - std::countr_zero(d_min);
  return summary;
}

}  // namespace polarmwd

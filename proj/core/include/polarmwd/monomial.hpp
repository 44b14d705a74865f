#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "polarmwd/information_set.hpp"

namespace polarmwd {

// Exact codeword multiplicity.
__extension__ typedef unsigned __int128 Count;

std::string to_string(Count value);
double to_double(Count value);

// Channel i viewed as the monomial prod_{l : b_l(i) = 0} x_l, with b_0 the
// least significant bit of i.
struct Monomial {
  ChannelIndex index = 0;
  int n = 0;
  std::vector<int> variables;  // strictly increasing, each in [0, n)

  int degree() const noexcept { return static_cast<int>(variables.size()); }
  int bit(int position) const noexcept { return static_cast<int>((index >> position) & 1u); }
};

// d_i = 2^d_log and A_i = 2^a_log; both are powers of two by construction.
struct PartialMwd {
  int d_log = 0;
  int a_log = 0;

  friend bool operator==(const PartialMwd&, const PartialMwd&) = default;
};

struct MwdSummary {
  std::uint32_t d_min = 0;
  Count a_dmin = 0;
  int r_max = 0;

  friend bool operator==(const MwdSummary&, const MwdSummary&) = default;
};

// The code with no information bits has no nonzero codeword.
struct EmptyCode {
  friend bool operator==(const EmptyCode&, const EmptyCode&) = default;
};

using MwdResult = std::variant<EmptyCode, MwdSummary>;

enum class PoRelation { kEqual, kAPrecedesB, kBPrecedesA, kIncomparable };

const char* to_string(PoRelation relation);

Monomial monomial_of(const CodeParams& params, ChannelIndex index);

// |lambda_f| = deg(1 - deg)/2 + sum of variable indices.
int lambda_of(const Monomial& m);

PartialMwd partial_mwd_of(const CodeParams& params, ChannelIndex index);

// Same-degree order: a precedes b iff a's variables are elementwise <= b's.
// Throws InvalidArgument on degree mismatch.
PoRelation po_compare_same_degree(const Monomial& a, const Monomial& b);

// Full order: a lower-degree monomial precedes b iff it precedes the divisor of
// b built from b's largest variables.
PoRelation po_compare(const Monomial& a, const Monomial& b);

// Reference form of po_compare that searches every same-degree divisor.
PoRelation po_compare_divisor_search(const Monomial& a, const Monomial& b);

bool is_decreasing_set(const InformationSet& set);

// Closed-form (d_min, A_dmin) of a decreasing monomial code. Throws
// NonDecreasingSet when the set is not downward-closed.
MwdResult mwd_of(const InformationSet& set);

// Enumerates all 2^K codewords through the encoder.
inline constexpr std::size_t kMaxBruteForceDimension = 24;
MwdResult brute_force_mwd(const InformationSet& set);

}  // namespace polarmwd

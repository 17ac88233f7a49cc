#pragma once

#include <string>
#include <vector>

#include "entropic/box.hpp"
#include "entropic/rational.hpp"

namespace entropic {

/// One party's two-copy wiring over binary inputs and d outcomes:
/// first input f1(x), second input f2(x, a1), output g(x, a1, a2).
struct PartyWiring {
  int outcomes = 2;
  std::vector<int> first;   // [x]
  std::vector<int> second;  // [x * d + a1]
  std::vector<int> output;  // [(x * d + a1) * d + a2]

  int f1(int x) const { return first.at(static_cast<std::size_t>(x)); }
  int f2(int x, int a1) const { return second.at(static_cast<std::size_t>(x * outcomes + a1)); }
  int g(int x, int a1, int a2) const {
    return output.at(static_cast<std::size_t>((x * outcomes + a1) * outcomes + a2));
  }
};

struct Wiring {
  std::string name;
  PartyWiring alice, bob;
};

/// Builds a party wiring by evaluating the three maps on every argument.
template <class F1, class F2, class G>
PartyWiring make_party_wiring(int d, F1 f1, F2 f2, G g) {
  PartyWiring w;
  w.outcomes = d;
  for (int x = 0; x < 2; ++x) w.first.push_back(f1(x));
  for (int x = 0; x < 2; ++x)
    for (int a1 = 0; a1 < d; ++a1) w.second.push_back(f2(x, a1));
  for (int x = 0; x < 2; ++x)
    for (int a1 = 0; a1 < d; ++a1)
      for (int a2 = 0; a2 < d; ++a2) w.output.push_back(g(x, a1, a2));
  return w;
}

/// x1 = x2 = x, a = a1 xor a2 (both parties).
Wiring foster_wiring();
/// A: x1 = x, x2 = x xor a1 xor 1, a = a1 xor a2 xor 1.
/// B: y1 = 1, y2 = y b1, b = b1 xor b2 xor 1.
Wiring cavalcanti_wiring();
/// As cavalcanti_wiring but with Bob's first input y1 = y.
Wiring cavalcanti_y_wiring();
/// x1 = x, x2 = x a1 mod 2, a = a1 + a2 mod d (both parties).
Wiring generalized_wiring(int d);
/// "foster", "cavalcanti", "cavalcanti_y", "generalized:d".
Wiring wiring_library(const std::string& name);

/// Throws std::invalid_argument when the maps leave their alphabets.
void validate(const Wiring& w);

/// Two copies of a bell(2,2,d) box composed by the wiring. Exact boxes
/// stay exact.
MarginalModel wire(const MarginalModel& box, const Wiring& w);

struct Decomposition {
  Rational q_exact = 0;  // exact for the (rounded) LP data, zeroed below 1e-9 for real boxes
  double q = 0;
  std::vector<double> local_weights;  // per deterministic box, index (a0 a1 b0 b1) in base d
  MarginalModel nonlocal_part;        // set when q > 0
  double residual = 0;                // reconstruction error of (1-q) P^L + q P^NL
};

/// Deterministic local box with outputs a_x = a[x], b_y = b[y].
MarginalModel deterministic_box(int d, int a0, int a1, int b0, int b1);

/// EPR2 nonlocal content by exact LP over the d^4 local deterministic
/// boxes: maximize the local weight w subject to sum w_k D_k <= P
/// entrywise; q = 1 - w. Real tables are rounded to dyadic rationals.
Decomposition nonlocal_content(const MarginalModel& box);

double distillation_gain(const MarginalModel& box, const Wiring& w);

}  // namespace entropic

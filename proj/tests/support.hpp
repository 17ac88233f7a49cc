#pragma once

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "entropic/box.hpp"

namespace support {

using nlohmann::json;

inline const json& oracles() {
  static const json j = [] {
    std::ifstream in(ENTROPIC_ORACLES);
    if (!in) throw std::runtime_error("missing oracle file " ENTROPIC_ORACLES);
    return json::parse(in);
  }();
  return j;
}

/// Largest entrywise gap between the box and flattened oracle tables.
inline double table_gap(const entropic::MarginalModel& box, const json& tables) {
  double gap = 0;
  const auto& sc = box.scenario();
  for (const auto& [name, t] : tables.items()) {
    const auto& mine = box.table(sc.parse_subset(name));
    REQUIRE(mine.size() == t.size());
    for (std::size_t i = 0; i < mine.size(); ++i) gap = std::max(gap, std::abs(mine[i] - t[i].get<double>()));
  }
  return gap;
}

inline double entropy_gap(const entropic::MarginalModel& box, const json& entropies) {
  const auto h = entropic::entropy_vector(box);
  double gap = 0;
  for (const auto& [name, v] : entropies.items())
    gap = std::max(gap, std::abs(h.at(box.scenario().parse_subset(name)) - v.get<double>()));
  return gap;
}

inline entropic::EntropicInequality from_map(const json& coeffs, const entropic::MarginalScenario& sc) {
  entropic::EntropicInequality e;
  for (const auto& [name, c] : coeffs.items()) e.coeffs[sc.parse_subset(name)] = entropic::Rational(c.get<long>());
  return entropic::canonical(e);
}

inline std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t n, double sparsity) {
  std::exponential_distribution<double> ex(1.0);
  std::bernoulli_distribution drop(sparsity);
  std::vector<double> p(n);
  double total = 0;
  for (auto& v : p) total += (v = drop(rng) ? 0.0 : ex(rng));
  if (total == 0) p[0] = total = 1;
  for (auto& v : p) v /= total;
  return p;
}

/// Bilocal model: lambda1 fixes (A0, A1), lambda2 fixes (C0, C1), B reads both.
inline entropic::MarginalModel random_bilocal(std::mt19937_64& rng, double sparsity) {
  const auto pa = random_distribution(rng, 4, sparsity);
  const auto pc = random_distribution(rng, 4, sparsity);
  std::vector<std::vector<double>> pb;
  for (int k = 0; k < 16; ++k) pb.push_back(random_distribution(rng, 2, sparsity));
  std::vector<double> joint(32);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t c = 0; c < 4; ++c) joint[(a * 2 + b) * 4 + c] = pa[a] * pc[c] * pb[a * 4 + c][b];
  return entropic::box_from_joint(entropic::bilocality(), joint);
}

}  // namespace support

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "entropic/box.hpp"
#include "entropic/entcone.hpp"
#include "entropic/optimize.hpp"
#include "entropic/studies.hpp"

namespace entropic::io {

using nlohmann::json;

/// {"observables", "maximal_contexts", "cardinalities", "independences"}.
json to_json(const MarginalScenario& sc);
MarginalScenario scenario_from_json(const json& j);

/// {"scenario": object or builtin name, "tables": {"A0,B0": {"0,1": p}}}.
/// Probabilities are numbers or "num/den" strings; the box is exact when
/// every entry is a string or an integer.
json to_json(const MarginalModel& box);
MarginalModel box_from_json(const json& j);

/// Integer-valued rationals as numbers, others as "num/den".
json to_json(const Rational& q);
json to_json(const EntropicInequality& ineq, const MarginalScenario& sc);

struct FacetReport {
  MarginalScenario scenario;
  ConeProjection projection;
  std::vector<bool> trivial;                // per inequality
  std::vector<InequalityClass> classes;
  std::vector<bool> class_trivial;
  std::size_t group_order = 0;
};

FacetReport derive(const MarginalScenario& sc, const ProjectionOptions& options = {});
json to_json(const FacetReport& r);
/// Human-readable listing: equations, then classes with their members.
std::string facet_table(const FacetReport& r);

json to_json(const OptimizationReport& r, const Objective& obj, std::uint64_t seed);

json read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace entropic::io

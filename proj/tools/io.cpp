#include "io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace entropic::io {

json to_json(const MarginalScenario& sc) {
  json j;
  j["observables"] = sc.observables();
  json ctx = json::array();
  for (ObsSet m : sc.maximal_contexts()) {
    json names = json::array();
    for (std::size_t i : sc.members(m)) names.push_back(sc.observables()[i]);
    ctx.push_back(names);
  }
  j["maximal_contexts"] = ctx;
  json cards = json::object();
  for (std::size_t i = 0; i < sc.size(); ++i) cards[sc.observables()[i]] = sc.cardinality(i);
  j["cardinalities"] = cards;
  json ind = json::array();
  for (const auto& p : sc.independences()) {
    json a = json::array(), b = json::array();
    for (std::size_t i : sc.members(p.first)) a.push_back(sc.observables()[i]);
    for (std::size_t i : sc.members(p.second)) b.push_back(sc.observables()[i]);
    ind.push_back(json::array({a, b}));
  }
  j["independences"] = ind;
  if (!sc.label().empty()) j["label"] = sc.label();
  return j;
}

MarginalScenario scenario_from_json(const json& j) {
  if (j.is_string()) return named_scenario(j.get<std::string>());
  if (!j.is_object()) throw std::invalid_argument("scenario must be an object or a builtin name");
  auto obs = j.at("observables").get<std::vector<std::string>>();
  auto ctx = j.at("maximal_contexts").get<std::vector<std::vector<std::string>>>();
  std::map<std::string, int> cards;
  if (j.contains("cardinalities")) cards = j.at("cardinalities").get<std::map<std::string, int>>();
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> ind;
  if (j.contains("independences")) {
    for (const auto& p : j.at("independences")) {
      if (!p.is_array() || p.size() != 2) throw std::invalid_argument("an independence is a pair of name lists");
      ind.emplace_back(p[0].get<std::vector<std::string>>(), p[1].get<std::vector<std::string>>());
    }
  }
  auto sc = MarginalScenario::from_names(std::move(obs), ctx, cards, ind);
  if (j.contains("label")) sc.set_label(j.at("label").get<std::string>());
  return sc;
}

json to_json(const Rational& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return to_string(q);
}

json to_json(const MarginalModel& box) {
  const auto& sc = box.scenario();
  json j;
  j["scenario"] = to_json(sc);
  json tables = json::object();
  const bool exact = box.is_exact();
  for (ObsSet m : sc.maximal_contexts()) {
    json t = json::object();
    for (std::size_t i = 0; i < box.table_size(m); ++i) {
      std::string key;
      for (int o : box.decode(m, i)) key += (key.empty() ? "" : ",") + std::to_string(o);
      if (exact) {
        const Rational& q = box.exact_table(m)[i];
        t[key] = to_string(q);
      } else {
        t[key] = box.table(m)[i];
      }
    }
    tables[sc.subset_name(m)] = t;
  }
  j["tables"] = tables;
  return j;
}

MarginalModel box_from_json(const json& j) {
  const MarginalScenario sc = scenario_from_json(j.at("scenario"));
  const json& tables = j.at("tables");
  if (!tables.is_object()) throw std::invalid_argument("tables must be an object keyed by context");
  MarginalModel box(sc);
  bool exact = true;
  for (const auto& [name, t] : tables.items())
    for (const auto& [k, v] : t.items()) exact = exact && (v.is_string() || v.is_number_integer());
  for (const auto& [name, t] : tables.items()) {
    const ObsSet m = sc.parse_subset(name);
    if (std::find(sc.maximal_contexts().begin(), sc.maximal_contexts().end(), m) == sc.maximal_contexts().end())
      throw std::invalid_argument("table for a non-maximal context: " + name);
    const std::size_t n = box.table_size(m);
    std::vector<Rational> q(n, Rational(0));
    std::vector<double> d(n, 0.0);
    std::vector<bool> seen(n, false);
    for (const auto& [key, v] : t.items()) {
      std::vector<int> outcomes;
      std::stringstream ss(key);
      std::string tok;
      while (std::getline(ss, tok, ',')) outcomes.push_back(std::stoi(tok));
      const std::size_t idx = box.encode(m, outcomes);
      if (seen[idx]) throw std::invalid_argument("duplicate outcome " + key + " in " + name);
      seen[idx] = true;
      if (v.is_string()) {
        q[idx] = parse_rational(v.get<std::string>());
        d[idx] = q[idx].get_d();
      } else if (v.is_number_integer()) {
        q[idx] = Rational(v.get<long>());
        d[idx] = q[idx].get_d();
      } else if (v.is_number()) {
        d[idx] = v.get<double>();
      } else {
        throw std::invalid_argument("probabilities must be numbers or rational strings");
      }
    }
    if (exact) box.set_table(m, std::move(q));
    else box.set_table(m, std::move(d));
  }
  for (ObsSet m : sc.maximal_contexts())
    if (!box.has_table(m)) throw std::invalid_argument("missing table for context " + sc.subset_name(m));
  return box;
}

json to_json(const EntropicInequality& ineq, const MarginalScenario& sc) {
  json c = json::object();
  for (const auto& [s, q] : ineq.coeffs) c[sc.subset_name(s)] = to_json(q);
  return c;
}

FacetReport derive(const MarginalScenario& sc, const ProjectionOptions& options) {
  FacetReport r;
  r.scenario = sc;
  r.projection = project(sc, options);
  for (const auto& e : r.projection.inequalities) r.trivial.push_back(is_trivial(e, sc));
  const SymmetryGroup g = symmetries(sc);
  r.group_order = g.order();
  r.classes = classify(r.projection.inequalities, g, r.projection.equations);
  for (const auto& c : r.classes) r.class_trivial.push_back(is_trivial(c.representative, sc));
  return r;
}

json to_json(const FacetReport& r) {
  const auto& sc = r.scenario;
  json j;
  j["scenario"] = to_json(sc);
  json coords = json::array();
  for (ObsSet s : r.projection.coordinates) coords.push_back(sc.subset_name(s));
  j["coordinates"] = coords;
  json eqs = json::array();
  for (const auto& e : r.projection.equations)
    eqs.push_back({{"coefficients", to_json(e, sc)}, {"text", format_inequality(e, sc, "= 0")}});
  j["equations"] = eqs;
  json ineqs = json::array();
  for (std::size_t i = 0; i < r.projection.inequalities.size(); ++i) {
    const auto& e = r.projection.inequalities[i];
    std::size_t cls = 0;
    for (std::size_t c = 0; c < r.classes.size(); ++c)
      if (std::find(r.classes[c].orbit.begin(), r.classes[c].orbit.end(), e) != r.classes[c].orbit.end()) cls = c + 1;
    ineqs.push_back({{"coefficients", to_json(e, sc)},
                     {"text", format_inequality(e, sc)},
                     {"trivial", static_cast<bool>(r.trivial[i])},
                     {"class", cls}});
  }
  j["inequalities"] = ineqs;
  json classes = json::array();
  for (std::size_t c = 0; c < r.classes.size(); ++c)
    classes.push_back({{"representative", format_inequality(r.classes[c].representative, sc)},
                       {"coefficients", to_json(r.classes[c].representative, sc)},
                       {"size", r.classes[c].orbit.size()},
                       {"trivial", static_cast<bool>(r.class_trivial[c])}});
  j["classes"] = classes;
  j["symmetry_group_order"] = r.group_order;
  json prog = json::array();
  for (const auto& p : r.projection.progress)
    prog.push_back({{"eliminated", p.eliminated},
                    {"remaining_coordinates", p.remaining_coordinates},
                    {"combinations", p.combinations},
                    {"inequalities", p.inequalities},
                    {"equations", p.equations}});
  j["progress"] = prog;
  j["summary"] = {{"equations", r.projection.equations.size()},
                  {"inequalities", r.projection.inequalities.size()},
                  {"classes", r.classes.size()},
                  {"nontrivial_inequalities",
                   std::count(r.trivial.begin(), r.trivial.end(), false)}};
  return j;
}

std::string facet_table(const FacetReport& r) {
  std::ostringstream out;
  const auto& sc = r.scenario;
  out << "scenario " << (sc.label().empty() ? "(file)" : sc.label()) << ": " << r.projection.equations.size()
      << " equations, " << r.projection.inequalities.size() << " inequalities, " << r.classes.size()
      << " classes (group order " << r.group_order << ")\n";
  for (const auto& e : r.projection.equations) out << "  " << format_inequality(e, sc, "= 0") << '\n';
  for (std::size_t c = 0; c < r.classes.size(); ++c) {
    out << "class " << c + 1 << (r.class_trivial[c] ? " (trivial)" : "") << ", " << r.classes[c].orbit.size()
        << " members\n";
    for (const auto& e : r.classes[c].orbit) out << "  " << format_inequality(e, sc) << '\n';
  }
  return out.str();
}

json to_json(const OptimizationReport& r, const Objective& obj, std::uint64_t seed) {
  json params = json::object();
  for (std::size_t i = 0; i < r.best_params.size() && i < obj.parameters.size(); ++i)
    params[obj.parameters[i]] = r.best_params[i];
  return {{"target", obj.name},
          {"best_value", r.best_value},
          {"best_params", r.best_params},
          {"parameters", params},
          {"evaluations", r.evaluations},
          {"restarts", r.restarts},
          {"seed", seed}};
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace entropic::io

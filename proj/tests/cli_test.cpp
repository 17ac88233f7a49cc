#include "support.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "entropic/quantum.hpp"
#include "io.hpp"

using namespace entropic;
using nlohmann::json;

namespace {

struct Run {
  std::string out;
  int status = -1;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(ENTROPIC_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string golden(const std::string& name) { return slurp(std::string(ENTROPIC_GOLDEN_DIR) + "/" + name); }

std::string temp(const std::string& name) { return "/tmp/entropic_cli_test_" + name; }

}  // namespace

TEST_CASE("scenario json round trip") {
  for (const auto& sc : {ncycle(5), bell(2, 3, 2), bilocality(), bilocality(4)}) {
    const auto j = io::to_json(sc);
    CHECK(io::scenario_from_json(j) == sc);
    CHECK(io::scenario_from_json(json::parse(j.dump())) == sc);
  }
  CHECK(io::scenario_from_json("ncycle:4") == ncycle(4));
  CHECK_THROWS(io::scenario_from_json(3));
}

TEST_CASE("box json round trip") {
  for (const auto& b : {pr_box(), pmax_box(), isotropic_box(make_rational(4, 5)), nb_box(make_rational(1, 10), make_rational(1, 10))}) {
    const auto back = io::box_from_json(json::parse(io::to_json(b).dump()));
    CHECK(back.is_exact());
    for (ObsSet m : b.scenario().maximal_contexts()) CHECK(back.exact_table(m) == b.exact_table(m));
  }
  const auto qb = chsh_quantum_box(0.6, {0.1, 1.2, -0.7, 0.5});
  const auto back = io::box_from_json(json::parse(io::to_json(qb).dump()));
  CHECK_FALSE(back.is_exact());
  for (ObsSet m : qb.scenario().maximal_contexts()) CHECK(back.table(m) == qb.table(m));
  CHECK(io::to_json(make_rational(3, 6)) == "1/2");
  CHECK(io::to_json(Rational(4)) == 4);
}

TEST_CASE("box json errors") {
  auto j = io::to_json(pr_box());
  auto missing = j;
  missing["tables"].erase("A1,B1");
  CHECK_THROWS_WITH(io::box_from_json(missing), doctest::Contains("missing table"));
  auto dup = j;
  dup["tables"]["A0,B0"]["0, 0"] = "0";
  CHECK_THROWS_WITH(io::box_from_json(dup), doctest::Contains("duplicate"));
  auto sub = j;
  sub["tables"]["A0"] = json{{"0", "1/2"}, {"1", "1/2"}};
  CHECK_THROWS_WITH(io::box_from_json(sub), doctest::Contains("non-maximal"));
  auto junk = j;
  junk["tables"]["A0,B0"]["0,0"] = true;
  CHECK_THROWS(io::box_from_json(junk));
}

TEST_CASE("inequality json") {
  const auto sc = bilocality();
  const auto j = io::to_json(bilocal_row_inequality(7), sc);
  CHECK(j["A0"] == 1);
  CHECK(j["A0,B,C1"] == -1);
  CHECK(support::from_map(j, sc) == bilocal_row_inequality(7));
}

TEST_CASE("cli derive") {
  const auto r3 = run("derive --builtin ncycle:3");
  CHECK(r3.status == 0);
  CHECK(r3.out == golden("ncycle3.txt"));

  const auto r5 = run("derive --builtin ncycle:5 --json");
  CHECK(r5.status == 0);
  CHECK(r5.out == golden("ncycle5.json"));
  const auto j = json::parse(r5.out);
  int nontrivial = 0;
  for (const auto& c : j["classes"])
    if (!c["trivial"].get<bool>()) {
      ++nontrivial;
      CHECK(c["size"] == 5);
    }
  CHECK(nontrivial == 1);

  const auto out = temp("bilocality");
  const auto rb = run("derive --builtin bilocality --out " + out);
  CHECK(rb.status == 0);
  const auto jb = json::parse(slurp(out));
  CHECK(jb["equations"].size() == 4);
  CHECK(jb["inequalities"].size() == 52);
  CHECK(jb["classes"].size() == 10);
  CHECK(slurp(out + ".txt").find("10 classes") != std::string::npos);
}

TEST_CASE("cli eval") {
  auto value = [](const std::string& out, const std::string& name) {
    const auto j = json::parse(out);
    for (const auto& v : j["values"])
      if (v["inequality"] == name) return v["value"].get<double>();
    FAIL("no value for " << name);
    return 0.0;
  };
  const auto pm = run("eval --builtin pmax");
  CHECK(pm.status == 0);
  CHECK(value(pm.out, "chsh_e") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(value(run("eval --builtin iso:0.8 --ineq chsh_e").out, "chsh_e") == doctest::Approx(-0.937991187).epsilon(1e-8));
  CHECK(value(run("eval --builtin pr --ineq chsh").out, "chsh") == 4);

  const auto file = temp("pr.json");
  io::write_file(file, io::to_json(pr_box()).dump());
  CHECK(value(run("eval --box " + file + " --ineq chsh").out, "chsh") == 4);
}

TEST_CASE("cli optimize is reproducible") {
  const auto a = run("optimize chsh_e --seed 3 --restarts 2");
  const auto b = run("optimize chsh_e --seed 3 --restarts 2");
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  const auto j = json::parse(a.out);
  CHECK(j["seed"] == 3);
  CHECK(j["best_value"].get<double>() <= 0.2368826015);
}

TEST_CASE("cli scan") {
  const auto out = temp("fig6.csv");
  const auto r = run("scan fig6 --grid 0.25 --out " + out);
  CHECK(r.status == 0);
  CHECK(json::parse(r.out)["rows"] == 15);
  CHECK(slurp(out) == golden("fig6_0.25.csv"));
  CHECK(slurp(out + ".gp").find(out) != std::string::npos);
  const auto first = slurp(out);
  run("scan fig6 --grid 0.25 --out " + out);
  CHECK(slurp(out) == first);
}

TEST_CASE("cli errors") {
  auto bad = io::to_json(pr_box());
  bad["tables"]["A1,B1"]["0,1"] = "1/3";
  const auto file = temp("bad.json");
  io::write_file(file, bad.dump());
  const auto r = run("eval --box " + file);
  CHECK(r.status == 1);
  const auto j = json::parse(r.out);
  CHECK(j["error"] == "invalid_box");
  CHECK(j["details"].size() >= 1);

  CHECK(run("eval --builtin nope").status == 1);
  CHECK(json::parse(run("").out)["error"] == "usage");
  CHECK(run("frobnicate").status == 2);
  CHECK(run("derive --builtin ncycle:3 --max-rows abc").status == 2);

  const auto cap = run("derive --builtin bilocality --max-rows 10");
  CHECK(cap.status == 3);
  CHECK(json::parse(cap.out)["error"] == "resource_cap");
}

#include "support.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "entropic/box.hpp"

using namespace entropic;
using support::oracles;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

MarginalModel ghz_like() {
  const auto sc = bilocality();
  return tabulate(sc, [](ObsSet, const std::vector<int>& o) {
    return o[0] == o[1] && o[1] == o[2] ? q(1, 2) : q(0);
  });
}

MarginalModel product_box() {
  const auto sc = bilocality();
  return tabulate(sc, [&](ObsSet ctx, const std::vector<int>& o) {
    const bool a0 = ctx & 1u;
    const bool c0 = ctx & 8u;
    const Rational pa = o[0] == 0 ? (a0 ? q(1, 3) : q(3, 4)) : (a0 ? q(2, 3) : q(1, 4));
    const Rational pc = o[2] == 0 ? (c0 ? q(1, 5) : q(1, 2)) : (c0 ? q(4, 5) : q(1, 2));
    return Rational(pa * q(1, 2) * pc);
  });
}

}  // namespace

TEST_CASE("named boxes against the oracle") {
  for (const auto& [spec, o] : oracles()["boxes"].items()) {
    CAPTURE(spec);
    const auto box = named_box(spec);
    CHECK(box.is_exact());
    CHECK(validation_errors(box).empty());
    for (ObsSet m : box.scenario().maximal_contexts())
      for (const auto& v : box.exact_table(m)) CHECK(gcd(v.get_num(), v.get_den()) == 1);
    CHECK(support::table_gap(box, o["tables"]) <= 1e-15);
    CHECK(support::entropy_gap(box, o["entropies"]) <= 1e-12);
    if (o.contains("chsh")) CHECK(chsh(box) == doctest::Approx(o["chsh"].get<double>()).epsilon(1e-12));
    if (o.contains("chsh_e"))
      CHECK(std::abs(chsh_entropic(box) - o["chsh_e"].get<double>()) <= 1e-12);
  }
}

TEST_CASE("box families") {
  const auto pr = pr_box();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          CHECK(bipartite_prob(pr, a, b, x, y) == doctest::Approx((1 + ((a ^ b ^ (x & y)) ? -1 : 1)) / 4.0));
  for (int i = 0; i <= 10; ++i) CHECK(chsh(isotropic_box(q(i, 10))) == doctest::Approx(0.4 * i));
  const auto nb = nb_box(q(3, 10), q(1, 5));
  for (const char* ctx : {"A0,C0", "A0,C1", "A1,C0", "A1,C1"})
    for (const auto& p : nb.exact_marginal(nb.scenario().parse_subset(ctx))) CHECK(p == q(1, 4));
  CHECK_THROWS(isotropic_box(q(3, 2)));
  CHECK_THROWS(triangle_box(q(1, 2), q(2, 3)));
  CHECK_THROWS(nb_box(q(1, 2), q(2, 3)));
  CHECK_THROWS(named_box("square"));
  CHECK(named_box("iso:0.8").exact_table(bell(2, 2, 2).maximal_contexts()[0])[0] == q(9, 20));
  CHECK(chsh(pmax_box()) == 3);
  CHECK(chsh(pr_box()) == 4);
  for (int d = 2; d <= 5; ++d) {
    CHECK(validation_errors(pr_box_d(d)).empty());
    CHECK(validation_errors(classical_box_d(d)).empty());
  }
}

TEST_CASE("entropy vectors") {
  const auto w = entropy_vector(white_noise_box());
  CHECK(w.at(bell(2, 2, 2).parse_subset("A0,B0")) == doctest::Approx(2.0));
  const auto sc = bell(2, 2, 2);
  for (int i = 0; i <= 10; ++i) {
    const double c = i / 10.0;
    const auto h = entropy_vector(isotropic_box(q(i, 10)));
    for (ObsSet m : sc.maximal_contexts())
      CHECK(std::abs(h.at(m) - (1 + binary_entropy((1 + c) / 2))) <= 1e-12);
  }
  const auto det = entropy_vector(tabulate(ncycle(5), [](ObsSet, const std::vector<int>& o) {
    return std::all_of(o.begin(), o.end(), [](int v) { return v == 0; }) ? q(1) : q(0);
  }));
  for (const auto& [s, v] : det) CHECK(v == 0);
  CHECK(shannon_entropy({0.5, 0.5, 1e-17}) == doctest::Approx(1.0));
  CHECK(binary_entropy(0) == 0);
}

TEST_CASE("entropic CHSH") {
  CHECK(std::abs(chsh_entropic(pmax_box()) - 1) <= 1e-12);
  CHECK(std::abs(chsh_entropic(pr_box())) <= 1e-12);
  CHECK(std::abs(chsh_entropic(classical_box())) <= 1e-12);
  for (int d = 2; d <= 5; ++d)
    for (int i = 1; i < 10; ++i)
      CHECK(std::abs(chsh_entropic(dfamily_box(q(i, 10), d)) - binary_entropy(i / 10.0)) <= 1e-12);
  CHECK_THROWS(chsh_entropic(nb_box(q(0), q(0))));
  CHECK_THROWS(chsh(pr_box_d(3)));
}

TEST_CASE("convex combination of non-violating boxes violates") {
  const auto mixed = mix({{q(1, 2), pr_box()}, {q(1, 2), classical_box()}});
  CHECK(std::abs(chsh_entropic(mixed) - 1) <= 1e-12);
  CHECK(std::max(chsh_entropic(pr_box()), chsh_entropic(classical_box())) <= 1e-12);
}

TEST_CASE("n-cycle and CHSH forms agree after renaming") {
  std::mt19937_64 rng(5);
  const auto sc = bell(2, 2, 2);
  int aligned = 0;
  for (int i = 1; i <= 4; ++i)
    if (ncycle_inequality(sc, i) == chsh_entropic_inequality(sc)) aligned = i;
  REQUIRE(aligned != 0);
  for (int t = 0; t < 50; ++t) {
    const auto box = sample_nosignaling_chsh(rng);
    CHECK(ncycle_entropic(box, aligned) == doctest::Approx(chsh_entropic(box)).epsilon(1e-12));
  }
  CHECK_THROWS(ncycle_entropic(pr_box(), 5));
  CHECK_THROWS(ncycle_entropic(pr_box(), 0));
}

TEST_CASE("Klyachko correlator sum") {
  const auto all_zero = tabulate(ncycle(5), [](ObsSet, const std::vector<int>& o) {
    return o[0] == 0 && o[1] == 0 ? q(1) : q(0);
  });
  CHECK(klyachko_k5(all_zero) == doctest::Approx(5));
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) CHECK(klyachko_k5(sample_noncontextual(ncycle(5), rng)) >= -3 - 1e-12);
  CHECK_THROWS(klyachko_k5(pr_box()));
}

TEST_CASE("bilocality rows") {
  const auto sc = bilocality();
  CHECK(bilocal_row_inequality(7) == parse_inequality("A0 + C0 - A0,B,C1 - A1,B,C0 + A1,B,C1", sc));
  CHECK_THROWS(bilocal_row_inequality(0));
  CHECK_THROWS(bilocal_row_inequality(11));
  CHECK(bilocal_row(nb_box(q(1, 10), q(1, 10)), 7) > 0);
  CHECK(bilocal_row(nb_box(q(3, 10), q(1, 10)), 7) > 0);
  for (int k = 1; k <= 10; ++k) CHECK(bilocal_row(product_box(), k) <= 1e-12);
}

TEST_CASE("bilocal marginal condition") {
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; i + j <= 10; ++j) CHECK(check_bilocal_marginal(nb_box(q(i, 10), q(j, 10)), 1e-12));
  CHECK(check_bilocal_marginal(product_box()));
  CHECK(validation_errors(ghz_like()).empty());
  CHECK_FALSE(check_bilocal_marginal(ghz_like()));
  CHECK(bilocal_marginal_residual(ghz_like()) == doctest::Approx(0.25));
}

TEST_CASE("validation reports problems") {
  const auto sc = bell(2, 2, 2);
  auto bad = pr_box();
  std::vector<Rational> t = {q(1, 2), q(1, 2), q(0), q(1, 2)};
  bad.set_table(sc.maximal_contexts()[0], t);
  CHECK_FALSE(validation_errors(bad).empty());
  auto neg = pr_box();
  neg.set_table(sc.maximal_contexts()[0], std::vector<Rational>{q(3, 4), q(-1, 4), q(0), q(1, 2)});
  CHECK_FALSE(validation_errors(neg).empty());
  // Normalized tables that signal: A0's marginal differs between contexts.
  auto sig = pr_box();
  sig.set_table(sc.maximal_contexts()[0], std::vector<Rational>{q(1), q(0), q(0), q(0)});
  CHECK_FALSE(validation_errors(sig).empty());
  auto fuzzy = bipartite_real(2, 2, [](int a, int b, int x, int y) {
    return (1 + (((a ^ b ^ (x & y)) != 0) ? -1 : 1)) / 4.0 + (a == 0 && b == 0 ? 1e-11 : 0);
  });
  CHECK(validation_errors(fuzzy, 1e-10).empty());
  CHECK_FALSE(validation_errors(fuzzy, 1e-12).empty());
}

TEST_CASE("single detector model") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto box = t % 2 ? sample_noncontextual(ncycle(5), rng) : sample_nosignaling_chsh(rng);
    const auto h = entropy_vector(box);
    CHECK(support::table_gap(single_detector(box, 1.0), [&] {
            support::json j;
            for (ObsSet m : box.scenario().maximal_contexts()) {
              std::vector<double> padded;
              const auto& tab = box.table(m);
              for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) padded.push_back(a < 2 && b < 2 ? tab[static_cast<std::size_t>(a * 2 + b)] : 0.0);
              j[box.scenario().subset_name(m)] = padded;
            }
            return j;
          }()) <= 1e-15);
    for (double eta : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
      CAPTURE(eta);
      const auto s = single_detector(box, eta);
      CHECK(validation_errors(s, 1e-12).empty());
      const auto hs = entropy_vector(s);
      for (const auto& [sub, v] : h) CHECK(std::abs(hs.at(sub) - single_detector_entropy(v, eta)) <= 1e-12);
      const int n = static_cast<int>(box.scenario().size());
      for (int i = 1; i <= n; ++i)
        CHECK(std::abs(ncycle_entropic(s, i) - eta * ncycle_entropic(box, i)) <= 1e-12);
      if (eta == 0)
        for (const auto& [sub, v] : hs) CHECK(v == doctest::Approx(0.0));
    }
  }
  CHECK_THROWS(single_detector(pr_box(), 1.5));
  CHECK_THROWS(single_detector(nb_box(q(0), q(0)), 0.5));
}

TEST_CASE("two detector model") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    const auto box = sample_noncontextual(ncycle(5), rng);
    const auto h = entropy_vector(box);
    const auto& sc = box.scenario();
    for (double eta : {0.2, 0.5, 0.9, 0.99, 1.0}) {
      const auto two = two_detector(box, eta);
      const auto one = single_detector(box, eta);
      CHECK(validation_errors(two, 1e-12).empty());
      for (std::size_t i = 0; i < sc.size(); ++i) {
        const auto a = two.marginal(ObsSet{1} << i);
        const auto b = one.marginal(ObsSet{1} << i);
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-15);
      }
      const auto ht = entropy_vector(two);
      for (ObsSet m : sc.maximal_contexts()) {
        const auto mem = sc.members(m);
        const double closed = two_detector_pair_entropy(h.at(m), h.at(ObsSet{1} << mem[0]), h.at(ObsSet{1} << mem[1]), eta);
        CHECK(std::abs(ht.at(m) - closed) <= 1e-12);
      }
      for (std::size_t i = 0; i < sc.size(); ++i) {
        const ObsSet s = ObsSet{1} << i;
        CHECK(std::abs(ht.at(s) - two_detector_single_entropy(h.at(s), eta)) <= 1e-12);
      }
    }
    CHECK(support::entropy_gap(two_detector(box, 1.0), [&] {
            support::json j;
            for (const auto& [s, v] : h) j[sc.subset_name(s)] = v;
            return j;
          }()) <= 1e-12);
  }
}

TEST_CASE("noncontextuality LP") {
  const auto c = is_noncontextual(classical_box());
  CHECK(c.noncontextual);
  REQUIRE(c.certificate);
  const auto sc = bell(2, 2, 2);
  const auto rebuilt = box_from_joint(sc, c.certificate->joint);
  for (ObsSet m : sc.maximal_contexts())
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(std::abs(rebuilt.table(m)[i] - classical_box().table(m)[i]) <= 1e-9);
  CHECK_FALSE(is_noncontextual(pr_box()).noncontextual);
  CHECK_FALSE(is_noncontextual(pmax_box()).noncontextual);
  CHECK(is_noncontextual(isotropic_box(q(1, 2))).noncontextual);
  CHECK_FALSE(is_noncontextual(isotropic_box(q(51, 100))).noncontextual);
  for (const auto& p : oracles()["noncontextual_nb"]) {
    const Rational xi = q(std::lround(p["xi"].get<double>() * 10), 10);
    const Rational g = q(std::lround(p["gamma"].get<double>() * 10), 10);
    if (xi + g > 1) continue;
    CAPTURE(p.dump());
    CHECK(is_noncontextual(nb_box(xi, g)).noncontextual == p["local"].get<bool>());
  }
}

TEST_CASE("random noncontextual boxes satisfy every inequality") {
  std::mt19937_64 rng(2718);
  for (int t = 0; t < 1000; ++t) {
    const auto c = sample_noncontextual(bell(2, 2, 2), rng);
    CHECK(chsh_entropic(c) <= 1e-9);
    for (int i = 1; i <= 4; ++i) CHECK(ncycle_entropic(c, i) <= 1e-9);
    CHECK(chsh(c) <= 2 + 1e-12);
    const auto k = sample_noncontextual(ncycle(5), rng);
    for (int i = 1; i <= 5; ++i) CHECK(ncycle_entropic(k, i) <= 1e-9);
    CHECK(klyachko_k5(k) >= -3 - 1e-12);
    const auto b = support::random_bilocal(rng, 0.3 * (t % 3));
    for (int r = 1; r <= 10; ++r) CHECK(bilocal_row(b, r) <= 1e-9);
  }
}

TEST_CASE("no-signaling two-outcome boxes obey CHSH_E <= 1") {
  std::mt19937_64 rng(1618);
  double worst = -10;
  for (int t = 0; t < 1000; ++t) {
    const auto box = sample_nosignaling_chsh(rng);
    CHECK(validation_errors(box).empty());
    worst = std::max(worst, chsh_entropic(box));
  }
  CHECK(worst <= 1 + 1e-9);
  CHECK(worst > 0);
}

TEST_CASE("isotropic boxes never violate") {
  for (int i = 0; i <= 100; ++i) {
    const double c = i / 100.0;
    const double v = chsh_entropic(isotropic_box(q(i, 100)));
    CHECK(std::abs(v - (2 * (1 - binary_entropy((1 + c) / 2)) - 2)) <= 1e-9);
    CHECK(v <= 1e-12);
  }
}

TEST_CASE("entropies ignore outcome labels") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    const auto box = t % 3 == 0 ? sample_nosignaling_chsh(rng)
                   : t % 3 == 1 ? sample_noncontextual(ncycle(5), rng)
                                : dfamily_box(q(t, 40), 3);
    const auto h = entropy_vector(box);
    const std::size_t obs = static_cast<std::size_t>(t) % box.scenario().size();
    std::vector<int> perm(static_cast<std::size_t>(box.scenario().cardinality(obs)));
    std::iota(perm.rbegin(), perm.rend(), 0);
    const auto r = relabel_outcomes(box, obs, perm);
    CHECK(validation_errors(r).empty());
    const auto hr = entropy_vector(r);
    for (const auto& [s, v] : h) CHECK(std::abs(hr.at(s) - v) <= 1e-12);
  }
}

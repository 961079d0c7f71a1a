#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kpq/error.hpp"
#include "kpq/group.hpp"
#include "kpq/matrix.hpp"
#include "kpq/section.hpp"
#include "kpq/weight.hpp"

using namespace kpq;

namespace {

/// Brute-force convolution over all pairs of support points.
WeightedSection brute_convolve(const WeightedSection& f, const WeightedSection& h) {
  const auto& g = *f.group();
  std::vector<SectionTerm> terms;
  for (const auto& a : f.terms())
    for (const auto& b : h.terms()) terms.push_back({g.multiply(a.element, b.element), a.value * b.value});
  // merge duplicates by accumulation through the section constructor
  WeightedSection out(f.group());
  for (const auto& t : terms) out += WeightedSection(f.group(), {t});
  return out;
}

WeightedSection random_section(const GroupPtr& g, int radius, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<SectionTerm> terms;
  for (const auto& e : ball(*g, radius)) {
    if (rng() % 3 == 0) continue;
    const double re = d(rng);
    const double im = d(rng);
    terms.push_back({e, Complex(re, im)});
  }
  return WeightedSection(g, std::move(terms));
}

}  // namespace

TEST_CASE("word lengths") {
  const auto f2 = GroupModel::free_group(2);
  CHECK(f2->word_length(f2->identity()) == 0);
  CHECK(f2->word_length(f2->decode("+1 +2 -1")) == 3);
  const auto z2 = GroupModel::lattice(2);
  CHECK(z2->word_length(z2->decode("2,-1")) == 3);
}

TEST_CASE("Heisenberg word length agrees with Cayley-graph search") {
  const auto h = GroupModel::heisenberg();
  std::mt19937_64 rng(11);
  const auto& gens = h->generators();
  for (int trial = 0; trial < 40; ++trial) {
    GroupElement x = h->identity();
    const int steps = static_cast<int>(rng() % 7);
    for (int s = 0; s < steps; ++s) x = h->multiply(x, gens[rng() % gens.size()]);
    CHECK(h->word_length(x) == word_length_bfs(*h, x, 8));
  }
}

TEST_CASE("generating sets are symmetric and identity-free") {
  for (const auto& g : {GroupModel::lattice(1), GroupModel::lattice(2), GroupModel::free_group(2),
                        GroupModel::heisenberg(), GroupModel::cyclic(5)}) {
    for (const auto& s : g->generators()) {
      CHECK(s != g->identity());
      const auto inv = g->inverse(s);
      CHECK(std::find(g->generators().begin(), g->generators().end(), inv) != g->generators().end());
    }
  }
}

TEST_CASE("encode and decode are inverse") {
  const auto f2 = GroupModel::free_group(2);
  for (const auto& x : ball(*f2, 3)) CHECK(f2->decode(f2->encode(x)) == x);
  const auto h = GroupModel::heisenberg();
  for (const auto& x : ball(*h, 2)) CHECK(h->decode(h->encode(x)) == x);
}

TEST_CASE("ball sizes") {
  for (const auto& g : {GroupModel::lattice(2), GroupModel::free_group(2), GroupModel::heisenberg()})
    CHECK(ball(*g, 0).size() == 1);
  const auto f2 = GroupModel::free_group(2);
  CHECK(ball(*f2, 1).size() == 5);
  for (int r = 1; r <= 6; ++r) {
    const auto expected = 1 + 4 * (static_cast<std::size_t>(std::pow(3, r)) - 1) / 2;
    CHECK(ball(*f2, r).size() == expected);
    CHECK(sphere(*f2, r).size() == 4 * static_cast<std::size_t>(std::pow(3, r - 1)));
  }
  const auto z2 = GroupModel::lattice(2);
  for (int r = 0; r <= 5; ++r) CHECK(ball(*z2, r).size() == static_cast<std::size_t>(2 * r * r + 2 * r + 1));
  CHECK_THROWS_AS(ball(*f2, 8, 1000), Error);
}

TEST_CASE("convolution") {
  const auto z = GroupModel::lattice(1);
  const auto d0 = WeightedSection::delta(z, GroupElement{0});
  const auto d1 = WeightedSection::delta(z, GroupElement{1});
  const auto sq = convolve(d0 + d1, d0 + d1);
  CHECK(sq.at(GroupElement{0}) == Complex(1.0));
  CHECK(sq.at(GroupElement{1}) == Complex(2.0));
  CHECK(sq.at(GroupElement{2}) == Complex(1.0));
  CHECK(sq.size() == 3);

  const auto f2 = GroupModel::free_group(2);
  std::mt19937_64 rng(12);
  const auto f = random_section(f2, 2, rng);
  CHECK(convolve(WeightedSection::delta(f2, f2->identity()), f) == f);
  const auto x = f2->decode("+1 -2");
  const auto y = f2->decode("+2 +1");
  CHECK(convolve(WeightedSection::delta(f2, x), WeightedSection::delta(f2, y)) ==
        WeightedSection::delta(f2, f2->multiply(x, y)));
  const auto h = random_section(f2, 2, rng);
  const auto diff = convolve(f, h) - brute_convolve(f, h);
  double worst = 0.0;
  for (const auto& t : diff.terms()) worst = std::max(worst, std::abs(t.value));
  CHECK(worst <= 1e-12);

  const auto heis = GroupModel::heisenberg();
  const auto a = random_section(heis, 1, rng);
  const auto b = random_section(heis, 1, rng);
  const auto c = random_section(heis, 1, rng);
  const auto assoc = convolve(convolve(a, b), c) - convolve(a, convolve(b, c));
  worst = 0.0;
  for (const auto& t : assoc.terms()) worst = std::max(worst, std::abs(t.value));
  CHECK(worst <= 1e-11);
}

TEST_CASE("section adjoint") {
  const auto z = GroupModel::lattice(1);
  const auto e = WeightedSection::delta(z, GroupElement{0});
  CHECK(section_adjoint(e) == e);
  const auto f = section_adjoint(WeightedSection::delta(z, GroupElement{1}, Complex(0, 1)));
  CHECK(f == WeightedSection::delta(z, GroupElement{-1}, Complex(0, -1)));
  const auto f2 = GroupModel::free_group(2);
  std::mt19937_64 rng(13);
  const auto g = random_section(f2, 3, rng);
  CHECK(section_adjoint(section_adjoint(g)) == g);
}

TEST_CASE("weights") {
  const auto z = GroupModel::lattice(1);
  const auto e = WeightedSection::delta(z, GroupElement{0});
  for (const auto& w : {Weight::constant(), Weight::polynomial(2), Weight::subexponential(0.5)})
    for (double p : {1.0, 2.0, 3.5}) CHECK(weighted_lp_norm(e, w, p) == doctest::Approx(1.0));
  CHECK(weighted_lp_norm(WeightedSection::delta(z, GroupElement{1}), Weight::polynomial(2), 1.0) == doctest::Approx(4.0));
  const auto pm = WeightedSection::delta(z, GroupElement{1}) + WeightedSection::delta(z, GroupElement{-1});
  CHECK(weighted_lp_norm(pm, Weight::subexponential(0.5), 2.0) == doctest::Approx(std::sqrt(2.0) * std::exp(1.0)));

  // submultiplicativity and the polynomial constant, sampled on F2
  const auto f2 = GroupModel::free_group(2);
  const auto pts = ball(*f2, 3);
  std::mt19937_64 rng(14);
  for (const auto& w : {Weight::polynomial(1.5), Weight::subexponential(0.5)}) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto& x = pts[rng() % pts.size()];
      const auto& y = pts[rng() % pts.size()];
      const double nxy = w(*f2, f2->multiply(x, y));
      CHECK(w(*f2, x) >= 1.0);
      CHECK(w(*f2, f2->inverse(x)) == doctest::Approx(w(*f2, x)));
      CHECK(nxy <= w(*f2, x) * w(*f2, y) * (1 + 1e-12));
      if (w.kind() == Weight::Kind::polynomial) CHECK(nxy <= w.polynomial_constant() * (w(*f2, x) + w(*f2, y)));
    }
  }
}

TEST_CASE("cstar norm on the torus") {
  const auto z = GroupModel::lattice(1);
  const auto d = [&](int n) { return WeightedSection::delta(z, GroupElement{n}); };
  CHECK(cstar_norm_abelian(d(0)) == doctest::Approx(1.0));
  CHECK(cstar_norm_abelian(d(1) + d(-1)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cstar_norm_abelian(d(0) + d(1)) == doctest::Approx(2.0).epsilon(1e-12));
  // sup of |1 + e^{i theta} + 0.5 e^{3 i theta}| by dense scan
  const auto f = d(0) + d(1) + Complex(0.5) * d(3);
  double best = 0.0;
  for (int j = 0; j < 200000; ++j) {
    const double th = 2 * std::numbers::pi * j / 200000.0;
    best = std::max(best, std::abs(1.0 + std::polar(1.0, th) + 0.5 * std::polar(1.0, 3 * th)));
  }
  CHECK(cstar_norm_abelian(f) == doctest::Approx(best).epsilon(1e-8));
}

TEST_CASE("regular representation norms") {
  const auto z = GroupModel::lattice(1);
  CHECK(regular_rep_norm(WeightedSection::delta(z, GroupElement{0}), 3) == doctest::Approx(1.0));
  const auto pm = WeightedSection::delta(z, GroupElement{1}) + WeightedSection::delta(z, GroupElement{-1});
  for (int r = 1; r <= 6; ++r)
    CHECK(regular_rep_norm(pm, r) == doctest::Approx(2 * std::cos(std::numbers::pi / (2 * r + 2))).epsilon(1e-10));

  // free group: compressions increase toward the Kesten value 2 sqrt 3 from below
  const auto f2 = GroupModel::free_group(2);
  WeightedSection s(f2);
  for (const auto& g : f2->generators()) s += WeightedSection::delta(f2, g);
  double prev = 0.0;
  for (int r = 1; r <= 6; ++r) {
    const double v = regular_rep_norm(s, r);
    CHECK(v >= prev - 1e-9);
    CHECK(v <= 2 * std::sqrt(3.0) + 1e-9);
    prev = v;
  }
  CHECK(prev > 3.2);
  // return-probability oracle: ||s^{2m}(e)||^{1/2m} is another lower bound
  WeightedSection p = WeightedSection::delta(f2, f2->identity());
  for (int m = 0; m < 8; ++m) p = convolve(p, s);
  const double kesten_lower = std::pow(p.at(f2->identity()).real(), 1.0 / 8.0);
  CHECK(kesten_lower <= 2 * std::sqrt(3.0));
  CHECK(kesten_lower > 2.5);

  // cyclic group: the left-convolution matrix is circulant with Fourier eigenvalues
  const auto c5 = GroupModel::cyclic(5);
  const auto f = WeightedSection::delta(c5, c5->decode("1"), 2.0) + WeightedSection::delta(c5, c5->identity());
  CHECK(operator_norm(left_convolution_matrix(f)) == doctest::Approx(3.0));
}

TEST_CASE("Lanczos and dense solves agree on a mid-sized ball") {
  const auto f2 = GroupModel::free_group(2);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> d;
  WeightedSection f(f2);
  for (const auto& g : ball(*f2, 2)) f += WeightedSection::delta(f2, g, Complex(d(rng), d(rng)));
  RegularRepOptions dense, lanczos;
  dense.dense_limit = 1000;
  lanczos.dense_limit = 10;
  const double a = regular_rep_norm(f, 4, dense);
  const double b = regular_rep_norm(f, 4, lanczos);
  CHECK(b <= a * (1 + 1e-12));
  CHECK(b == doctest::Approx(a).epsilon(1e-8));
}

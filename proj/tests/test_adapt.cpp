#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "curlopt/adapt.hpp"
#include "curlopt/cases.hpp"

using namespace curlopt;

TEST_CASE("mark_max_strategy rule") {
  VecX z(3);
  z << 1.0, 0.6, 0.2;
  CHECK(mark_max_strategy(z, 0.5) == std::set<int>{0, 1});

  VecX eq = VecX::Constant(5, 0.7);
  CHECK(mark_max_strategy(eq, 0.5).size() == 5);

  CHECK(mark_max_strategy(z, 1.0) == std::set<int>{0});
  VecX ties(4);
  ties << 0.9, 0.1, 0.9, 0.3;
  CHECK(mark_max_strategy(ties, 1.0) == std::set<int>{0, 2});

  CHECK_THROWS_AS(mark_max_strategy(VecX(), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(mark_max_strategy(z, 0.0), std::invalid_argument);

  // soundness on random values: marked iff above threshold
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  VecX r(50);
  for (int i = 0; i < 50; ++i) r[i] = unif(rng);
  const double theta = 0.4;
  const auto marked = mark_max_strategy(r, theta);
  const double cut = theta * r.maxCoeff();
  for (int i = 0; i < 50; ++i) CHECK(marked.count(i) == (r[i] >= cut ? 1 : 0));
}

TEST_CASE("eoc_table") {
  const auto t1 = eoc_table({0.4, 0.2}, {0.2, 0.1}, EOCMode::h);
  CHECK(std::isnan(t1.rows[0].order));
  CHECK(t1.rows[1].order == doctest::Approx(1.0));

  const auto t2 = eoc_table({0.98925, 0.38458}, {0.8660, 0.4330}, EOCMode::h);
  CHECK(t2.rows[1].order == doctest::Approx(1.363).epsilon(2e-3));

  // the adjoint column of the convergence table gives the same 1.363
  const auto t3 = eoc_table({1.70729, 0.96359}, {0.8660, 0.4330}, EOCMode::h);
  CHECK(t3.rows[1].order == doctest::Approx(0.825).epsilon(2e-2));

  const auto t4 = eoc_table({0.5, 0.5, 0.5}, {1.0, 0.5, 0.25}, EOCMode::h);
  CHECK(t4.rows[1].order == doctest::Approx(0.0));
  CHECK(t4.rows[2].order == doctest::Approx(0.0));

  // mode N: error halves when N grows by 8 -> order 1 in N^{-1/3}
  const auto t5 = eoc_table({0.4, 0.2}, {100.0, 800.0}, EOCMode::N);
  CHECK(t5.rows[1].order == doctest::Approx(1.0));

  CHECK_THROWS_AS(eoc_table({0.4}, {0.2}, EOCMode::h), std::invalid_argument);
  CHECK_THROWS_AS(eoc_table({0.4, -0.1}, {0.2, 0.1}, EOCMode::h), std::invalid_argument);
}

TEST_CASE("decay exponent fit") {
  std::vector<double> N, err;
  for (int i = 1; i <= 8; ++i) {
    N.push_back(100.0 * std::pow(2.0, i));
    err.push_back(3.0 * std::pow(N.back(), -0.3));
  }
  CHECK(decay_exponent_vs_N(err, N) == doctest::Approx(0.3).epsilon(1e-10));
}

TEST_CASE("run_uniform: record schema and h halving") {
  auto bc = test1_smooth();
  AdaptConfig cfg;
  const auto run = run_uniform(bc, 2, cfg);
  REQUIRE(run.records.size() == 2);
  CHECK(run.records[0].h_max == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-13));
  CHECK(run.records[1].h_max == doctest::Approx(std::sqrt(3.0) / 4).epsilon(1e-13));
  CHECK(run.records[1].n_cells == 8 * run.records[0].n_cells);
  CHECK(run.has_exact);
  for (const auto& r : run.records) {
    CHECK(r.err_y_hcurl.has_value());
    CHECK(r.est_ocp > 0.0);
    CHECK(std::isfinite(r.cost));
  }
  CHECK(*run.records[1].err_y_hcurl < *run.records[0].err_y_hcurl);
}

TEST_CASE("run_adaptive: budget below the initial mesh gives one record") {
  auto bc = test1_smooth();
  AdaptConfig cfg;
  cfg.max_cells = 1;
  const auto run = run_adaptive(bc, cfg);
  CHECK(run.records.size() == 1);
}

TEST_CASE("run_adaptive: cell counts strictly increase and observer fires") {
  auto bc = test3_discontinuous();
  AdaptConfig cfg;
  cfg.max_cells = 1200;
  cfg.max_iters = 5;
  int called = 0;
  const auto run = run_adaptive(bc, cfg, [&](int, const FESpace&, const FEField&,
                                             const IndicatorField&) { ++called; });
  CHECK(called == static_cast<int>(run.records.size()));
  for (std::size_t i = 1; i < run.records.size(); ++i)
    CHECK(run.records[i].n_cells > run.records[i - 1].n_cells);
  CHECK(!run.has_exact);
  CHECK(run.ell == 2);
  for (const auto& r : run.records) CHECK(!r.err_y_hcurl.has_value());
}

TEST_CASE("warm start agrees with a cold start on the refined mesh") {
  auto bc = test1_smooth();
  auto space0 = build_space(bc.build_mesh(1));
  const auto cold0 = ssn_solve(space0, bc.data, bc.data.midpoint_control());

  const auto st = state_indicators(*space0, bc.data, cold0.u, cold0.y);
  const auto adj = adjoint_indicators(*space0, bc.data, cold0.u, cold0.y, cold0.p);
  const auto ind = make_indicator_field(st, adj);
  auto marked = mark_max_strategy(ind.est_state, 0.5);
  const auto marked_adj = mark_max_strategy(ind.est_adjoint, 0.5);
  marked.insert(marked_adj.begin(), marked_adj.end());
  auto space1 = build_space(bisect_marked(space0->mesh(), marked));

  const auto warm = ssn_solve(space1, bc.data, cold0.u);
  const auto cold = ssn_solve(space1, bc.data, bc.data.midpoint_control());
  CHECK((warm.u - cold.u).norm() <= 10 * 1e-9);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "tse/core.hpp"

using namespace tse;
using namespace tse::core;

namespace {

const double kVf = 10.0;
const double kKc = 0.05;
const double kKj = 0.15385;

FDParams test_fd() { return FDParams(kVf, kKc, kKj); }
GridSpec test_grid() { return GridSpec(100.0, 16.0, 20.0, 2.0); }  // dt/dx = 0.1

// Independent scalar evaluation of the triangular-FD flow and one cell
// update, kept deliberately separate from the library implementation.
double oracle_flow(double v_f, double k_c, double k_j, double k_send,
                   double k_recv) {
  const double w = v_f * k_c / (k_j - k_c);
  const double demand = k_send * v_f;
  const double supply = w * (k_j - k_recv);
  return demand < supply ? demand : supply;
}

double oracle_cell_update(double v_f, double k_c, double k_j, double ratio,
                          double k_up, double k, double k_down) {
  const double q_in = oracle_flow(v_f, k_c, k_j, k_up, k);
  const double q_out = oracle_flow(v_f, k_c, k_j, k, k_down);
  return k + ratio * (q_in - q_out);
}

}  // namespace

TEST_CASE("grid spec computes integer cell counts") {
  GridSpec g = test_grid();
  CHECK(g.alpha() == 5);
  CHECK(g.beta() == 8);
  CHECK(g.max_speed() == doctest::Approx(10.0));
}

TEST_CASE("grid spec rejects invalid construction") {
  CHECK_THROWS_AS(GridSpec(100.0, 16.0, 19.0, 2.0), ConfigError);  // L % dx != 0
  CHECK_THROWS_AS(GridSpec(100.0, 15.0, 20.0, 2.0), ConfigError);  // T % dt != 0
  CHECK_THROWS_AS(GridSpec(40.0, 16.0, 20.0, 2.0), ConfigError);   // alpha < 3
  CHECK_THROWS_AS(GridSpec(100.0, 2.0, 20.0, 2.0), ConfigError);   // beta < 2
  CHECK_THROWS_AS(GridSpec(-100.0, 16.0, 20.0, 2.0), ConfigError);
}

TEST_CASE("fd params derive the backward wave speed") {
  FDParams fd = test_fd();
  CHECK(fd.w_c() == doctest::Approx(kVf * kKc / (kKj - kKc)));
  CHECK(fd.w_c() > 0.0);
  CHECK(fd.w_c() < fd.v_f());
}

TEST_CASE("fd params reject k_c outside (0, k_j/2)") {
  CHECK_THROWS_AS(FDParams(10.0, 0.08, 0.15385), ConfigError);
  CHECK_THROWS_AS(FDParams(10.0, 0.0, 0.15385), ConfigError);
  CHECK_THROWS_AS(FDParams(-1.0, 0.05, 0.15385), ConfigError);
}

TEST_CASE("flow on an empty road is zero") {
  CHECK(flow(test_fd(), 0.0, 0.0) == 0.0);
}

TEST_CASE("flow is demand-limited in free flow") {
  CHECK(flow(test_fd(), 0.03, 0.03) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("flow supply at k_c equals capacity") {
  // w_c * (k_j - k_c) == v_f * k_c, so the supply branch yields 0.5 here.
  CHECK(flow(test_fd(), 0.12, kKc) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(flow(test_fd(), kKc, kKc) ==
        doctest::Approx(kVf * kKc).epsilon(1e-14));  // capacity point
}

TEST_CASE("flow rejects densities outside [0, k_j]") {
  CHECK_THROWS_AS(flow(test_fd(), -0.01, 0.0), DomainError);
  CHECK_THROWS_AS(flow(test_fd(), 0.0, 0.2), DomainError);
}

TEST_CASE("flow monotonicity in sending and receiving densities") {
  FDParams fd = test_fd();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(0.0, kKj);
  for (int i = 0; i < 500; ++i) {
    const double s1 = d(rng), s2 = d(rng), r1 = d(rng), r2 = d(rng);
    const double s_lo = std::min(s1, s2), s_hi = std::max(s1, s2);
    const double r_lo = std::min(r1, r2), r_hi = std::max(r1, r2);
    CHECK(flow(fd, s_hi, r1) >= flow(fd, s_lo, r1));
    CHECK(flow(fd, s1, r_hi) <= flow(fd, s1, r_lo));
  }
}

TEST_CASE("ctm_step keeps a uniform row in steady state") {
  GridSpec g = test_grid();
  std::vector<double> row(g.alpha(), 0.03);
  const auto next = ctm_step(test_fd(), g, row, 0.03, 0.03);
  for (double k : next) CHECK(k == doctest::Approx(0.03).epsilon(1e-12));
}

TEST_CASE("ctm_step matches the scalar oracle on an isolated congested cell") {
  GridSpec g = test_grid();
  std::vector<double> row = {0.03, 0.12, 0.05, 0.0, 0.0};
  const auto next = ctm_step(test_fd(), g, row, 0.03, 0.0);
  const double expected =
      oracle_cell_update(kVf, kKc, kKj, g.step_ratio(), 0.03, 0.12, 0.05);
  CHECK(next[1] == doctest::Approx(expected).epsilon(1e-12));
  CHECK(next[1] == doctest::Approx(0.08630).epsilon(1e-3));
}

TEST_CASE("ctm_step propagates nothing on an empty row") {
  GridSpec g = test_grid();
  std::vector<double> row(g.alpha(), 0.0);
  const auto next = ctm_step(test_fd(), g, row, 0.0, 0.0);
  for (double k : next) CHECK(k == 0.0);
}

TEST_CASE("ctm_step rejects CFL violations instead of clamping v_f") {
  GridSpec g = test_grid();
  FDParams fast(12.0, 0.05, 0.15385);  // v_f > dx/dt = 10
  std::vector<double> row(g.alpha(), 0.03);
  CHECK_THROWS_AS(ctm_step(fast, g, row, 0.0, 0.0), ConfigError);
}

TEST_CASE("closed ctm_step conserves vehicles") {
  GridSpec g = test_grid();
  FDParams fd = test_fd();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(0.0, kKj);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> row(g.alpha());
    for (auto& k : row) k = d(rng);
    // Sending density 0 upstream and receiving density k_j downstream give
    // zero boundary flows.
    const auto next = ctm_step(fd, g, row, 0.0, kKj);
    double before = 0.0, after = 0.0;
    for (double k : row) before += k;
    for (double k : next) after += k;
    CHECK(after * g.dx() ==
          doctest::Approx(before * g.dx()).epsilon(1e-9));
  }
}

TEST_CASE("ctm_step output stays within [0, k_j]") {
  GridSpec g = test_grid();
  FDParams fd = test_fd();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> d(0.0, kKj);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> row(g.alpha());
    for (auto& k : row) k = d(rng);
    const auto next = ctm_step(fd, g, row, d(rng), d(rng));
    for (double k : next) {
      CHECK(k >= 0.0);
      CHECK(k <= kKj);
    }
  }
}

TEST_CASE("ctm_run of an all-zero boundary is an all-zero matrix") {
  GridSpec g = test_grid();
  BoundaryVector bv{std::vector<double>(g.alpha(), 0.0),
                    std::vector<double>(g.beta(), 0.0),
                    std::vector<double>(g.beta(), 0.0)};
  const auto m = ctm_run(test_fd(), g, bv);
  CHECK(m.fully_observed());
  for (std::size_t ix = 0; ix < g.alpha(); ++ix) {
    for (std::size_t it = 0; it < g.beta(); ++it) CHECK(m.at(ix, it) == 0.0);
  }
}

TEST_CASE("ctm_run holds a uniform equilibrium") {
  GridSpec g = test_grid();
  const double k_star = 0.04;
  BoundaryVector bv{std::vector<double>(g.alpha(), k_star),
                    std::vector<double>(g.beta(), k_star),
                    std::vector<double>(g.beta(), k_star)};
  const auto m = ctm_run(test_fd(), g, bv);
  for (std::size_t ix = 0; ix < g.alpha(); ++ix) {
    for (std::size_t it = 0; it < g.beta(); ++it) {
      CHECK(m.at(ix, it) == doctest::Approx(k_star).epsilon(1e-12));
    }
  }
}

TEST_CASE("ctm_run stays in [0, k_j] for random boundary vectors") {
  GridSpec g = test_grid();
  FDParams fd = test_fd();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(0.0, kKj);
  for (int trial = 0; trial < 1000; ++trial) {
    BoundaryVector bv;
    for (std::size_t i = 0; i < g.alpha(); ++i) bv.init.push_back(d(rng));
    for (std::size_t j = 0; j < g.beta(); ++j) {
      bv.inflow.push_back(d(rng));
      bv.outflow.push_back(d(rng));
    }
    const auto m = ctm_run(fd, g, bv);
    for (std::size_t ix = 0; ix < g.alpha(); ++ix) {
      for (std::size_t it = 0; it < g.beta(); ++it) {
        CHECK(m.at(ix, it) >= 0.0);
        CHECK(m.at(ix, it) <= kKj);
      }
    }
  }
}

TEST_CASE("density matrix distinguishes unobserved cells from zeros") {
  DensityMatrix m(test_grid());
  CHECK_FALSE(m.observed(0, 0));
  CHECK_THROWS_AS(m.at(0, 0), DomainError);
  m.set(0, 0, 0.0);
  CHECK(m.observed(0, 0));
  CHECK(m.at(0, 0) == 0.0);
  m.set_unobserved(0, 0);
  CHECK_FALSE(m.observed(0, 0));
}

TEST_CASE("boundary vector flattens and unflattens losslessly") {
  GridSpec g = test_grid();
  BoundaryVector bv;
  for (std::size_t i = 0; i < g.alpha(); ++i) bv.init.push_back(0.01 * (i + 1));
  for (std::size_t j = 0; j < g.beta(); ++j) {
    bv.inflow.push_back(0.001 * (j + 1));
    bv.outflow.push_back(0.002 * (j + 1));
  }
  const auto genes = bv.flatten();
  CHECK(genes.size() == g.alpha() + 2 * g.beta());
  const auto back = BoundaryVector::unflatten(genes, g);
  CHECK(back.init == bv.init);
  CHECK(back.inflow == bv.inflow);
  CHECK(back.outflow == bv.outflow);
  CHECK_THROWS_AS(BoundaryVector::unflatten({0.0, 0.0}, g), ConfigError);
}

TEST_CASE("trajectory interpolation clamps outside the sampled range") {
  Trajectory t;
  t.vehicle_id = "v";
  t.samples = {{0.0, 0.0}, {1.0, 10.0}, {2.0, 15.0}};
  CHECK(t.position_at(-1.0) == 0.0);
  CHECK(t.position_at(0.5) == doctest::Approx(5.0));
  CHECK(t.position_at(1.5) == doctest::Approx(12.5));
  CHECK(t.position_at(9.0) == 15.0);
}

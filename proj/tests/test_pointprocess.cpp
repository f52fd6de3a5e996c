#include <doctest.h>

#include <cmath>

#include "streetperc/errors.hpp"
#include "streetperc/pointprocess.hpp"
#include "test_support.hpp"

using namespace streetperc;

namespace {

ParamPoint point_with(double p, double U, double H, double gamma = 20.0,
                      double window = 30.0) {
  ParamPoint point;
  point.relay_p = p;
  point.users_per_edge = U;
  point.hops_per_edge = H;
  point.gamma = gamma;
  point.window.side_km = window;
  return point;
}

}  // namespace

TEST_SUITE_BEGIN("pointprocess");

TEST_CASE("physical parameters invert the dimensionless ones") {
  // r = 4/(3 H gamma); reference radii for gamma = 20
  CHECK(derive_physical(point_with(1, 0, 0.89)).radius_km ==
        doctest::Approx(0.0749).epsilon(2e-3));
  CHECK(derive_physical(point_with(1, 0, 4.44)).radius_km ==
        doctest::Approx(0.015).epsilon(2e-3));
  CHECK(std::abs(derive_physical(point_with(1, 0, 0.609)).radius_km -
                 0.10952) < 1e-4);
  CHECK(derive_physical(point_with(1, 0, 1.0)).lambda == 0.0);
  CHECK(derive_physical(point_with(1, 0, 1.0)).lambda_s ==
        doctest::Approx(100.0));
  CHECK(derive_physical(point_with(1, 2.0, 1.0)).lambda ==
        doctest::Approx(30.0));
}

TEST_CASE("invalid parameter points are rejected with all violations") {
  CHECK_THROWS_AS(derive_physical(point_with(1, 0, 0.0)), ParameterError);
  CHECK_THROWS_AS(derive_physical(point_with(1.3, 0, 1)), ParameterError);
  CHECK_THROWS_AS(derive_physical(point_with(1, -2, 1)), ParameterError);
  try {
    derive_physical(point_with(1.3, -2, 0.0));
    CHECK(false);
  } catch (const ParameterError& err) {
    const std::string what = err.what();
    CHECK(what.find("p must") != std::string::npos);
    CHECK(what.find("U must") != std::string::npos);
    CHECK(what.find("H must") != std::string::npos);
  }
}

TEST_CASE("the dimensionless pair is scale-invariant") {
  const ParamPoint point = point_with(0.8, 1.7, 0.62, 20.0);
  const PhysicalParams phys = derive_physical(point);
  for (const double a : {0.5, 2.0, 7.0}) {
    // zooming: gamma -> a gamma, lambda -> a lambda, r -> r/a
    const double gamma2 = a * point.gamma;
    const double lambda2 = a * phys.lambda;
    const double r2 = phys.radius_km / a;
    const double u2 = (4.0 / 3.0) * lambda2 / gamma2;
    const double h2 = (4.0 / 3.0) / (r2 * gamma2);
    CHECK(u2 == doctest::Approx(point.users_per_edge).epsilon(1e-14));
    CHECK(h2 == doctest::Approx(point.hops_per_edge).epsilon(1e-14));
  }
  // round trip through the inversion itself
  const double u_back = (4.0 / 3.0) * phys.lambda / point.gamma;
  const double h_back = (4.0 / 3.0) / (phys.radius_km * point.gamma);
  CHECK(u_back == doctest::Approx(point.users_per_edge).epsilon(1e-14));
  CHECK(h_back == doctest::Approx(point.hops_per_edge).epsilon(1e-14));
}

TEST_CASE("user sampling matches the Cox law on a single street") {
  const Tessellation tess = testing::single_edge_tessellation(2.0, 4.0);
  Rng rng = make_rng(42);
  const double lambda = 5.0;  // mean 10 users on the 2 km street

  const int draws = 10000;
  double total = 0.0;
  std::vector<double> positions;
  for (int i = 0; i < draws; ++i) {
    const auto users = sample_users(tess, lambda, rng);
    total += static_cast<double>(users.size());
    for (const User& u : users) {
      CHECK(u.t >= 0.0);
      CHECK(u.t <= 2.0);
      positions.push_back(u.t / 2.0);
    }
  }
  const double mean = total / draws;
  const double sigma_mean = std::sqrt(10.0 / draws);
  CHECK(std::abs(mean - 10.0) < 3.0 * sigma_mean);
  // positions uniform in arclength (KS at the 1% level)
  const double crit = 1.628 / std::sqrt(static_cast<double>(positions.size()));
  CHECK(testing::ks_uniform_statistic(positions) < crit);
}

TEST_CASE("user counts over any edge subset stay Poisson") {
  Window window{5.0};
  Rng rng = make_rng(99);
  const Tessellation tess = make_tessellation(36.0, window, rng);
  const double lambda = 3.0;

  double subset_length = 0.0;
  const std::size_t half = tess.edges.size() / 2;
  for (std::size_t e = 0; e < half; ++e) subset_length += tess.edges[e].length_km;

  const int draws = 10000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const auto users = sample_users(tess, lambda, rng);
    double in_subset = 0.0;
    for (const User& u : users) {
      if (static_cast<std::size_t>(u.edge) < half) ++in_subset;
    }
    sum += in_subset;
    sum_sq += in_subset * in_subset;
  }
  const double expected = lambda * subset_length;
  const double mean = sum / draws;
  const double var = sum_sq / draws - mean * mean;
  CHECK(std::abs(mean - expected) < 4.0 * std::sqrt(expected / draws));
  CHECK(var > 0.85 * expected);  // Poisson: variance equals the mean
  CHECK(var < 1.15 * expected);
}

TEST_CASE("lambda zero gives no users and sampling is deterministic") {
  const Tessellation tess = testing::single_edge_tessellation(2.0, 4.0);
  Rng rng = make_rng(3);
  CHECK(sample_users(tess, 0.0, rng).empty());
  CHECK_THROWS_AS(sample_users(tess, -1.0, rng), ParameterError);

  Rng a = make_rng(5), b = make_rng(5);
  const auto u1 = sample_users(tess, 4.0, a);
  const auto u2 = sample_users(tess, 4.0, b);
  REQUIRE(u1.size() == u2.size());
  for (std::size_t i = 0; i < u1.size(); ++i) {
    CHECK(u1[i].t == u2[i].t);
  }
}

TEST_CASE("relay draws couple monotonically across p") {
  Window window{5.0};
  Rng rng = make_rng(17);
  const Tessellation tess = make_tessellation(49.0, window, rng);

  RelayDraws draws = sample_relay_draws(tess, rng);
  REQUIRE(draws.u.size() == tess.vertices.size());

  CHECK(relays_from_draws(tess, draws, 0.0).empty());
  CHECK(relays_from_draws(tess, draws, 1.0).size() == tess.vertices.size());

  const auto r07 = relays_from_draws(tess, draws, 0.7);
  const auto r09 = relays_from_draws(tess, draws, 0.9);
  CHECK(r07.size() <= r09.size());
  std::set<std::int32_t> at09;
  for (const Relay& r : r09) at09.insert(r.vertex);
  for (const Relay& r : r07) {
    CHECK(at09.count(r.vertex) == 1);  // inclusion
  }

  // sample_relays returns the same set as filtering its own draws
  Rng c = make_rng(17);
  (void)make_tessellation(49.0, window, c);  // advance identically
  RelayDraws draws2;
  const auto direct = sample_relays(tess, 0.7, c, &draws2);
  REQUIRE(draws2.u.size() == draws.u.size());
  CHECK(direct.size() == r07.size());
}

TEST_SUITE_END();

#include "pspec/domain.hpp"
#include "pspec/harness.hpp"

#include <doctest.h>

#include <cmath>

using namespace pspec;

namespace {

SweepRecord row(double diameter, double p, double ratio, bool failed = false) {
  SweepRecord r;
  r.diameter = diameter;
  r.p = p;
  r.ratio = ratio;
  r.failed = failed;
  return r;
}

}  // namespace

TEST_CASE("sphere reference values") {
  CHECK(sphere_reference(PExponent(2.0)) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(sphere_reference(PExponent(1.5)) == doctest::Approx(1.72358).epsilon(1e-4));
  CHECK(sphere_reference(PExponent(3.0)) == doctest::Approx(2.1726).epsilon(1e-4));
  CHECK(sphere_reference(PExponent(2.0), 3) == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("round sphere sits at the comparison value") {
  const Mesh s = build_icosphere(4);
  const SweepRecord r = matei_check(s, PExponent(2.0), 1.0, 1.0, 4);
  CHECK(r.converged);
  CHECK(std::abs(r.ratio - 1.0) < 0.02);
  CHECK(matei_pass(r));
  CHECK(r.beta == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("normalized ellipsoid lies above the comparison value") {
  const Ellipsoid e = build_ellipsoid(1.2, 4, true);
  for (double p : {2.0, 3.0}) {
    const SweepRecord r = matei_check(e.mesh, PExponent(p), 1.2, e.min_curvature, 4);
    CHECK(r.converged);
    CHECK(r.ratio > 1.0);
    CHECK(matei_pass(r));
  }
}

TEST_CASE("matei_pass rejects low and failed rows") {
  CHECK(matei_pass(row(3.0, 2.0, 0.99)));
  CHECK_FALSE(matei_pass(row(3.0, 2.0, 0.97)));
  CHECK_FALSE(matei_pass(row(3.0, 2.0, 1.5, true)));
}

TEST_CASE("pinching trend") {
  std::vector<SweepRecord> recs{row(2.8, 2.0, 1.10), row(3.0, 2.0, 1.05), row(3.1, 2.0, 1.0),
                                row(2.8, 3.0, 1.0), row(3.0, 3.0, 1.05)};
  const TrendCheck a = pinching_trend(recs, 2.0);
  CHECK(a.pass);
  CHECK(a.worst_increase == 0.0);
  const TrendCheck b = pinching_trend(recs, 3.0);
  CHECK_FALSE(b.pass);
  CHECK(b.worst_increase == doctest::Approx(0.05));
  CHECK(pinching_trend(recs, 3.0, 0.1).pass);
  CHECK_FALSE(pinching_trend(recs, 1.5).pass);
  recs.push_back(row(0.0, 2.0, 0.0, true));
  CHECK_FALSE(pinching_trend(recs, 2.0).pass);
}

TEST_CASE("sweep keeps failed rows") {
  const auto recs = pinching_sweep({1.1, 3.0}, {2.0}, 2);
  REQUIRE(recs.size() == 2);
  int failed = 0;
  for (const auto& r : recs) {
    if (r.failed) {
      ++failed;
      CHECK(r.aspect == 3.0);
      CHECK_FALSE(r.error.empty());
    } else {
      CHECK(r.ratio > 0.0);
    }
  }
  CHECK(failed == 1);
  CHECK_FALSE(pinching_trend(recs, 2.0).pass);
}

TEST_CASE("sweep rows are sorted by diameter") {
  const auto recs = pinching_sweep({1.0, 1.2}, {2.0}, 2);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].diameter <= recs[1].diameter);
  CHECK(recs[0].aspect == 1.2);
}

TEST_CASE("lemma chain audit on the hemisphere") {
  const Mesh s = build_icosphere(5);
  const Domain h = superlevel_domain(s, coordinate_field(s, 2), 0.0);
  for (double p : {1.5, 2.0, 3.0}) {
    const EigenResult e = dirichlet_eigen(h, PExponent(p));
    REQUIRE(e.converged);
    const LemmaAudit a = lemma_chain_audit(h, e, PExponent(p));
    REQUIRE(a.steps.size() == 5);
    CHECK(a.steps[0].name == "distribution_derivative");
    CHECK(a.steps[4].name == "integrated_energy");
    for (const AuditStep& st : a.steps) {
      CHECK(st.worst <= 0.03);
      CHECK(st.thresholds.size() == st.violation.size());
      CHECK(!st.thresholds.empty());
    }
    CHECK(a.steps[3].worst <= 1e-10);
  }
  EigenResult bad = dirichlet_eigen(h, PExponent(2.0));
  bad.converged = false;
  CHECK_THROWS_AS(lemma_chain_audit(h, bad, PExponent(2.0)), std::invalid_argument);
}

TEST_CASE("superlevel battery is deterministic") {
  const Mesh s = build_icosphere(3);
  const SuperlevelBattery a = superlevel_battery(s, 5, 11, true);
  const SuperlevelBattery b = superlevel_battery(s, 5, 11, true);
  const SuperlevelBattery c = superlevel_battery(s, 5, 12, true);
  CHECK(a.fields == b.fields);
  CHECK(a.thresholds == b.thresholds);
  CHECK(a.fields.size() == 8);
  CHECK(a.thresholds[0].size() == 3);
  CHECK(a.fields.back() != c.fields.back());
  CHECK(a.fields[0] == c.fields[0]);
  for (std::size_t i = 3; i < a.fields.size(); ++i) {
    REQUIRE(a.thresholds[i].size() == 1);
    const double frac = superlevel_measure(s, a.fields[i], a.thresholds[i][0]) / s.total_measure();
    CHECK(frac >= 0.1);
    CHECK(frac <= 0.9);
  }
}

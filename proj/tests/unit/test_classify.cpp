#include <cmath>

#include "bihar/biharmonic.hpp"
#include "bihar/classify.hpp"
#include "bihar/error.hpp"
#include "bihar/model_io.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace bihar;
using namespace bihar::fixtures;

namespace {

Verdict verdict_for(double f1, double f2, double k1, double k2, double s, double c) {
  return classify(prepare_space_form_input(constant_data(f1, f2, k1, k2, s, c)));
}

bool all_finite(const Verdict& v) {
  for (const auto& [name, value] : v.evidence)
    if (!std::isfinite(value)) return false;
  return true;
}

}  // namespace

TEST_CASE("space-form constraints") {
  const auto zero = eq13_residuals(data_at(constant_data(0, 0, 0, 0, 0), {0, 0, 0}), 0.0);
  for (double a : zero.a) CHECK(a == 0.0);

  // sigma^2 = -c together with f1^2 + f2^2 = -4c satisfies every constraint.
  const auto hyperbolic = eq13_residuals(data_at(constant_data(2, 0, 0, 0, 1), {0, 0, 0}), -1.0);
  for (double a : hyperbolic.a) CHECK(std::abs(a) < 1e-15);

  const auto bad = eq13_residuals(data_at(constant_data(1, 0, 1, 0, 0), {0, 0, 0}), 0.0);
  CHECK(bad.a[2] == 1.0);

  CHECK_THROWS_AS(eq13_residuals(data_at(constant_data(0, 0, 1, 0.5, 0), {0, 0, 0}), 0.0), PreconditionViolation);
}

TEST_CASE("positive curvature admits no biharmonic submersion") {
  const auto v = verdict_for(0, 0, 0, 0, 0, 1.0);
  CHECK(v.kind == VerdictKind::NoBiharmonicPossible);
  CHECK(v.case_taken == "positive-c");
  CHECK(all_finite(v));

  const auto riccati = make_family("riccati");
  for (double p : riccati.parameters) {
    const auto w = classify(prepare_space_form_input(riccati.make(1.0, p)));
    CHECK(w.kind == VerdictKind::NoBiharmonicPossible);
    CHECK(w.consistent);
  }
}

TEST_CASE("negative curvature with k = 0 is harmonic over the hyperbolic plane") {
  const auto v = verdict_for(2, 0, 0, 0, 1, -1.0);
  CHECK(v.kind == VerdictKind::Harmonic);
  CHECK(v.fibers_totally_geodesic);
  CHECK_FALSE(v.horizontal_integrable);
  CHECK(v.base_identification == "CH1(4c)");
  CHECK(v.consistent);
  CHECK(v.evidence_value("sigma_squared_plus_c") == 0.0);
}

TEST_CASE("flat data are harmonic and split as a product") {
  const auto v = verdict_for(0, 0, 0, 0, 0, 0.0);
  CHECK(v.kind == VerdictKind::Harmonic);
  CHECK(v.fibers_totally_geodesic);
  CHECK(v.horizontal_integrable);
  CHECK(v.base_identification == "E2-product");
}

TEST_CASE("violated constraints are reported with the worst offender") {
  const auto v = verdict_for(1, 0, 1, 0, 0, 0.0);
  CHECK(v.kind == VerdictKind::InconsistentData);
  CHECK_FALSE(v.indeterminate);
  // a2, a3 and a4 tie at 1; the first is reported, at the first sample.
  CHECK(v.reason.find("a2 violated by 1") != std::string::npos);
  CHECK(v.reason.find("(-0.5, -0.5, -0.5)") != std::string::npos);
  CHECK(v.evidence_value("worst_point_index") == 0.0);

  const auto faint = verdict_for(0, 0, 0, 0, 5e-5, 0.0);  // 3 sigma^2 stays below 1e-8
  CHECK(faint.kind == VerdictKind::Harmonic);
  const auto borderline = verdict_for(0, 0, 0, 0, 3e-4, 0.0);  // residuals near 9e-8 and 2.7e-7
  CHECK(borderline.kind == VerdictKind::InconsistentData);
  CHECK(borderline.indeterminate);
}

TEST_CASE("consistent non-harmonic data follow the two cases") {
  const auto family = make_family("riccati");
  // Flat space: k1 = -1/u, f = 0 is the first case.
  const auto flat = classify(prepare_space_form_input(family.make(0.0, 0.0)));
  CHECK(flat.consistent);
  CHECK(flat.kind == VerdictKind::NoBiharmonicPossible);
  CHECK(flat.case_taken == "case-I");
  CHECK(flat.evidence_value("sigma_squared_plus_c") == 0.0);
  CHECK(flat.evidence_value("three_sigma_squared_minus_c") == 0.0);
  CHECK(flat.evidence_value("k1_cubed") > 0.0);
  CHECK(flat.evidence_value("reduced_r1") > 1e-3);

  // Negative curvature: f2 = -c / k1 does not vanish, the second case.
  const auto hyp = classify(prepare_space_form_input(family.make(-1.0, 0.0)));
  CHECK(hyp.consistent);
  CHECK(hyp.kind == VerdictKind::NoBiharmonicPossible);
  CHECK(hyp.case_taken == "case-II");
  CHECK(hyp.evidence_value("k1sq_plus_3sigmasq_plus_3c") > 0.0);
  CHECK(std::isfinite(hyp.evidence_value("k1sq_plus_7sigmasq_plus_c")));
  CHECK(std::isfinite(hyp.evidence_value("k1sq_plus_15sigmasq_plus_c")));
  CHECK(all_finite(hyp));
}

TEST_CASE("classification does not depend on the horizontal frame") {
  const auto family = make_family("riccati");
  for (double c : {-1.0, 0.0, 1.0}) {
    const auto base = classify(prepare_space_form_input(family.make(c, 0.0)));
    for (double angle : family.parameters) {
      const auto input = prepare_space_form_input(family.make(c, angle));
      CHECK(input.rotated == (angle != 0.0));
      for (const auto& d : input.samples) CHECK(std::abs(d.k2.value) < 1e-12);
      const auto v = classify(input);
      CHECK(v.kind == base.kind);
      CHECK(v.case_taken == base.case_taken);
    }
  }
}

TEST_CASE("the k = 0 conditions") {
  const auto ok = eq19_check(prepare_space_form_input(constant_data(4, 0, 0, 0, 2, -4.0)));
  CHECK(ok.precondition_met);
  CHECK(ok.b2 == 0.0);
  CHECK(ok.b3 == 0.0);
  CHECK(ok.c_nonpositive);
  CHECK(ok.satisfied);

  const auto positive = eq19_check(prepare_space_form_input(constant_data(0, 0, 0, 0, 0, 1.0)));
  CHECK_FALSE(positive.c_nonpositive);
  CHECK_FALSE(positive.satisfied);

  const auto flat = eq19_check(prepare_space_form_input(constant_data(0, 0, 0, 0, 0, 0.0)));
  CHECK(flat.sigma_forced_zero);
  CHECK(flat.satisfied);

  const auto moving = eq19_check(prepare_space_form_input(constant_data(0, 0, 1, 0, 0, 0.0)));
  CHECK_FALSE(moving.precondition_met);
}

TEST_CASE("space-form input needs a curvature") {
  CHECK_THROWS_AS(prepare_space_form_input(constant_data(0, 0, 0, 0, 0)), PreconditionViolation);
  const auto input = prepare_space_form_input(constant_data(0, 0, 0, 0, 0), -2.0);
  CHECK(input.c == -2.0);
  CHECK(input.samples.size() == 27);
  CHECK(input.vertical.constant);
}

TEST_CASE("verdict JSON shape") {
  const Json j = to_json(verdict_for(2, 0, 0, 0, 1, -1.0));
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("kind") == "Harmonic");
  CHECK(j.at("flags").at("fibers_totally_geodesic") == true);
  CHECK(j.at("flags").at("base_identification") == "CH1(4c)");
  CHECK(j.at("evidence").is_object());
  CHECK(Json::parse(j.dump()) == j);
}

TEST_CASE("scans") {
  const auto constant = scan({0.25, 0.5, 1.0, 2.0}, make_family("constant"));
  CHECK(constant.rows.size() == 16);
  CHECK(constant.witnesses() == 0);
  for (const auto& row : constant.rows) {
    REQUIRE(row.verdict.has_value());
    CHECK((*row.verdict == VerdictKind::NoBiharmonicPossible || *row.verdict == VerdictKind::InconsistentData));
  }

  const auto zero = scan({0.0}, make_family("zero"));
  REQUIRE(zero.rows.size() == 1);
  CHECK(zero.rows[0].verdict == VerdictKind::Harmonic);

  CHECK(scan({}, make_family("constant")).rows.empty());
  CHECK(to_json(scan({0.5, 1.0}, make_family("riccati"))).dump() ==
        to_json(scan({0.5, 1.0}, make_family("riccati"))).dump());
  CHECK_THROWS_AS(make_family("nosuch"), Error);
}

TEST_CASE("the witness predicate") {
  ScanRow row;
  row.verdict = VerdictKind::NoBiharmonicPossible;
  row.eq13_max = 1e-9;
  row.bitension_max = 1e-9;
  row.tension_max = 0.5;
  CHECK(row.proper_biharmonic_witness());
  row.tension_max = 1e-4;
  CHECK_FALSE(row.proper_biharmonic_witness());
  row.tension_max = 0.5;
  row.eq13_max = 1e-7;
  CHECK_FALSE(row.proper_biharmonic_witness());
  row.eq13_max = 1e-9;
  row.error = "boom";
  CHECK_FALSE(row.proper_biharmonic_witness());
}

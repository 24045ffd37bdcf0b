#include <cmath>

#include "bihar/biharmonic.hpp"
#include "bihar/curvature.hpp"
#include "bihar/error.hpp"
#include "bihar/model_io.hpp"
#include "bihar/submersion.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace bihar;
using namespace bihar::fixtures;

namespace {

FrameModel data_from(const std::array<std::string, 5>& d) {
  Json doc;
  doc["schema_version"] = 1;
  doc["name"] = "data";
  doc["mode"] = "data";
  doc["chart"] = {{"coords", {"x", "y", "z"}}, {"domain", {{-1, 1}, {-1, 1}, {-1, 1}}}};
  doc["data"] = {{"f1", d[0]}, {"f2", d[1]}, {"k1", d[2]}, {"k2", d[3]}, {"sigma", d[4]}};
  return model_from_json(doc);
}

}  // namespace

TEST_CASE("tension is minus k") {
  const auto zero = tension(data_at(constant_data(0.5, 0.2, 0, 0, 1), {0, 0, 0}));
  CHECK(zero.t1 == 0.0);
  CHECK(zero.t2 == 0.0);
  CHECK(zero.norm() == 0.0);

  const auto k = tension(data_at(constant_data(0, 0, 2.5, 0, 0), {0, 0, 0}));
  CHECK(k.t1 == doctest::Approx(-2.5));
  CHECK(k.t2 == 0.0);

  const auto ex = example1(1.0);
  const auto t = tension(extract_data(ex, {1.0, 0.0, 0.0}));
  CHECK(t.t1 == doctest::Approx(-phi(1.0, 1.0)).epsilon(1e-12));
  CHECK(std::abs(t.t2) < 1e-14);
  CHECK(t.norm() > 0.1);

  // Chart route: assemble tau from the Koszul connection rather than the data.
  Rng rng(31);
  const auto model = synthetic_chart(rng);
  for (const auto& p : model.chart.samples()) {
    const auto d = extract_data(model, p);
    const auto tk = tension(connection_koszul_oracle(model, p).table);
    CHECK(tk.t1 == doctest::Approx(-d.k1.value).epsilon(1e-9).scale(1.0));
    CHECK(tk.t2 == doctest::Approx(-d.k2.value).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("frame Laplacian") {
  const auto flat = data_at(constant_data(0, 0, 0, 0, 0), {0, 0, 0});
  CHECK(frame_laplacian(FrameScalar::constant(4.0), flat) == 0.0);

  FrameScalar x;
  x.value = 0.3;
  x.d1 = {1, 0, 0};
  x.d2 = Mat3{};
  CHECK(frame_laplacian(x, flat) == 0.0);
  const auto tilted = data_at(constant_data(0, 0, 1.5, 0, 0), {0, 0, 0});
  CHECK(frame_laplacian(x, tilted) == doctest::Approx(-1.5));

  FrameScalar bare;
  CHECK_THROWS_AS(frame_laplacian(bare, flat), PreconditionViolation);

  for (double c : {0.5, 1.0, 2.0}) {
    const auto ex = example1(c);
    for (const auto& p : ex.chart.samples()) {
      const auto d = extract_data(ex, p);
      const double scale = std::abs(phi_second(c, p[0])) + 1.0;
      CHECK(std::abs(frame_laplacian(d.k1, d)) / scale < 1e-12);
    }
  }
}

TEST_CASE("harmonic data are biharmonic, exactly") {
  Rng rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const auto model = data_from({random_smooth(rng), random_smooth(rng), "0", "0", random_smooth(rng)});
    for (const auto& p : model.chart.samples()) {
      const auto d = data_at(model, p);
      const auto b = bitension_closed_form(d);
      CHECK(b.b1 == 0.0);
      CHECK(b.b2 == 0.0);
      const auto g = bitension_generic_oracle(d);
      CHECK(g.b1 == 0.0);
      CHECK(g.b2 == 0.0);
    }
  }
}

TEST_CASE("constant k with a flat base is biharmonic term by term") {
  const auto d = data_at(constant_data(0, 0, 2, 1, 0), {0, 0, 0});
  const auto b = bitension_closed_form(d);
  CHECK(b.b1 == 0.0);
  CHECK(b.b2 == 0.0);
}

TEST_CASE("the example is proper biharmonic") {
  for (double c : {0.5, 1.0, 2.0}) {
    for (Interval side : {Interval{-3.0, -0.5}, Interval{0.5, 3.0}}) {
      const auto ex = example1(c, side, 20);
      for (const auto& p : ex.chart.samples()) {
        const auto d = extract_data(ex, p);
        CHECK(bitension_closed_form(d).norm() < 1e-8);
        CHECK(bitension_generic_oracle(d).norm() < 1e-8);
        CHECK(tension(d).norm() > 0.1);
        const auto r = reduced_residual(d);
        CHECK(std::abs(r.r1) < 1e-8);
        CHECK(std::abs(r.r2) < 1e-8);
      }
    }
  }
}

TEST_CASE("closed form and generic bitension agree on random data") {
  Rng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const auto model = random_data_model(rng);
    for (const auto& p : model.chart.samples()) {
      const auto d = data_at(model, p);
      const auto a = bitension_closed_form(d);
      const auto b = bitension_generic_oracle(d);
      CHECK(std::abs(a.b1 - b.b1) < 1e-8);
      CHECK(std::abs(a.b2 - b.b2) < 1e-8);
    }
  }
  for (int trial = 0; trial < 5; ++trial) {
    const auto model = synthetic_chart(rng, {.vertical_beta = true});
    for (const auto& p : model.chart.samples()) {
      const auto d = extract_data(model, p);
      const auto a = bitension_closed_form(d);
      const auto b = bitension_generic_oracle(d);
      CHECK(a.b1 == doctest::Approx(b.b1).epsilon(1e-9).scale(1.0));
      CHECK(a.b2 == doctest::Approx(b.b2).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("with k2 identically zero the bitension is the reduced system") {
  Rng rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const auto model = data_from({random_smooth(rng), random_smooth(rng), random_smooth(rng), "0", random_smooth(rng)});
    for (const auto& p : model.chart.samples()) {
      const auto d = data_at(model, p);
      const auto b = bitension_closed_form(d);
      const auto r = reduced_residual(d);
      CHECK(b.b1 == doctest::Approx(r.r1).epsilon(1e-12).scale(1.0));
      CHECK(b.b2 == doctest::Approx(r.r2).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("the reduced system needs k2 = 0") {
  const auto d = data_at(constant_data(0, 0, 1, 0, 0), {0, 0, 0});
  const auto r = reduced_residual(d);
  CHECK(r.r1 == 0.0);
  CHECK(r.r2 == 0.0);
  CHECK_THROWS_AS(reduced_residual(data_at(constant_data(0, 0, 1, 1, 0), {0, 0, 0})), PreconditionViolation);
}

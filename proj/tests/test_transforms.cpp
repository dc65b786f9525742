#include <doctest.h>

#include <cmath>
#include <vector>

#include "deming/error.hpp"
#include "deming/transforms.hpp"

using namespace deming;

TEST_CASE("log variance by the delta formula") {
  CHECK(propagate_variance(10.0, 4.0, make_transform("log")) == doctest::Approx(0.04).epsilon(1e-14));
}

TEST_CASE("identity leaves the variance alone") {
  CHECK(propagate_variance(7.0, 0.3, make_transform("identity")) == 0.3);
}

TEST_CASE("scaled log derivative does not depend on the scale") {
  CHECK(propagate_variance(0.01, 1e-6, make_transform("log", 10000.0)) ==
        doctest::Approx(0.01).epsilon(1e-12));
  for (double c : {1e-3, 0.5, 3.0, 1e4, 1e8}) {
    CHECK(propagate_variance(0.37, 0.02, make_transform("log", c)) ==
          propagate_variance(0.37, 0.02, make_transform("log", 1.0)));
  }
}

TEST_CASE("logit and power derivatives match central differences") {
  const std::vector<TransformSpec> specs{make_transform("logit"), make_transform("power", 2.0, 0.5),
                                         make_transform("power", 1.0, 3.0), make_transform("log", 7.0),
                                         make_transform("identity", 3.0)};
  for (const auto& s : specs) {
    for (double z : {0.1, 0.3, 0.45}) {
      const double h = 1e-6;
      const double fd = (s.apply(z + h) - s.apply(z - h)) / (2 * h);
      CHECK(s.derivative(z) == doctest::Approx(fd).epsilon(1e-7));
      CHECK(s.inverse(s.apply(z)) == doctest::Approx(z).epsilon(1e-12));
    }
  }
}

TEST_CASE("monotone transforms preserve order") {
  for (const auto& s : {make_transform("logit"), make_transform("power", 1.0, 0.7),
                        make_transform("log", 100.0), make_transform("identity")}) {
    double prev = -INFINITY;
    for (double z = 0.01; z < 0.99; z += 0.01) {
      const double x = s.apply(z);
      CHECK(x > prev);
      prev = x;
    }
  }
}

TEST_CASE("propagated variance is zero exactly when the input variance is") {
  const auto s = make_transform("logit");
  CHECK(propagate_variance(0.2, 0.0, s) == 0.0);
  CHECK(propagate_variance(0.2, 1e-9, s) > 0.0);
}

TEST_CASE("transform_dataset maps values and variances") {
  const std::vector<FirstStageRecord> recs{{100, 1, 25, 0.1, 2}, {10, 2, 1, 0.1, 1}, {1, 3, 0.5, 0.2, 1}};
  const auto ds = transform_dataset(recs, make_transform("log"), make_transform("identity"));
  CHECK(ds[0].x == doctest::Approx(std::log(100.0)));
  CHECK(ds[0].var_x == doctest::Approx(0.0025).epsilon(1e-14));
  CHECK(ds[0].y == 1.0);
  CHECK(ds[0].var_y == 0.1);
  CHECK(ds[0].weight == 2.0);
}

TEST_CASE("identity transform reproduces the record fields") {
  const std::vector<FirstStageRecord> recs{{1, 2, 0.1, 0.2, 1}, {3, 4, 0.3, 0.4, 2}, {5, 6, 0.5, 0.6, 3}};
  const auto ds = transform_dataset(recs, make_transform("identity"), make_transform("identity"));
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(ds[i].x == recs[i].z);
    CHECK(ds[i].y == recs[i].w);
    CHECK(ds[i].var_x == recs[i].var_z);
    CHECK(ds[i].var_y == recs[i].var_w);
    CHECK(ds[i].weight == recs[i].weight);
  }
}

TEST_CASE("domain violations abort the whole transformation") {
  const std::vector<FirstStageRecord> recs{{1, 1, 0.1, 0.1, 1}, {0, 1, 0.1, 0.1, 1}, {2, 1, 0.1, 0.1, 1}};
  try {
    (void)transform_dataset(recs, make_transform("log"), make_transform("identity"));
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
  CHECK_THROWS_AS((void)propagate_variance(1.5, 0.1, make_transform("logit")), Error);
}

TEST_CASE("unknown transform names are usage errors") {
  try {
    (void)make_transform("sqrt");
    FAIL("expected usage error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::usage);
  }
  CHECK_THROWS_AS((void)make_transform("log", -1.0), Error);
}

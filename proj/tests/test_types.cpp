#include <random>

#include "doctest.h"
#include "types.hpp"

using namespace vml;

TEST_CASE("discretize produces the full grid") {
  SUBCASE("unit step percent range") {
    Domain d = discretize({"percentType", 0, 100, 1, {}});
    CHECK(d.size() == 101);
    CHECK(d.value(0) == 0.0);
    CHECK(d.value(100) == 100.0);
  }
  SUBCASE("tenth step velocity range") {
    Domain d = discretize({"velocityType", 100, 600, 0.1, {}});
    CHECK(d.size() == 5001);  // floor(500/0.1)+1
    CHECK(d.value(0) == 100.0);
    CHECK(d.value(5000) == 600.0);
    CHECK(d.value(1) == doctest::Approx(100.1).epsilon(1e-12));
  }
  SUBCASE("battery range") {
    Domain d = discretize({"batteryType", 5, 100, 1, {}});
    CHECK(d.size() == 96);
    CHECK(d.value(0) == 5.0);
    CHECK(d.value(95) == 100.0);
  }
}

TEST_CASE("discretization is idempotent") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lo_dist(-50.0, 50.0);
  std::uniform_int_distribution<int> steps(2, 500);
  for (int i = 0; i < 50; ++i) {
    double lo = lo_dist(rng);
    double precision = std::uniform_real_distribution<double>(0.01, 2.0)(rng);
    double hi = lo + precision * steps(rng);
    Domain d = discretize({"t", lo, hi, precision, {}});
    Domain again = Domain::numeric(d.lo(), d.hi(), d.precision());
    CHECK(again.size() == d.size());
    CHECK(again.value(0) == d.value(0));
    CHECK(again.value(d.size() - 1) == d.value(d.size() - 1));
  }
}

TEST_CASE("snap clamps and lands on the grid") {
  Domain d = discretize({"velocityType", 100, 600, 0.1, {}});
  CHECK(d.snap(99.0) == 100.0);
  CHECK(d.snap(601.3) == 600.0);
  CHECK(d.snap(250.04) == doctest::Approx(250.0).epsilon(1e-12));
  CHECK(d.snap(250.06) == doctest::Approx(250.1).epsilon(1e-12));
  CHECK(d.contains(d.snap(314.1592)));
  CHECK(d.index_of(100.0) == 0);
  CHECK(d.index_of(600.0) == 5000);
}

TEST_CASE("grid membership tolerance is half a precision") {
  Domain d = discretize({"t", 0, 10, 0.5, {}});
  CHECK(d.contains(2.5));
  CHECK(d.contains(2.5 + 0.2));   // snaps back to 2.5
  CHECK(!d.contains(11.0));
  CHECK(!d.contains(-1.0));
}

TEST_CASE("domain formatting uses the precision's decimals") {
  Domain tenth = discretize({"t", 100, 600, 0.1, {}});
  CHECK(tenth.format(tenth.value(1)) == "100.1");
  CHECK(tenth.format(600.0) == "600.0");
  Domain whole = discretize({"t", 5, 100, 1, {}});
  CHECK(whole.format(42.0) == "42");

  EnumType machine{"machineType",
                   {{"COFFEE_MACHINE_A", 0, false}, {"COFFEE_MACHINE_B", 1, false}}};
  Domain e = Domain::enumeration(&machine);
  CHECK(e.size() == 2);
  CHECK(e.format(1.0) == "COFFEE_MACHINE_B");

  Domain b = Domain::boolean();
  CHECK(b.format(0.0) == "false");
  CHECK(b.format(1.0) == "true");
}

TEST_CASE("enum literal lookup by name and code") {
  EnumType et{"e", {{"A", 3, true}, {"B", 7, true}}};
  CHECK(et.find("A")->code == 3);
  CHECK(et.by_code(7)->name == "B");
  CHECK(et.find("C") == nullptr);
  Domain d = Domain::enumeration(&et);
  CHECK(d.snap(4.9) == 3.0);  // nearest declared code
  CHECK(d.snap(5.1) == 7.0);
}

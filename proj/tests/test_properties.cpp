#include <doctest.h>

#include <cstdio>

#include "support/properties.hpp"

using sdrecon::testing::all_properties;
using sdrecon::testing::PropertyReport;

TEST_CASE("randomized invariants hold for 100 cases each") {
  for (const auto& prop : all_properties()) {
    SUBCASE(prop.name.c_str()) {
      const PropertyReport r = prop.run(20240611, 100);
      std::printf("%-48s %3d cases  %6.2f s\n", r.name.c_str(), r.cases, r.seconds);
      INFO(r.first_failure);
      CHECK(r.cases == 100);
      CHECK(r.failures == 0);
    }
  }
}

#include <cmath>
#include <limits>

#include "doctest.h"
#include "qex/error.hpp"
#include "qex/verify.hpp"

using namespace qex;
using namespace qex::verify;

TEST_CASE("report bookkeeping and JSON") {
  Report r{"demo", {}};
  r.check("exact", true);
  r.bound("close", 1e-12, 1e-10);
  r.bound("nan", std::numeric_limits<double>::quiet_NaN(), 1.0);
  r.bound("far", 2.0, 1.0, "why");
  CHECK_FALSE(r.passed());
  CHECK(r.failures() == 2);
  const auto j = r.to_json();
  CHECK(j.at("suite") == "demo");
  CHECK(j.at("passed") == false);
  CHECK(j.at("failures") == 2);
  CHECK(j.at("results").size() == 4);
  CHECK(j.dump() == r.to_json().dump());
  Report all{"all", {}};
  all.append(r);
  CHECK(all.assertions.front().name == "demo/exact");
  CHECK(all.failures() == 2);
}

TEST_CASE("suite registry") {
  CHECK(suite_names().size() == 8);
  CHECK_THROWS_AS(run("nope", Options{}), DomainError);
}

TEST_CASE("fast suites pass") {
  Options o;
  o.max_n = 4;
  for (const char* name : {"q-identities", "configs", "lumpability"}) {
    const Report r = run(name, o);
    CHECK_MESSAGE(r.passed(), r.to_json().dump());
    CHECK_FALSE(r.assertions.empty());
  }
}

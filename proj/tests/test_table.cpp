#include <cmath>
#include <limits>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "lgosc/params.hpp"
#include "lgosc/table.hpp"

using namespace lgosc;

namespace {

Table sample() {
  Table t;
  t.header = {{"command", "scan"}, {"seed", "7"}};
  t.columns = {"s", "method", "dim_used", "converged"};
  t.add_row({0.1, std::string("fock"), std::int64_t{128}, true});
  t.add_row({2.0 / 3.0, std::string("a,b"), std::int64_t{0}, false});
  t.summary = {{"s_cr", 0.983}};
  return t;
}

}  // namespace

TEST_CASE("CSV layout") {
  std::ostringstream out;
  write_table(out, sample(), Format::csv);
  CHECK(out.str() ==
        "# command=scan\n"
        "# seed=7\n"
        "# s_cr=0.98299999999999998\n"
        "s,method,dim_used,converged\n"
        "0.10000000000000001,fock,128,true\n"
        "0.66666666666666663,\"a,b\",0,false\n");
}

TEST_CASE("doubles round-trip") {
  for (double x : {0.1, 2.0 / 3.0, 1e-300, 2.016939967468387, -7.6}) CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("JSON mirror") {
  Table t = sample();
  t.add_row({std::numeric_limits<double>::quiet_NaN(), std::string("q\"uote"), std::int64_t{1}, true});
  std::ostringstream out;
  write_table(out, t, Format::json);
  const auto doc = nlohmann::json::parse(out.str());
  CHECK(doc["config"]["seed"] == "7");
  CHECK(doc["summary"]["s_cr"].get<double>() == 0.983);
  REQUIRE(doc["records"].size() == 3);
  CHECK(doc["records"][0]["s"].get<double>() == 0.1);
  CHECK(doc["records"][0]["dim_used"].get<int>() == 128);
  CHECK(doc["records"][1]["converged"] == false);
  CHECK(doc["records"][2]["s"].is_null());
  CHECK(doc["records"][2]["method"] == "q\"uote");
}

TEST_CASE("rows must match the columns") {
  Table t;
  t.columns = {"a", "b"};
  CHECK_THROWS_AS(t.add_row({1.0}), DomainError);
  CHECK_THROWS_AS(format_from_string("xml"), DomainError);
  CHECK(format_from_string("json") == Format::json);
}

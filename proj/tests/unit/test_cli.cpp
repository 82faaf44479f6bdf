#include "doctest.h"

#include <sstream>

#include "json.hpp"

#include "filippov/cli.hpp"

using namespace filippov;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("configuration errors exit with 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"simulate", "--model", "poly(3,-1,1.2,0)"}).code == 2);
    CHECK(run({"simulate", "--model", "nosuch(1)", "--x0", "0,1"}).code == 2);
    CHECK(run({"bifurcate", "--model", "poly(1.5,-1,1.2,0)", "--grid", "m=0:1:0"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
}

TEST_CASE("simulate writes the orbit CSV") {
    Run r = run({"simulate", "--model", "poly(3,-1,1.2,0)", "--x0", "0.5", "--on-sigma"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("t,x,y,segment_kind,event\n", 0) == 0);
    CHECK(r.err.find("# termination") != std::string::npos);
}

TEST_CASE("classify emits the versioned JSON record") {
    Run r = run({"classify", "--model", "poly(3,-1,1.2,0)"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema"] == "filippov-lab/v1");
    CHECK(j["bs_case"] == "BS3");
}

TEST_CASE("return-map summary") {
    Run r = run({"return-map", "--model", "poly(3,-1,1.2,0.05)", "--samples", "32"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("x,pi_x,outcome\n", 0) == 0);
    CHECK(r.err.find("monotone") != std::string::npos);
}

TEST_CASE("fixture run reports the regression outcome") {
    Run o = run({"fixtures", "--only", "oracles"});
    CHECK(o.code == 0);
    Run f = run({"fixtures", "--only", "R2"});
    CHECK(f.code == 0);
    CHECK(f.out.find("passed") != std::string::npos);
}

TEST_CASE("small bifurcation grid") {
    Run r = run({"bifurcate", "--model", "poly(1.5,-1,1.2,0)", "--grid", "m=-0.2:0.2:3,d=1.1:1.3:3", "--curves", "P1"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["cells"].size() == 9);
    CHECK(j.contains("consistency"));
    CHECK(j.contains("curves"));
}

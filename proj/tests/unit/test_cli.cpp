#include <doctest.h>

#include <sstream>

#include "cli.hpp"
#include "schema.hpp"

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = pseudoradial::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> row;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) row.push_back(cell);
        rows.push_back(row);
    }
    return rows;
}

nlohmann::json schema_for(const std::string& name)
{
    return schema::load(std::string(PSEUDORADIAL_SCHEMA_DIR) + "/" + name + ".schema.json");
}

}  // namespace

TEST_CASE("classify")
{
    const Outcome o = run({"classify", "--epsilon", "1", "--q", "0.5", "--mu", "36"});
    REQUIRE(o.code == 0);
    const auto j = nlohmann::json::parse(o.out);
    CHECK(schema::validate(schema_for("classify"), j).empty());
    CHECK(j["sign_changing"]["values"] == nlohmann::json::array({2, 3, 4, 5}));
    CHECK(j["positive"]["values"] == nlohmann::json::array({4}));
    CHECK(j["nonnegative"] == 3);
    const Outcome capped = run({"classify", "--epsilon", "-1", "--q", "3", "--mu", "-4", "--k-cap", "5"});
    const auto c = nlohmann::json::parse(capped.out);
    CHECK(c["sign_changing"]["values"].size() == 5);
    CHECK(c["sign_changing"]["unbounded_from"] == 1);
}

TEST_CASE("exit codes")
{
    const Outcome refused = run({"modes", "--epsilon", "1", "--q", "3", "--mu", "4", "--k", "3", "--kind", "sign-changing"});
    CHECK(refused.code == 2);
    CHECK(refused.err.find("NoSuchMode") != std::string::npos);
    CHECK(refused.out.empty());
    CHECK(run({"weights", "--family", "spherical", "--q", "2", "--epsilon", "-1"}).code == 2);
    CHECK(run({"construct", "--family", "conformal-log", "--epsilon", "-1", "--q", "2", "--M", "-1", "--k", "1",
               "--kind", "sign-changing", "--r-min", "1", "--r-max", "2", "--nr", "4", "--ntheta", "4"})
              .code == 2);
    CHECK(run({"classify", "--epsilon", "2", "--q", "3", "--mu", "4"}).code == 64);
    CHECK(run({"classify", "--epsilon", "1", "--q", "abc", "--mu", "4"}).code == 64);
    CHECK(run({"frobnicate"}).code == 64);
    CHECK(run({}).code == 64);
    CHECK(run({"classify", "--epsilon", "1", "--q", "1", "--mu", "4"}).code == 64);
    // the heteroclinic level is outside the period curve's domain
    CHECK(run({"period", "--epsilon", "1", "--q", "3", "--mu", "1", "--region", "origin", "--s-min", "0.1", "--s-max",
               "0.9", "--n", "3"})
              .code == 2);
    CHECK(run({"classify", "--help"}).code == 0);
}

TEST_CASE("period curve")
{
    const Outcome o = run({"period", "--epsilon", "-1", "--q", "3", "--mu", "4", "--region", "origin", "--s-min", "0.001",
                           "--s-max", "100", "--n", "50"});
    REQUIRE(o.code == 0);
    const auto rows = csv(o.out);
    REQUIRE(rows.size() == 51);
    CHECK(rows[0] == std::vector<std::string>{"s", "T"});
    CHECK(std::stod(rows[1][1]) < 3.141592653589793);
    for (std::size_t i = 2; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) < std::stod(rows[i - 1][1]));
    CHECK(std::stod(rows[50][0]) == 100);
}

TEST_CASE("modes and orbit CSV")
{
    const Outcome o = run({"modes", "--epsilon", "1", "--q", "0.5", "--mu", "36", "--k", "4", "--kind", "positive",
                           "--samples", "64"});
    REQUIRE(o.code == 0);
    const auto rows = csv(o.out);
    CHECK(rows[0] == std::vector<std::string>{"theta", "w"});
    CHECK(rows.size() == 66);
    CHECK(rows[1][1] == rows[65][1]);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) > 0);

    const Outcome orbit = run({"orbit", "--epsilon", "-1", "--q", "3", "--mu", "1", "--region", "origin", "--s", "1",
                               "--samples", "8"});
    REQUIRE(orbit.code == 0);
    const auto pts = csv(orbit.out);
    REQUIRE(pts.size() == 10);
    CHECK(std::abs(std::stod(pts[9][1])) < 1e-9);
    CHECK(std::stod(pts[9][2]) == doctest::Approx(1).epsilon(1e-9));
}

TEST_CASE("weights, construct and verify")
{
    const Outcome w = run({"weights", "--family", "conformal-power", "--q", "0.5", "--alpha", "6", "--epsilon", "1"});
    REQUIRE(w.code == 0);
    const auto wj = nlohmann::json::parse(w.out);
    CHECK(schema::validate(schema_for("weights"), wj).empty());
    CHECK(wj["consistent"] == true);

    const std::vector<std::string> field{"--family", "spherical", "--q", "3", "--k", "2", "--kind", "sign-changing",
                                         "--r-min", "0.3", "--r-max", "2.8", "--nr", "32", "--ntheta", "64"};
    std::vector<std::string> args{"construct"};
    args.insert(args.end(), field.begin(), field.end());
    const Outcome c = run(args);
    REQUIRE(c.code == 0);
    const auto rows = csv(c.out);
    CHECK(rows[0] == std::vector<std::string>{"r", "theta", "u"});
    CHECK(rows.size() == 1 + 32 * 64);
    // row-major in theta then r
    CHECK(rows[1][1] == rows[32][1]);
    CHECK(rows[1][0] == rows[33][0]);

    args[0] = "verify";
    const Outcome v = run(args);
    REQUIRE(v.code == 0);
    const auto vj = nlohmann::json::parse(v.out);
    CHECK(schema::validate(schema_for("verify"), vj).empty());
    CHECK(vj["residual_ratio_refined"].get<double>() == doctest::Approx(4).epsilon(0.1));
}

TEST_CASE("sweep marks classification boundaries in input order")
{
    const Outcome o = run({"sweep", "--epsilon", "1", "--q", "3", "--mu-min", "0.5", "--mu-max", "9.5", "--n", "10"});
    REQUIRE(o.code == 0);
    const auto rows = csv(o.out);
    REQUIRE(rows.size() == 11);
    CHECK(rows[0][0] == "mu");
    // sign-changing modes k < sqrt(mu): the top mode changes at mu = 1, 4, 9
    int boundaries = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) boundaries += rows[i].back() == "1";
    CHECK(boundaries == 3);
    CHECK(std::stod(rows[1][0]) == 0.5);
    CHECK(std::stod(rows[10][0]) == 9.5);
    CHECK(run({"sweep", "--epsilon", "1", "--q", "3", "--mu-min", "0.5", "--mu-max", "9.5", "--n", "10"}).out == o.out);
}

TEST_CASE("schema validator rejects malformed documents")
{
    const auto s = schema_for("classify");
    auto doc = nlohmann::json::parse(run({"classify", "--epsilon", "1", "--q", "3", "--mu", "4"}).out);
    CHECK(schema::validate(s, doc).empty());
    auto missing = doc;
    missing.erase("origin");
    CHECK(!schema::validate(s, missing).empty());
    auto extra = doc;
    extra["surprise"] = 1;
    CHECK(!schema::validate(s, extra).empty());
    auto wrong = doc;
    wrong["sign_changing"]["values"] = nlohmann::json::array({0});
    CHECK(!schema::validate(s, wrong).empty());
}

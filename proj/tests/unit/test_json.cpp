#include <doctest.h>

#include "dynper/json.hpp"

using namespace dynper;

TEST_CASE("pairs serialize with inf for the essential pair")
{
    const auto pairs = pair_by_persistence(ScalarField::line({5, 1, 4, 0, 6}));
    const Json j = to_json(pairs);
    CHECK(j.dump() ==
          R"([{"min_index":1,"saddle_index":2,"birth":1.0,"death":4.0,"value":3.0},)"
          R"({"min_index":3,"birth":0.0,"value":"inf"}])");
    CHECK(pairs_from_json(j) == pairs);
}

TEST_CASE("malformed pair JSON is a parse error")
{
    CHECK_THROWS_AS(pairs_from_json(Json::object()), ParseError);
    CHECK_THROWS_AS(pairs_from_json(Json::parse(R"([{"birth":1}])")), ParseError);
    CHECK_THROWS_AS(pairs_from_json(Json::parse(R"([{"min_index":0,"birth":0,"value":"big"}])")),
                    ParseError);
}

TEST_CASE("other documents")
{
    CHECK(to_json(1, DynamicsResult{3.0, VertexId{2}}).dump() ==
          R"({"min_index":1,"value":3.0,"witness":2})");
    CHECK(to_json(3, DynamicsResult{std::numeric_limits<double>::infinity(), std::nullopt}).dump() ==
          R"({"min_index":3,"value":"inf","witness":null})");
    CHECK(to_json(GranulometricCurve{{3}, {2, 1}}).dump() == R"({"breakpoints":[3.0],"counts":[2,1]})");
    CHECK(to_json(SaliencyMap{{{1, 2, 3.0}}}).dump() == R"([{"edge":[1,2],"value":3.0}])");
    CHECK(to_json(std::vector<std::pair<double, double>>{{1, 4}}).dump() == "[[1.0,4.0]]");

    const Json report = to_json(EquivalenceReport{});
    CHECK(report.dump() ==
          R"({"fields_tested":0,"pairings_identical":true,"max_value_discrepancy":0.0,"first_counterexample":null})");

    GeneratorSpec s;
    s.shape = {4, 4};
    s.seed = 9;
    CHECK(to_json(s).dump() ==
          R"({"kind":"uniform_random","shape":[4,4],"bumps":1,"seed":9,"amplitude":[1.0,2.0],"connectivity":"axis"})");
}

#include <catch2/catch_amalgamated.hpp>

#include "grassmann/config_json.hpp"

using namespace grassmann;
using nlohmann::json;

namespace {

json two_subspace_doc() {
    return json::parse(R"({
        "n": 4, "m": 2,
        "subspaces": [
            {"id": "V", "frame": [[[1,0],[0,0],[0,0],[0,0]],
                                  [[0,0],[1,0],[0,0],[0,0]]]},
            {"id": "W", "frame": [[[0,0],[0,0],[1,0],[0,0]],
                                  [[0,0],[0,0],[0,0],[1,0]]]}
        ]
    })");
}

}  // namespace

TEST_CASE("a valid two-subspace document parses") {
    Configuration c = parse_config_json(two_subspace_doc());
    REQUIRE(c.n() == 4);
    REQUIRE(c.m() == 2);
    REQUIRE(c.size() == 2);
    REQUIRE(c.labels[0] == "V");
    REQUIRE(std::abs(c.subspaces[0].frame(0, 0) - Complex(1.0, 0.0)) == 0.0);
    // rows are basis vectors: row 0 of W lands in column 0 of the frame
    REQUIRE(std::abs(c.subspaces[1].frame(2, 0) - Complex(1.0, 0.0)) == 0.0);
}

TEST_CASE("schema errors carry the offending location and id") {
    json doc = two_subspace_doc();
    doc["subspaces"][1]["frame"][0].erase(3);
    try {
        parse_config_json(doc);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        std::string msg = e.what();
        REQUIRE(msg.find("/subspaces/1/frame/0") != std::string::npos);
        REQUIRE(msg.find("'W'") != std::string::npos);
    }
}

TEST_CASE("non-orthonormal frames need the orthonormalize option") {
    json doc = two_subspace_doc();
    doc["subspaces"][0]["frame"][0][0][0] = 2.0;  // scale the first vector
    REQUIRE_THROWS_AS(parse_config_json(doc), NotOrthonormal);
    ParseOptions opts;
    opts.orthonormalize = true;
    Configuration c = parse_config_json(doc, opts);
    REQUIRE((c.subspaces[0].frame.adjoint() * c.subspaces[0].frame -
             CMatrix::Identity(2, 2))
                .norm() < 1e-12);
}

TEST_CASE("tolerance overrides flow through") {
    json doc = two_subspace_doc();
    doc["tolerances"] = {{"eq_tol", 1e-6}, {"deg_tol", 1e-5}};
    Configuration c = parse_config_json(doc);
    REQUIRE(c.tol.eq_tol == 1e-6);
    REQUIRE(c.tol.deg_tol == 1e-5);
    ParseOptions opts;
    opts.eq_tol_override = 1e-4;
    REQUIRE(parse_config_json(doc, opts).tol.eq_tol == 1e-4);
}

TEST_CASE("missing or malformed fields are schema errors") {
    json doc = two_subspace_doc();
    doc.erase("m");
    REQUIRE_THROWS_AS(parse_config_json(doc), SchemaError);

    doc = two_subspace_doc();
    doc["subspaces"] = json::array();
    REQUIRE_THROWS_AS(parse_config_json(doc), SchemaError);

    doc = two_subspace_doc();
    doc["subspaces"][0]["frame"][0][0] = 3.5;  // not a [re, im] pair
    REQUIRE_THROWS_AS(parse_config_json(doc), SchemaError);
}

TEST_CASE("configuration round-trips through the document schema") {
    Configuration c = sample_configuration(5, 2, 3, 77);
    nlohmann::ordered_json emitted = config_to_json(c);
    std::string text = dump_json_17(emitted);
    Configuration back = parse_config_json(json::parse(text));
    REQUIRE(back.n() == c.n());
    REQUIRE(back.size() == c.size());
    for (int s = 0; s < c.size(); ++s) {
        // %.17g round-trips doubles exactly
        REQUIRE((back.subspaces[s].frame - c.subspaces[s].frame).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("17-digit dump is stable") {
    REQUIRE(format_double_17(0.5) == "0.5");
    REQUIRE(format_double_17(1.0) == "1");
    nlohmann::ordered_json j;
    j["a"] = 0.1;
    j["b"] = nlohmann::ordered_json::array({1, 2.5});
    std::string dumped = dump_json_17(j, 2);
    REQUIRE(dumped.find("0.10000000000000001") != std::string::npos);
    REQUIRE(json::parse(dumped)["a"].get<double>() == 0.1);
}

TEST_CASE("missing files are I/O errors") {
    REQUIRE_THROWS_AS(parse_config_file("/nonexistent/nope.json"), IoError);
}

#include "backflow/archive.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace backflow;
using namespace backflow::testing;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("run configuration validates its inputs") {
    RunConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.route_enum() == Route::projection_sandwich);
    c.route = "hilbert";
    CHECK(c.route_enum() == Route::hilbert_route);

    RunConfig bad = c;
    bad.route = "sideways";
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.n0 = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.q0 = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.t_min = 2.0;
    bad.t_max = -2.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.iterations = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("configuration survives a JSON round trip unchanged") {
    RunConfig c;
    c.command = "lambda";
    c.n0 = 1234;
    c.q0 = 37.5;
    c.seed = 9876543210123ULL;
    c.start = "random";
    c.prob_spacing = 0.0042;
    RunConfig back = config_from_json(to_json(c));
    CHECK(back.command == c.command);
    CHECK(back.n0 == c.n0);
    CHECK(back.q0 == c.q0);
    CHECK(back.seed == c.seed);
    CHECK(back.start == c.start);
    CHECK(back.prob_spacing == c.prob_spacing);
}

TEST_CASE("round-trip double formatting is lossless") {
    for (double v : {0.1, 1.0 / 3.0, 0.0384517, -2.5027957460942478e-15, 1e308, 0.0}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("archives round trip byte-identically and detect tampering") {
    auto g = grid_ptr(32, 5.0);
    auto s = random_state(g, 7);

    ResultArchive a;
    a.config.command = "lambda";
    a.config.n0 = 32;
    a.config.q0 = 5.0;
    a.payload["lambda"] = 0.0384417;
    a.payload["state"] = state_to_json(s);

    // serialization is deterministic
    CHECK(serialize_archive(a) == serialize_archive(a));

    const auto path = temp_file("backflow_test_archive.json");
    save_archive(a, path.string());
    ResultArchive b = load_archive(path.string());
    CHECK(b.config.n0 == a.config.n0);
    CHECK(b.payload["lambda"].get<double>() == 0.0384417);

    // state payload round trip is exact
    StateVector s2 = state_from_json(b.payload["state"]);
    REQUIRE(s2.amplitudes.size() == s.amplitudes.size());
    for (std::size_t j = 0; j < s.amplitudes.size(); ++j) CHECK(s2.amplitudes[j] == s.amplitudes[j]);

    // saving the loaded archive reproduces the original file bytes
    const auto path2 = temp_file("backflow_test_archive2.json");
    save_archive(b, path2.string());
    CHECK(slurp(path.string()) == slurp(path2.string()));

    // a tampered payload fails the checksum on load
    std::string text = slurp(path.string());
    const auto pos = text.find("0.0384417");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 9, "0.0384418");
    std::ofstream(path.string(), std::ios::binary) << text;
    CHECK_THROWS(load_archive(path.string()));

    std::filesystem::remove(path);
    std::filesystem::remove(path2);
}

TEST_CASE("checksum is a stable function of the bytes") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);  // FNV-1a offset basis
    CHECK(fnv1a64("a") != fnv1a64("b"));
    CHECK(fnv1a64("backflow") == fnv1a64("backflow"));
}

TEST_CASE("h-point payloads round trip") {
    std::vector<HPoint> pts = {{1, 0.0384417}, {2, 0.038445}, {40, 0.03845169999}};
    auto back = h_points_from_json(h_points_to_json(pts));
    REQUIRE(back.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(back[i].h == pts[i].h);
        CHECK(back[i].lambda_h == pts[i].lambda_h);
    }
}

TEST_CASE("CSV output is deterministic and carries the configuration header") {
    RunConfig c;
    c.command = "lambda";
    c.n0 = 64;
    const std::vector<std::string> cols = {"iteration", "lambda"};
    const std::vector<std::vector<double>> rows = {{0.0, 0.0301}, {1.0, 0.0384417}};

    const auto p1 = temp_file("backflow_test1.csv");
    const auto p2 = temp_file("backflow_test2.csv");
    write_csv(p1.string(), c, cols, rows);
    write_csv(p2.string(), c, cols, rows);
    const std::string t1 = slurp(p1.string());
    CHECK(t1 == slurp(p2.string()));
    CHECK(t1.find("# ") == 0);
    CHECK(t1.find("# command = \"lambda\"") != std::string::npos);
    CHECK(t1.find("# n0 = 64") != std::string::npos);
    CHECK(t1.find("iteration,lambda") != std::string::npos);
    CHECK(t1.find("0.038441") != std::string::npos);
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}

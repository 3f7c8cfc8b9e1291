#pragma once

#include "backflow/dynamics.hpp"
#include "backflow/grid.hpp"
#include "backflow/spectral.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace backflow {

using Json = nlohmann::ordered_json;

// Per-run parameters; fully serialized into every output artifact.
struct RunConfig {
    std::string command;
    std::size_t n0 = 10000;
    double q0 = 50.0;
    int h_max = 40;
    std::size_t iterations = 1000;
    double T = 1.0;
    std::string route = "sandwich";  // sandwich | hilbert
    std::string start = "constant";  // constant | random
    std::uint64_t seed = 0;
    double t_min = -3.0;
    double t_max = 3.0;
    double x_min = -20.0;
    double x_max = 20.0;
    double dt = 1e-3;
    double t_step = 1e-2;     // half-space-probability curve resolution
    double field_t_step = 1e-2;  // spacetime-field slice spacing
    double prob_spacing = 2.4e-3;
    unsigned workers = 1;

    void validate() const;  // throws std::invalid_argument
    Route route_enum() const;
};

Json to_json(const RunConfig& c);
RunConfig config_from_json(const Json& j);

// Self-describing result container: config + payload + payload checksum.
struct ResultArchive {
    static constexpr int format_version = 1;
    RunConfig config;
    Json payload;
};

std::uint64_t fnv1a64(const std::string& bytes);

std::string serialize_archive(const ResultArchive& archive);
void save_archive(const ResultArchive& archive, const std::string& path);
ResultArchive load_archive(const std::string& path);  // verifies checksum

// Payload serializers.
Json state_to_json(const StateVector& s);
StateVector state_from_json(const Json& j);
Json power_result_to_json(const PowerResult& r);
Json h_points_to_json(const std::vector<HPoint>& pts);
std::vector<HPoint> h_points_from_json(const Json& j);

// Tabular output: '#'-prefixed config header, then a CSV column block.
// Values are printed with round-trip precision, so identical inputs give
// byte-identical files.
std::string format_double(double v);
void write_csv(const std::string& path, const RunConfig& config,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

}  // namespace backflow

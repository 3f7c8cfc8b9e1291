#include "backflow/archive.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace backflow {

void RunConfig::validate() const {
    if (n0 < 2) throw std::invalid_argument("config: n0 must be >= 2");
    if (!(q0 > 0.0)) throw std::invalid_argument("config: q0 must be > 0");
    if (h_max < 1) throw std::invalid_argument("config: h-max must be >= 1");
    if (iterations < 1) throw std::invalid_argument("config: iterations must be >= 1");
    if (!(T > 0.0)) throw std::invalid_argument("config: T must be > 0");
    if (route != "sandwich" && route != "hilbert")
        throw std::invalid_argument("config: route must be sandwich or hilbert");
    if (start != "constant" && start != "random")
        throw std::invalid_argument("config: start must be constant or random");
    if (!(t_min < t_max)) throw std::invalid_argument("config: need t-min < t-max");
    if (!(x_min < x_max)) throw std::invalid_argument("config: need x-min < x-max");
    if (!(dt > 0.0) || !(t_step > 0.0) || !(field_t_step > 0.0))
        throw std::invalid_argument("config: time steps must be > 0");
    if (!(prob_spacing > 0.0)) throw std::invalid_argument("config: prob-spacing must be > 0");
    if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
}

Route RunConfig::route_enum() const {
    return route == "hilbert" ? Route::hilbert_route : Route::projection_sandwich;
}

Json to_json(const RunConfig& c) {
    return Json{{"command", c.command}, {"n0", c.n0},
                {"q0", c.q0},           {"h_max", c.h_max},
                {"iterations", c.iterations}, {"T", c.T},
                {"route", c.route},     {"start", c.start},
                {"seed", c.seed},       {"t_min", c.t_min},
                {"t_max", c.t_max},     {"x_min", c.x_min},
                {"x_max", c.x_max},     {"dt", c.dt},
                {"t_step", c.t_step},   {"field_t_step", c.field_t_step},
                {"prob_spacing", c.prob_spacing}, {"workers", c.workers}};
}

RunConfig config_from_json(const Json& j) {
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.n0 = j.at("n0").get<std::size_t>();
    c.q0 = j.at("q0").get<double>();
    c.h_max = j.at("h_max").get<int>();
    c.iterations = j.at("iterations").get<std::size_t>();
    c.T = j.at("T").get<double>();
    c.route = j.at("route").get<std::string>();
    c.start = j.at("start").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.t_min = j.at("t_min").get<double>();
    c.t_max = j.at("t_max").get<double>();
    c.x_min = j.at("x_min").get<double>();
    c.x_max = j.at("x_max").get<double>();
    c.dt = j.at("dt").get<double>();
    c.t_step = j.at("t_step").get<double>();
    c.field_t_step = j.at("field_t_step").get<double>();
    c.prob_spacing = j.at("prob_spacing").get<double>();
    c.workers = j.at("workers").get<unsigned>();
    return c;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string serialize_archive(const ResultArchive& archive) {
    const std::string payload_bytes = archive.payload.dump();
    char checksum[32];
    std::snprintf(checksum, sizeof(checksum), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(payload_bytes)));
    Json j{{"format_version", ResultArchive::format_version},
           {"config", to_json(archive.config)},
           {"checksum", checksum},
           {"payload", archive.payload}};
    return j.dump(2) + "\n";
}

void save_archive(const ResultArchive& archive, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("save_archive: cannot open " + path);
    out << serialize_archive(archive);
    if (!out) throw std::runtime_error("save_archive: write failed for " + path);
}

ResultArchive load_archive(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_archive: cannot open " + path);
    Json j = Json::parse(in);
    if (j.at("format_version").get<int>() != ResultArchive::format_version)
        throw std::runtime_error("load_archive: unsupported format_version");
    ResultArchive archive;
    archive.config = config_from_json(j.at("config"));
    archive.payload = j.at("payload");
    char expected[32];
    std::snprintf(expected, sizeof(expected), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(archive.payload.dump())));
    if (j.at("checksum").get<std::string>() != expected)
        throw std::runtime_error("load_archive: checksum mismatch in " + path);
    return archive;
}

Json state_to_json(const StateVector& s) {
    Json amp = Json::array();
    for (const auto& a : s.amplitudes) amp.push_back(Json::array({a.real(), a.imag()}));
    return Json{{"n_half", s.grid->n_half}, {"q_max", s.grid->q_max}, {"amplitudes", amp}};
}

StateVector state_from_json(const Json& j) {
    auto grid = std::make_shared<const MomentumGrid>(
        make_grid(j.at("n_half").get<std::size_t>(), j.at("q_max").get<double>()));
    StateVector s = make_state(grid);
    const auto& amp = j.at("amplitudes");
    if (amp.size() != s.amplitudes.size())
        throw std::runtime_error("state_from_json: amplitude count mismatch");
    for (std::size_t i = 0; i < s.amplitudes.size(); ++i)
        s.amplitudes[i] = Complex{amp[i][0].get<double>(), amp[i][1].get<double>()};
    return s;
}

Json power_result_to_json(const PowerResult& r) {
    return Json{{"lambda", r.lambda()},
                {"iterations", r.iterations},
                {"estimates", r.estimates},
                {"residuals", r.residuals},
                {"final_vector", state_to_json(r.final_vector)}};
}

Json h_points_to_json(const std::vector<HPoint>& pts) {
    Json arr = Json::array();
    for (const auto& p : pts) arr.push_back(Json{{"h", p.h}, {"lambda_h", p.lambda_h}});
    return arr;
}

std::vector<HPoint> h_points_from_json(const Json& j) {
    std::vector<HPoint> pts;
    for (const auto& e : j) pts.push_back(HPoint{e.at("h").get<int>(), e.at("lambda_h").get<double>()});
    return pts;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const RunConfig& config,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ostringstream body;
    const Json cfg = to_json(config);
    for (const auto& [key, value] : cfg.items()) body << "# " << key << " = " << value << "\n";
    for (std::size_t c = 0; c < columns.size(); ++c)
        body << columns[c] << (c + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            body << format_double(row[c]) << (c + 1 < row.size() ? "," : "\n");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << body.str();
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

}  // namespace backflow

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "cg/model.hpp"

namespace cgcli {

using json = nlohmann::json;

// Law documents: {"point":v} {"uniform":[lo,hi]} {"power":[p,lo,hi]}
// {"power_origin":[p,lo,hi]} {"reciprocal":[lo,hi]} {"atoms":[[v,w],...]}
cg::ParamLaw law_from_json(const json& j);
json law_to_json(const cg::ParamLaw& law);

// {"kind":"geometric","alpha":{...},"beta":{...},"seed":42,"z":null,"allow_degenerate":false}
cg::ModelSpec model_from_json(const json& j);
json model_to_json(const cg::ModelSpec& m);

struct OutputCfg {
    std::string dir = "out";
    std::vector<std::string> formats{"csv", "svg", "json"};
    bool wants(const std::string& f) const;
};

struct SimulateCfg {
    std::size_t m = 0, n = 0; // 0 sizes the grid from the level curve
    std::vector<double> times{250, 500, 1000};
    int level_points = 200;
    int rays = 50;
    bool write_field = false;   // field.csv, G(i, j) for the whole grid
    bool write_weights = false; // weights.csv
};

struct ShapeCfg {
    int directions = 64;
    int level_points = 200;
};

struct DistCfg {
    std::size_t m = 4, n = 4;
    std::vector<double> a, b; // explicit parameters override sampling
    long long kmin = 0, kmax = 20;
    std::string method = "series"; // series | det | mc | all
    std::size_t replicas = 20000;
    double rho = 0;
    int quad_nodes = 512;
    double tail_eps = 1e-14;
};

struct FluctCfg {
    std::vector<std::size_t> ns{32, 64, 128};
    double r = 1;
    double smin = -4, smax = 2, ds = 0.5;
    std::size_t replicas = 0; // right-tail MC; 0 skips it
    std::size_t tail_n = 64;
    std::vector<double> tail_s{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4,
                              0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8};
    int quad_nodes = 512;
    double tail_eps = 1e-14;
};

struct TwCfg {
    double smin = -8, smax = 4, ds = 0.25;
    std::string method = "both"; // fredholm | painleve | both
    double t0 = 10;
};

struct TraceCfg {
    std::size_t m = 16, n = 16;
    std::vector<double> a, b;
    double delta = 0;
    double dv_tol = 1e-10;
    bool ascent = true;
};

struct RunConfig {
    std::string command;
    cg::ModelSpec model;
    OutputCfg output;
    SimulateCfg simulate;
    ShapeCfg shape;
    DistCfg dist;
    FluctCfg fluct;
    TwCfg tw;
    TraceCfg trace;
};

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"simulate", "shape", "dist", "fluct", "tw", "trace"};
    return c;
}

// Throws cg::ConfigError on unknown keys, wrong types, or invalid values.
RunConfig parse_config(const json& doc, const std::string& command);
// Model, output and the active command's section with every default filled in.
json resolved(const RunConfig& c);

} // namespace cgcli

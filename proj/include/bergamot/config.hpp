#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bergamot/domain.hpp"
#include "bergamot/errors.hpp"
#include "bergamot/profile.hpp"

namespace bergamot {

struct GridSpec {
    double t_min = 1e-6;
    double t_max = 1e-2;
    int points = 40;
    bool geometric = true;
};

struct OracleConfig {
    int dmax = 8;
    int mc_samples = 200000;
    std::uint64_t seed = 42;
    double svd_cutoff = 1e-10;
};

struct XiSpec {
    enum class Type { None, Normal, Tangential };
    Type type = Type::None;
    int block = 0;
};

struct RunConfig {
    bool extended = false;
    DomainDescriptor domain;
    ExtendedDomainDescriptor ext_domain;
    std::vector<double> alpha;
    double beta = 2.0;
    double t0 = 0.05;
    std::string path = "radial";
    GridSpec grid;
    double quad_tol = 1e-9;
    double a_max = 100.0;
    bool convex = false;
    XiSpec xi;
    OracleConfig oracle;
    std::uint64_t seed = 42;
    std::string out_dir = "reports";
    nlohmann::json resolved; // canonical config with defaults filled

    ApproachSpec approach() const { return make_radial_approach(alpha, beta, t0); }

    std::vector<double> t_grid() const {
        if (grid.geometric) return geometric_grid_values();
        std::vector<double> g(grid.points);
        const double step = (grid.t_max - grid.t_min) / (grid.points - 1);
        for (int i = 0; i < grid.points; ++i) g[i] = grid.t_max - step * i;
        return g;
    }

private:
    std::vector<double> geometric_grid_values() const {
        std::vector<double> g(grid.points);
        const double ratio = std::log(grid.t_min / grid.t_max) / (grid.points - 1);
        for (int i = 0; i < grid.points; ++i) g[i] = grid.t_max * std::exp(ratio * i);
        return g;
    }
};

namespace detail {

inline ProfileFunction parse_profile(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ValidationError("config: profile needs a \"kind\" field");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "power") {
        if (!j.contains("m")) throw ValidationError("config: power profile needs \"m\"");
        return ProfileFunction::power(j.at("m").get<double>(), j.value("c", 1.0));
    }
    if (kind == "expflat") {
        if (!j.contains("p")) throw ValidationError("config: expflat profile needs \"p\"");
        return ProfileFunction::exp_flat(j.at("p").get<double>());
    }
    throw ValidationError("config: unknown profile kind \"" + kind + "\"");
}

inline nlohmann::json profile_to_json(const ProfileFunction& p) {
    nlohmann::json j;
    switch (p.kind()) {
    case ProfileKind::Power:
        j["kind"] = "power";
        j["m"] = p.power_exponent();
        j["c"] = p.power_scale();
        break;
    case ProfileKind::ExpFlat:
        j["kind"] = "expflat";
        j["p"] = p.exp_flat_exponent();
        break;
    case ProfileKind::Custom:
        throw ValidationError("config: custom profiles are not expressible in config");
    }
    return j;
}

} // namespace detail

/// Parses and validates a run configuration. Every invariant is checked
/// eagerly; error messages name the offending field.
inline RunConfig parse_config(const nlohmann::json& j) {
    RunConfig cfg;
    if (!j.is_object()) throw ValidationError("config: top level must be a JSON object");
    if (!j.contains("blocks") || !j.at("blocks").is_array() || j.at("blocks").empty())
        throw ValidationError("config: \"blocks\" must be a non-empty array");

    cfg.extended = j.value("extended", false);
    const double truncation = j.value("truncation", 1.0);
    if (!(truncation > 0.0)) throw ValidationError("config: \"truncation\" must be positive");

    if (cfg.extended) {
        std::vector<ExtendedBlock> blocks;
        for (const auto& bj : j.at("blocks")) {
            ExtendedBlock b;
            b.dim = bj.value("dim", 1);
            b.profile = detail::parse_profile(bj.at("profile"));
            if (bj.contains("coords")) b.coords = bj.at("coords").get<std::vector<int>>();
            blocks.push_back(std::move(b));
        }
        cfg.ext_domain = make_extended_domain(std::move(blocks), truncation,
                                              j.value("delta", 0.25));
    } else {
        std::vector<Block> blocks;
        for (const auto& bj : j.at("blocks")) {
            Block b;
            b.dim = bj.value("dim", 1);
            b.profile = detail::parse_profile(bj.at("profile"));
            blocks.push_back(std::move(b));
        }
        cfg.domain = make_domain(std::move(blocks), truncation);
    }

    const std::size_t k = j.at("blocks").size();
    cfg.alpha = j.value("alpha", std::vector<double>(k, 2.0));
    if (cfg.alpha.size() != k)
        throw ValidationError("config: \"alpha\" length must equal the number of blocks");
    for (double a : cfg.alpha)
        if (!(a > 1.0)) throw ValidationError("config: every \"alpha\" entry must be > 1");
    cfg.beta = j.value("beta", 2.0);
    if (!(cfg.beta > 1.0)) throw ValidationError("config: \"beta\" must be > 1");
    cfg.t0 = j.value("t0", 0.05 * truncation);
    if (!(cfg.t0 > 0.0)) throw ValidationError("config: \"t0\" must be positive");
    cfg.path = j.value("path", std::string("radial"));
    if (cfg.path != "radial")
        throw ValidationError("config: \"path\" supports only \"radial\"");

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        cfg.grid.t_min = g.value("t_min", cfg.grid.t_min);
        cfg.grid.t_max = g.value("t_max", cfg.grid.t_max);
        cfg.grid.points = g.value("points", cfg.grid.points);
        cfg.grid.geometric = g.value("geometric", true);
    }
    if (!(cfg.grid.t_min > 0.0)) throw ValidationError("config: \"t_min\" must be positive");
    if (!(cfg.grid.t_min < cfg.grid.t_max))
        throw ValidationError("config: \"t_min\" must be below \"t_max\"");
    if (cfg.grid.t_max > cfg.t0 * (1.0 + 1e-12))
        throw ValidationError("config: \"t_max\" must not exceed \"t0\"");
    if (cfg.grid.points < 8) throw ValidationError("config: \"points\" must be >= 8");

    cfg.quad_tol = j.value("quad_tol", 1e-9);
    if (!(cfg.quad_tol > 0.0)) throw ValidationError("config: \"quad_tol\" must be positive");
    cfg.a_max = j.value("amax", 100.0);
    if (!(cfg.a_max > 0.0)) throw ValidationError("config: \"amax\" must be positive");
    cfg.convex = j.value("convex", false);

    if (j.contains("xi")) {
        const auto& x = j.at("xi");
        const std::string type = x.value("type", std::string("normal"));
        if (type == "normal") {
            cfg.xi.type = XiSpec::Type::Normal;
        } else if (type == "tangential") {
            cfg.xi.type = XiSpec::Type::Tangential;
            cfg.xi.block = x.value("block", 0);
            if (cfg.xi.block < 0 || cfg.xi.block >= static_cast<int>(k))
                throw ValidationError("config: \"xi.block\" out of range");
        } else {
            throw ValidationError("config: \"xi.type\" must be normal or tangential");
        }
    }

    if (j.contains("oracle")) {
        const auto& o = j.at("oracle");
        cfg.oracle.dmax = o.value("dmax", cfg.oracle.dmax);
        cfg.oracle.mc_samples = o.value("mc_samples", cfg.oracle.mc_samples);
        cfg.oracle.seed = o.value("seed", cfg.oracle.seed);
        cfg.oracle.svd_cutoff = o.value("svd_cutoff", cfg.oracle.svd_cutoff);
    }
    if (cfg.oracle.dmax < 0) throw ValidationError("config: \"oracle.dmax\" must be >= 0");
    if (cfg.oracle.mc_samples < 10000)
        throw ValidationError("config: \"oracle.mc_samples\" must be >= 1e4");
    if (!(cfg.oracle.svd_cutoff > 0.0))
        throw ValidationError("config: \"oracle.svd_cutoff\" must be positive");

    cfg.seed = j.value("seed", static_cast<std::uint64_t>(42));
    cfg.out_dir = j.value("out", std::string("reports"));

    // canonical resolved form, defaults filled, keys sorted by nlohmann
    nlohmann::json r;
    r["extended"] = cfg.extended;
    r["truncation"] = truncation;
    nlohmann::json blocks_json = nlohmann::json::array();
    if (cfg.extended) {
        for (const auto& b : cfg.ext_domain.blocks)
            blocks_json.push_back({{"dim", b.dim},
                                   {"profile", detail::profile_to_json(b.profile)},
                                   {"coords", b.coords}});
        r["delta"] = cfg.ext_domain.delta;
    } else {
        for (const auto& b : cfg.domain.blocks)
            blocks_json.push_back(
                {{"dim", b.dim}, {"profile", detail::profile_to_json(b.profile)}});
    }
    r["blocks"] = blocks_json;
    r["alpha"] = cfg.alpha;
    r["beta"] = cfg.beta;
    r["t0"] = cfg.t0;
    r["path"] = cfg.path;
    r["grid"] = {{"t_min", cfg.grid.t_min},
                 {"t_max", cfg.grid.t_max},
                 {"points", cfg.grid.points},
                 {"geometric", cfg.grid.geometric}};
    r["quad_tol"] = cfg.quad_tol;
    r["amax"] = cfg.a_max;
    r["convex"] = cfg.convex;
    if (cfg.xi.type == XiSpec::Type::Normal)
        r["xi"] = {{"type", "normal"}};
    else if (cfg.xi.type == XiSpec::Type::Tangential)
        r["xi"] = {{"type", "tangential"}, {"block", cfg.xi.block}};
    r["oracle"] = {{"dmax", cfg.oracle.dmax},
                   {"mc_samples", cfg.oracle.mc_samples},
                   {"seed", cfg.oracle.seed},
                   {"svd_cutoff", cfg.oracle.svd_cutoff}};
    r["seed"] = cfg.seed;
    cfg.resolved = std::move(r);
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config: parse error in " + path + ": " + e.what());
    }
    return parse_config(j);
}

} // namespace bergamot

#include "sweep_config.hpp"

#include <initializer_list>

namespace fblnoma {

namespace {

template <class T>
T get(const YAML::Node& node, const std::string& field) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(field, "cannot convert '" + YAML::Dump(node) + "'");
    }
}

void check_keys(const YAML::Node& node, const std::string& prefix,
                std::initializer_list<const char*> allowed) {
    if (!node.IsMap()) throw ConfigError(prefix.empty() ? "config" : prefix, "expected a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(prefix.empty() ? key : prefix + "." + key, "unknown key");
    }
}

template <class T>
void set(const YAML::Node& node, const char* key, const std::string& prefix, T& out) {
    if (node[key]) out = get<T>(node[key], prefix + "." + key);
}

template <class T>
void set_opt(const YAML::Node& node, const char* key, const std::string& prefix, std::optional<T>& out) {
    if (node[key]) out = get<T>(node[key], prefix + "." + key);
}

}  // namespace

SweepSpec apply_sweep_config(const YAML::Node& root, SweepSpec spec) {
    if (!root || root.IsNull()) return spec;
    check_keys(root, "", {"preset", "name", "description", "scenario", "system", "sweep", "schemes",
                          "series", "solver"});
    if (root["preset"]) spec = preset(get<std::string>(root["preset"], "preset"));
    if (root["name"]) spec.name = get<std::string>(root["name"], "name");
    if (root["description"]) spec.description = get<std::string>(root["description"], "description");

    if (const auto sc = root["scenario"]) {
        check_keys(sc, "scenario", {"type", "h1", "h2", "sigma1_sq", "sigma2_sq", "d1", "d2", "alpha",
                                    "seed", "realizations"});
        if (sc["type"]) {
            const auto type = get<std::string>(sc["type"], "scenario.type");
            if (type != "fixed" && type != "fading") {
                throw ConfigError("scenario.type", "expected fixed or fading, got '" + type + "'");
            }
            spec.base.fading = type == "fading";
        }
        auto& fx = spec.base.fixed;
        auto& fd = spec.base.fading_scenario;
        set(sc, "h1", "scenario", fx.h1_tilde_mag);
        set(sc, "h2", "scenario", fx.h2_tilde_mag);
        set(sc, "sigma1_sq", "scenario", fx.sigma1_sq);
        set(sc, "sigma2_sq", "scenario", fx.sigma2_sq);
        fd.sigma1_sq = fx.sigma1_sq;
        fd.sigma2_sq = fx.sigma2_sq;
        set(sc, "d1", "scenario", fd.d1);
        set(sc, "d2", "scenario", fd.d2);
        set(sc, "alpha", "scenario", fd.alpha);
        set(sc, "seed", "scenario", fd.seed);
        set(sc, "realizations", "scenario", fd.realizations);
    }
    if (const auto sy = root["system"]) {
        check_keys(sy, "system", {"snr_db", "n", "t0"});
        set(sy, "snr_db", "system", spec.base.snr_db);
        set(sy, "n", "system", spec.base.n);
        set(sy, "t0", "system", spec.base.t0);
    }
    if (const auto sw = root["sweep"]) {
        check_keys(sw, "sweep", {"var", "start", "stop", "points"});
        if (sw["var"]) spec.var = parse_sweep_var(get<std::string>(sw["var"], "sweep.var"));
        set(sw, "start", "sweep", spec.start);
        set(sw, "stop", "sweep", spec.stop);
        set(sw, "points", "sweep", spec.points);
    }
    if (const auto s = root["schemes"]) {
        if (!s.IsSequence()) throw ConfigError("schemes", "expected a list");
        spec.schemes.clear();
        for (const auto& x : s) spec.schemes.push_back(parse_scheme(get<std::string>(x, "schemes")));
    }
    if (const auto s = root["series"]) {
        if (!s.IsSequence()) throw ConfigError("series", "expected a list");
        spec.series.clear();
        for (std::size_t i = 0; i < s.size(); ++i) {
            const std::string prefix = "series[" + std::to_string(i) + "]";
            check_keys(s[i], prefix, {"label", "t0", "snr_db", "h2", "n"});
            Series se;
            set(s[i], "label", prefix, se.label);
            set_opt(s[i], "t0", prefix, se.t0);
            set_opt(s[i], "snr_db", prefix, se.snr_db);
            set_opt(s[i], "h2", prefix, se.h2_mag);
            set_opt(s[i], "n", prefix, se.n);
            spec.series.push_back(se);
        }
    }
    if (const auto so = root["solver"]) {
        check_keys(so, "solver", {"scan_points", "rate_tol", "power_tol_rel", "throughput_tol",
                                  "max_fixed_point_iters", "max_bisection_iters"});
        set(so, "scan_points", "solver", spec.noma_scan_points);
        set(so, "rate_tol", "solver", spec.tol.rate_tol);
        set(so, "power_tol_rel", "solver", spec.tol.power_tol_rel);
        set(so, "throughput_tol", "solver", spec.tol.throughput_tol);
        set(so, "max_fixed_point_iters", "solver", spec.tol.max_fixed_point_iters);
        set(so, "max_bisection_iters", "solver", spec.tol.max_bisection_iters);
    }
    return spec;
}

SweepSpec load_sweep_config(const std::string& path, SweepSpec base) {
    YAML::Node root;
    try {
        root = YAML::LoadFile(path);
    } catch (const YAML::BadFile&) {
        throw ConfigError("config", "cannot open '" + path + "'");
    } catch (const YAML::ParserException& e) {
        throw ConfigError("config", e.what());
    }
    return apply_sweep_config(root, std::move(base));
}

}  // namespace fblnoma

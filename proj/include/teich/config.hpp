#pragma once
//
// Experiment configuration for the batch front-end. Parsed from JSON with
// defaults N = 64, M = 4N, eps = 1e-3.
//

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "teich/error.hpp"
#include "teich/fourier.hpp"
#include "teich/io.hpp"

namespace teich {

struct Tolerances {
    double reality = 1e-10;          ///< max |A_{-m,-n} - conj(A_{mn})|
    double symplectic = 1e-6;        ///< symplectic defect on |n| <= N/4
    double symmetry = 1e-6;          ///< ||Z - Z^T||_F / max(1, ||Z||_F)
    double contraction = 1e-10;      ///< min eig(I - Z Z*) must exceed this
    double isotropy = 1e-8;          ///< ||h||_HS and ||Z||_F for Moebius maps
    double ratio_spread = 0.02;      ///< pairwise spread of pullback ratios
    double step_halving = 0.01;      ///< pullback constant shift under eps -> eps/2
    double oracle_rel = 1e-6;        ///< quadrature vs closed form
    double orthogonality = 1e-10;    ///< |<mu_j, mu_k>_WP|, j != k
    double rank_one = 1e-12;         ///< N = 1 Siegel action vs disc action
    double metric_invariance = 1e-10;
    double qs_exact = 1e-12;         ///< |M - 1| for rotations
    double qs_bound = 1e6;           ///< any finite estimate below this passes
};

struct ExperimentConfig {
    int N = 64;
    std::size_t M = 256;
    double eps = 1e-3;
    int padding = 2;
    unsigned threads = 1;
    std::vector<int> modes{2, 3, 4, 5};
    std::size_t qs_nx = 256;
    std::size_t qs_nt = 64;
    double qs_t_max = pi;
    std::size_t grid_radial = 64;
    std::size_t grid_angular = 256;
    int max_degree = 6;
    std::size_t samples = 1000;
    Tolerances tol;
    std::string out_dir = "out";
    /// Inline map spec or the contents of the referenced file.
    std::optional<nlohmann::json> map;
    /// Keys ignored in non-strict mode.
    std::vector<std::string> ignored_keys;

    nlohmann::json to_json() const;
};

namespace detail {

template <class T>
T positive_at(const nlohmann::json& j, const char* key, T fallback)
{
    if (!j.contains(key))
        return fallback;
    const auto& v = j.at(key);
    if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer() || v.get<long long>() <= 0)
            throw ConfigError(std::string("config: '") + key + "' must be a positive integer");
        return static_cast<T>(v.get<long long>());
    } else {
        if (!v.is_number() || !(v.get<double>() > 0.0))
            throw ConfigError(std::string("config: '") + key + "' must be a positive number");
        return v.get<double>();
    }
}

inline void collect_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& prefix,
                            bool strict, std::vector<std::string>& ignored)
{
    for (const auto& [key, value] : j.items()) {
        if (allowed.count(key))
            continue;
        if (strict)
            throw ConfigError("config: unknown key '" + prefix + key + "'");
        ignored.push_back(prefix + key);
    }
}

} // namespace detail

/// Parses and validates a configuration. `base_dir` resolves a "map" given as a path.
inline ExperimentConfig parse_config(const std::string& text, bool strict = true,
                                     const std::filesystem::path& base_dir = {})
{
    nlohmann::json j;
    try {
        j = text.empty() ? nlohmann::json::object() : nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config: top level must be a JSON object");

    ExperimentConfig c;
    detail::collect_unknown(j,
                            {"N", "M", "eps", "padding", "threads", "modes", "qs", "grid", "max_degree", "samples",
                             "tolerances", "out", "map"},
                            "", strict, c.ignored_keys);

    c.N = detail::positive_at<int>(j, "N", c.N);
    c.M = j.contains("M") ? detail::positive_at<std::size_t>(j, "M", 0) : 4 * static_cast<std::size_t>(c.N);
    if (j.contains("eps")) {
        if (!j.at("eps").is_number() || !(j.at("eps").get<double>() > 0.0))
            throw ConfigError("config: 'eps' must be positive");
        c.eps = j.at("eps").get<double>();
    }
    c.padding = detail::positive_at<int>(j, "padding", c.padding);
    c.threads = detail::positive_at<unsigned>(j, "threads", c.threads);
    c.max_degree = j.contains("max_degree") ? detail::positive_at<int>(j, "max_degree", 0) : c.max_degree;
    c.samples = detail::positive_at<std::size_t>(j, "samples", c.samples);

    if (j.contains("modes")) {
        const auto& m = j.at("modes");
        if (!m.is_array() || m.empty())
            throw ConfigError("config: 'modes' must be a non-empty array");
        c.modes.clear();
        for (const auto& e : m) {
            if (!e.is_number_integer() || e.get<int>() < 2)
                throw ConfigError("config: 'modes' entries must be integers >= 2");
            c.modes.push_back(e.get<int>());
        }
    }
    if (j.contains("qs")) {
        const auto& q = j.at("qs");
        if (!q.is_object())
            throw ConfigError("config: 'qs' must be an object");
        detail::collect_unknown(q, {"nx", "nt", "t_max"}, "qs.", strict, c.ignored_keys);
        c.qs_nx = detail::positive_at<std::size_t>(q, "nx", c.qs_nx);
        c.qs_nt = detail::positive_at<std::size_t>(q, "nt", c.qs_nt);
        c.qs_t_max = detail::positive_at<double>(q, "t_max", c.qs_t_max);
        if (c.qs_t_max > pi)
            throw ConfigError("config: 'qs.t_max' must not exceed pi");
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        if (!g.is_object())
            throw ConfigError("config: 'grid' must be an object");
        detail::collect_unknown(g, {"radial", "angular"}, "grid.", strict, c.ignored_keys);
        c.grid_radial = detail::positive_at<std::size_t>(g, "radial", c.grid_radial);
        c.grid_angular = detail::positive_at<std::size_t>(g, "angular", c.grid_angular);
    }
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        if (!t.is_object())
            throw ConfigError("config: 'tolerances' must be an object");
        detail::collect_unknown(t,
                                {"reality", "symplectic", "symmetry", "contraction", "isotropy", "ratio_spread",
                                 "step_halving", "oracle_rel", "orthogonality", "rank_one", "metric_invariance",
                                 "qs_exact", "qs_bound"},
                                "tolerances.", strict, c.ignored_keys);
        auto& tol = c.tol;
        for (auto [key, field] : std::initializer_list<std::pair<const char*, double*>>{
                 {"reality", &tol.reality},
                 {"symplectic", &tol.symplectic},
                 {"symmetry", &tol.symmetry},
                 {"contraction", &tol.contraction},
                 {"isotropy", &tol.isotropy},
                 {"ratio_spread", &tol.ratio_spread},
                 {"step_halving", &tol.step_halving},
                 {"oracle_rel", &tol.oracle_rel},
                 {"orthogonality", &tol.orthogonality},
                 {"rank_one", &tol.rank_one},
                 {"metric_invariance", &tol.metric_invariance},
                 {"qs_exact", &tol.qs_exact},
                 {"qs_bound", &tol.qs_bound}})
            *field = detail::positive_at<double>(t, key, *field);
    }
    if (j.contains("out")) {
        if (!j.at("out").is_string())
            throw ConfigError("config: 'out' must be a string");
        c.out_dir = j.at("out").get<std::string>();
    }
    if (j.contains("map")) {
        const auto& m = j.at("map");
        if (m.is_string()) {
            const auto path = base_dir / m.get<std::string>();
            try {
                c.map = nlohmann::json::parse(read_file(path));
            } catch (const nlohmann::json::parse_error& e) {
                throw ConfigError("config: map spec " + path.string() + " is not valid JSON: " + e.what());
            }
        } else if (m.is_object()) {
            c.map = m;
        } else {
            throw ConfigError("config: 'map' must be a path or an inline object");
        }
    }

    if (c.M < 4 * static_cast<std::size_t>(c.N))
        throw ConfigError("config: M = " + std::to_string(c.M) + " violates M >= 4N (N = " + std::to_string(c.N) + ")");
    return c;
}

inline nlohmann::json ExperimentConfig::to_json() const
{
    nlohmann::json j;
    j["N"] = N;
    j["M"] = M;
    j["eps"] = eps;
    j["padding"] = padding;
    j["threads"] = threads;
    j["modes"] = modes;
    j["qs"] = {{"nx", qs_nx}, {"nt", qs_nt}, {"t_max", qs_t_max}};
    j["grid"] = {{"radial", grid_radial}, {"angular", grid_angular}};
    j["max_degree"] = max_degree;
    j["samples"] = samples;
    j["tolerances"] = {{"reality", tol.reality},
                       {"symplectic", tol.symplectic},
                       {"symmetry", tol.symmetry},
                       {"contraction", tol.contraction},
                       {"isotropy", tol.isotropy},
                       {"ratio_spread", tol.ratio_spread},
                       {"step_halving", tol.step_halving},
                       {"oracle_rel", tol.oracle_rel},
                       {"orthogonality", tol.orthogonality},
                       {"rank_one", tol.rank_one},
                       {"metric_invariance", tol.metric_invariance},
                       {"qs_exact", tol.qs_exact},
                       {"qs_bound", tol.qs_bound}};
    j["out"] = out_dir;
    if (map)
        j["map"] = *map;
    return j;
}

} // namespace teich

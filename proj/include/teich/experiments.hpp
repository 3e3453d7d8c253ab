#pragma once
//
// Batch experiments behind the CLI. Each command writes its CSV/SVG
// artifacts plus report.json into the output directory and returns the
// report; a command passes iff every check passes.
//

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "teich/beltrami.hpp"
#include "teich/config.hpp"
#include "teich/map_spec.hpp"
#include "teich/random.hpp"
#include "teich/siegel.hpp"
#include "teich/svg.hpp"
#include "teich/symplectic.hpp"
#include "teich/wp_metric.hpp"

namespace teich {

struct Check {
    std::string name;
    double value = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct Report {
    std::string command;
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::vector<Check> checks;
    std::vector<std::string> artifacts;
    nlohmann::json results = nlohmann::json::object();

    bool passed() const
    {
        for (const auto& c : checks)
            if (!c.pass)
                return false;
        return true;
    }

    /// value <= tol
    void at_most(std::string name, double value, double tol)
    {
        checks.push_back({std::move(name), value, tol, value <= tol});
    }

    /// value > tol
    void above(std::string name, double value, double tol)
    {
        checks.push_back({std::move(name), value, tol, value > tol});
    }

    nlohmann::json to_json() const
    {
        nlohmann::json j;
        j["command"] = command;
        j["config"] = config;
        j["seed"] = seed;
        j["checks"] = nlohmann::json::array();
        for (const auto& c : checks)
            j["checks"].push_back({{"name", c.name}, {"value", c.value}, {"tol", c.tol}, {"pass", c.pass}});
        j["artifacts"] = artifacts;
        j["results"] = results;
        return j;
    }
};

namespace detail {

class ArtifactWriter {
public:
    ArtifactWriter(std::filesystem::path dir, Report& report) : dir_(std::move(dir)), report_(report) {}

    void write(const std::string& name, const std::string& content)
    {
        const auto path = dir_ / name;
        atomic_write(path, content);
        report_.artifacts.push_back(path.string());
    }

private:
    std::filesystem::path dir_;
    Report& report_;
};

inline CircleMap config_map(const ExperimentConfig& cfg)
{
    return cfg.map ? parse_map_spec(*cfg.map) : CircleMap::identity();
}

} // namespace detail

inline Report run_period_map(const ExperimentConfig& cfg, Report report)
{
    detail::ArtifactWriter out(cfg.out_dir, report);
    const auto map = detail::config_map(cfg);
    const auto A = composition_matrix(map, cfg.N, cfg.M, cfg.threads);
    const auto blocks = block_decompose(A);
    out.write("matrix.csv", matrix_to_csv(A.matrix()));
    out.write("g.csv", matrix_to_csv(blocks.g));
    out.write("h.csv", matrix_to_csv(blocks.h));

    const auto pp = period_map(map, cfg.N, cfg.M, cfg.padding, cfg.threads);
    out.write("Z.csv", pp.point.to_csv());

    report.at_most("reality_defect", blocks.reality_defect, cfg.tol.reality);
    if (cfg.N >= 4)
        report.at_most("symplectic_defect_core", symplectic_defect(A, cfg.N / 4), cfg.tol.symplectic);
    report.at_most("period_point_symmetry", pp.diagnostics.relative_symmetric_defect(), cfg.tol.symmetry);
    report.above("period_point_min_eig", pp.diagnostics.min_eig, cfg.tol.contraction);
    const double hs = hs_offdiag(A);
    if (map.get_if<MoebiusMap>()) {
        report.at_most("isotropy_hs_offdiag", hs, cfg.tol.isotropy);
        report.at_most("isotropy_period_point", pp.diagnostics.hs_norm, cfg.tol.isotropy);
    }
    report.results = {{"hs_offdiag", hs},
                      {"reality_defect", blocks.reality_defect},
                      {"Z_hs_norm", pp.diagnostics.hs_norm},
                      {"Z_symmetric_defect", pp.diagnostics.symmetric_defect},
                      {"Z_min_eig", pp.diagnostics.min_eig}};
    return report;
}

inline Report run_wp_pullback(const ExperimentConfig& cfg, Report report)
{
    detail::ArtifactWriter out(cfg.out_dir, report);
    const auto exp = run_pullback_experiment(cfg.modes, cfg.N, cfg.M, cfg.eps, cfg.padding, cfg.threads > 1);

    auto table = [](const std::vector<PullbackRow>& rows) {
        std::string csv = "n,h_wp,trace,ratio\n";
        for (const auto& r : rows)
            csv += std::to_string(r.mode) + ',' + format_number(r.h_wp) + ',' + format_number(r.trace) + ',' +
                   format_number(r.ratio) + '\n';
        return csv;
    };
    out.write("pullback.csv", table(exp.rows));
    out.write("pullback_half_eps.csv", table(exp.rows_half));

    SvgSeries series;
    for (const auto& r : exp.rows) {
        series.x.push_back(r.mode);
        series.y.push_back(r.ratio);
    }
    out.write("pullback.svg", svg_line_plot(series, "Tr(conj(U) U) / h_WP(u,u), u = cos nx", "n", "ratio"));

    report.at_most("ratio_pairwise_deviation", exp.max_pairwise_deviation(), cfg.tol.ratio_spread);
    report.at_most("constant_step_halving_shift", exp.step_halving_shift(), cfg.tol.step_halving);
    report.results = {{"constant", exp.constant},
                      {"constant_half_eps", exp.constant_half},
                      {"richardson_constant", exp.richardson_constant}};
    return report;
}

inline Report run_qs_estimate(const ExperimentConfig& cfg, Report report)
{
    detail::ArtifactWriter out(cfg.out_dir, report);
    const auto map = detail::config_map(cfg);
    const auto grid = QsGrid::uniform(cfg.qs_nx, cfg.qs_nt, cfg.qs_t_max);

    std::string csv = "t,max_ratio\n";
    for (double t : grid.ts) {
        QsGrid row{grid.xs, {t}};
        csv += format_number(t) + ',' + format_number(qs_ratio(map, row)) + '\n';
    }
    out.write("qs.csv", csv);

    const double m_hat = qs_ratio(map, grid);
    report.at_most("qs_ratio_bounded", m_hat, cfg.tol.qs_bound);
    if (const auto* m = map.get_if<MoebiusMap>(); m && m->b == cplx{})
        report.at_most("rotation_qs_is_one", std::abs(m_hat - 1.0), cfg.tol.qs_exact);
    report.results = {{"M_hat", m_hat}};
    return report;
}

/// 8 pi / ((k+1)(k+2)(k+3)): squared hyperbolic norm of the harmonic differential of z^k.
inline double monomial_norm_closed_form(int k)
{
    return 8.0 * pi / ((k + 1.0) * (k + 2.0) * (k + 3.0));
}

inline Report run_beltrami_norms(const ExperimentConfig& cfg, Report report)
{
    detail::ArtifactWriter out(cfg.out_dir, report);
    const PolarGrid grid(cfg.grid_radial, cfg.grid_angular);
    std::vector<BeltramiField> fields;
    std::string csv = "k,quadrature,closed_form,rel_err\n";
    double worst = 0.0;
    for (int k = 0; k <= cfg.max_degree; ++k) {
        fields.push_back(harmonic_beltrami(HolomorphicCoeffs::monomial(k), grid));
        const double q = hyperbolic_l2(fields.back()).value;
        const double exact = monomial_norm_closed_form(k);
        const double rel = std::abs(q - exact) / exact;
        worst = std::max(worst, rel);
        csv += std::to_string(k) + ',' + format_number(q) + ',' + format_number(exact) + ',' + format_number(rel) + '\n';
    }
    double ortho = 0.0;
    for (std::size_t a = 0; a < fields.size(); ++a)
        for (std::size_t b = 0; b < fields.size(); ++b)
            if (a != b)
                ortho = std::max(ortho, std::abs(wp_pairing(fields[a], fields[b])));
    out.write("beltrami_norms.csv", csv);
    report.at_most("norm_rel_err", worst, cfg.tol.oracle_rel);
    report.at_most("monomial_orthogonality", ortho, cfg.tol.orthogonality);
    return report;
}

inline Report run_siegel_demo(const ExperimentConfig& cfg, Report report)
{
    detail::ArtifactWriter out(cfg.out_dir, report);
    Rng rng(report.seed);
    double action_err = 0.0, metric_err = 0.0, origin_err = 0.0;
    std::string csv = "a_re,a_im,b_re,b_im,z_re,z_im,disc_re,disc_im,siegel_re,siegel_im\n";
    for (std::size_t s = 0; s < cfg.samples; ++s) {
        const auto [a, b] = random_su11(rng, 2.0);
        const cplx z = random_disc_point(rng);
        const cplx u = gaussian_complex(rng), v = gaussian_complex(rng);

        const cplx disc = su11_orbit(a, b, z);
        const auto A = SymplecticBlockMatrix::from_blocks(CMatrix::Constant(1, 1, a), CMatrix::Constant(1, 1, b));
        const cplx siegel = moebius_action(A, SiegelPoint(CMatrix::Constant(1, 1, z))).matrix()(0, 0);
        action_err = std::max(action_err, std::abs(disc - siegel));

        const cplx d = 1.0 / ((std::conj(b) * z + std::conj(a)) * (std::conj(b) * z + std::conj(a)));
        const cplx lhs = hyperbolic_metric(disc, d * u, d * v);
        const cplx rhs = hyperbolic_metric(z, u, v);
        metric_err = std::max(metric_err, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));

        const cplx at0 = metric_at_zero(CMatrix::Constant(1, 1, u), CMatrix::Constant(1, 1, v));
        origin_err = std::max(origin_err, std::abs(at0 - hyperbolic_metric(0.0, u, v)));

        for (double x : {a.real(), a.imag(), b.real(), b.imag(), z.real(), z.imag(), disc.real(), disc.imag(),
                         siegel.real(), siegel.imag()})
            csv += format_number(x) + ',';
        csv.back() = '\n';
    }
    out.write("siegel_demo.csv", csv);
    report.at_most("rank_one_action", action_err, cfg.tol.rank_one);
    report.at_most("hyperbolic_metric_invariance", metric_err, cfg.tol.metric_invariance);
    report.at_most("metric_at_zero_matches_disc", origin_err, cfg.tol.rank_one);
    return report;
}

inline const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"period-map", "wp-pullback", "qs-estimate", "beltrami-norms",
                                                "siegel-demo"};
    return names;
}

/// Runs `command`, writes report.json next to the artifacts, and returns the report.
inline Report run_command(const std::string& command, const ExperimentConfig& cfg, std::uint64_t seed)
{
    Report report;
    report.command = command;
    report.config = cfg.to_json();
    report.seed = seed;

    if (command == "period-map")
        report = run_period_map(cfg, std::move(report));
    else if (command == "wp-pullback")
        report = run_wp_pullback(cfg, std::move(report));
    else if (command == "qs-estimate")
        report = run_qs_estimate(cfg, std::move(report));
    else if (command == "beltrami-norms")
        report = run_beltrami_norms(cfg, std::move(report));
    else if (command == "siegel-demo")
        report = run_siegel_demo(cfg, std::move(report));
    else
        throw ConfigError("unknown command '" + command + "'");

    const auto path = std::filesystem::path(cfg.out_dir) / "report.json";
    report.artifacts.push_back(path.string());
    atomic_write(path, report.to_json().dump(2) + "\n");
    return report;
}

} // namespace teich

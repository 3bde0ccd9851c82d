#pragma once

#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bergamot/bounds.hpp"
#include "bergamot/config.hpp"
#include "bergamot/errors.hpp"
#include "bergamot/oracle.hpp"
#include "bergamot/quadrature.hpp"
#include "bergamot/report.hpp"
#include "bergamot/scan.hpp"
#include "bergamot/version.hpp"

namespace bergamot {

enum class Command {
    KernelScan,
    MetricScan,
    SzegoScan,
    ProfileCheck,
    IntegralCheck,
    OracleValidate,
    ExtendedScan
};

inline const char* command_name(Command c) {
    switch (c) {
    case Command::KernelScan: return "kernel-scan";
    case Command::MetricScan: return "metric-scan";
    case Command::SzegoScan: return "szego-scan";
    case Command::ProfileCheck: return "profile-check";
    case Command::IntegralCheck: return "integral-check";
    case Command::OracleValidate: return "oracle-validate";
    case Command::ExtendedScan: return "extended-scan";
    }
    return "unknown";
}

/// Computed report: contents plus target paths. `all_pass` mirrors the
/// conjunction of the summary verdicts and drives the CLI exit code.
struct ReportBundle {
    std::string csv_path;
    std::string summary_path;
    std::string log_path;
    std::string csv_content;
    std::string summary_content;
    std::string log_content;
    bool all_pass = false;
};

namespace detail {

inline nlohmann::json slope_entry(const ScanTable& table, const std::string& column) {
    try {
        const SlopeFit fit = slope_fit(table, column);
        return {{"slope", fit.slope}, {"residual", fit.residual}};
    } catch (const Error&) {
        return nullptr;
    }
}

inline nlohmann::json band_entry(const ScanTable& table, const std::string& column) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& row : table.rows) {
        if (row.status != "ok") continue;
        const double v = report_column(row, column);
        if (!std::isfinite(v) || !(v > 0.0)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > 0.0) || !std::isfinite(lo)) return nullptr;
    return {{"min", lo}, {"max", hi}, {"band", hi / lo}};
}

inline double sandwich_band(const ScanTable& table) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& row : table.rows) {
        if (row.status != "ok") continue;
        if (!std::isfinite(row.kappa_lower) || !std::isfinite(row.kappa_upper)) continue;
        const double r = row.kappa_upper / row.kappa_lower;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return (hi > 0.0 && std::isfinite(lo)) ? hi / lo : std::numeric_limits<double>::quiet_NaN();
}

inline bool all_rows_ok(const ScanTable& table) {
    for (const auto& row : table.rows)
        if (row.status != "ok") return false;
    return true;
}

inline bool sandwich_holds(const ScanTable& table, bool metric) {
    for (const auto& row : table.rows) {
        if (row.status != "ok") continue;
        const double lo = metric ? row.metric_lower : row.kappa_lower;
        const double hi = metric ? row.metric_upper : row.kappa_upper;
        if (!std::isfinite(lo) || !std::isfinite(hi)) continue;
        if (lo > hi * (1.0 + 1e-12)) return false;
    }
    return true;
}

inline bool all_finite_type(const DomainDescriptor& domain) {
    for (const auto& b : domain.blocks)
        if (classify(b.profile).kind != TypeReport::Kind::FiniteType) return false;
    return true;
}

} // namespace detail

/// Assembles CSV, summary JSON, and log content for one command without
/// touching the filesystem.
inline ReportBundle build_report(const RunConfig& cfg, Command cmd) {
    const std::string hash = config_hash(cfg.resolved);
    nlohmann::json summary;
    summary["command"] = command_name(cmd);
    summary["config_hash"] = hash;
    summary["version"] = kVersion;
    summary["seeds"] = {{"scan", cfg.seed}, {"oracle", cfg.oracle.seed}};
    summary["resolved_config"] = cfg.resolved;
    nlohmann::json verdicts = nlohmann::json::object();
    nlohmann::json slopes = nlohmann::json::object();
    nlohmann::json bands = nlohmann::json::object();
    std::string log = std::string("command=") + command_name(cmd) + "\nconfig_hash=" + hash + "\n";

    ScanTable table;
    table.meta.config_hash = hash;
    table.meta.seed = cfg.seed;
    table.meta.quad_tol = cfg.quad_tol;
    bool have_table = false;

    const bool scan_like = cmd == Command::KernelScan || cmd == Command::MetricScan ||
                           cmd == Command::SzegoScan || cmd == Command::ExtendedScan;
    if (scan_like && cmd != Command::ExtendedScan) {
        if (cfg.extended)
            throw ValidationError("this command needs a non-extended domain config");
        ScanOptions options;
        options.quad_tol = cfg.quad_tol;
        options.convex = cfg.convex;
        options.surface.t0 = cfg.t0;
        options.surface.a_max = cfg.a_max;
        if (cmd == Command::SzegoScan && !cfg.convex)
            throw UnsupportedDomainError("upper envelope requires convex flag");
        if (cmd == Command::MetricScan) {
            if (cfg.xi.type == XiSpec::Type::Tangential)
                options.xi = Direction::tangential(cfg.domain, cfg.xi.block);
            else
                options.xi = Direction::normal_dir(cfg.domain);
        }
        const ApproachSpec approach = cfg.approach();
        ScanTable scanned = ratio_scan(cfg.domain, approach, cfg.t_grid(), options);
        scanned.meta = table.meta;
        scanned.meta.alpha = approach.alpha;
        scanned.meta.beta = approach.beta;
        scanned.meta.t0 = approach.t0;
        table = std::move(scanned);
        have_table = true;

        verdicts["rows_ok"] = detail::all_rows_ok(table);
        verdicts["row_count"] = static_cast<int>(table.rows.size()) == cfg.grid.points;
        if (cmd == Command::KernelScan || cmd == Command::MetricScan || cmd == Command::SzegoScan) {
            slopes["kappa_lower"] = detail::slope_entry(table, "kappa_lower");
            slopes["kappa_upper"] = detail::slope_entry(table, "kappa_upper");
            slopes["env_kappa"] = detail::slope_entry(table, "env_kappa");
            bands["ratio_kl"] = detail::band_entry(table, "ratio_kl");
            bands["ratio_ku"] = detail::band_entry(table, "ratio_ku");
            bands["sandwich"] = detail::sandwich_band(table);
            verdicts["sandwich_kappa"] = detail::sandwich_holds(table, false);
            if (detail::all_finite_type(cfg.domain)) {
                const double band = detail::sandwich_band(table);
                verdicts["sandwich_band_le_100"] = std::isfinite(band) && band <= 100.0;
            }
        }
        if (cmd == Command::MetricScan) {
            slopes["metric_lower"] = detail::slope_entry(table, "metric_lower");
            slopes["metric_upper"] = detail::slope_entry(table, "metric_upper");
            slopes["env_metric"] = detail::slope_entry(table, "env_metric");
            verdicts["sandwich_metric"] = detail::sandwich_holds(table, true);
        }
        if (cmd == Command::SzegoScan) {
            slopes["szego_lower"] = detail::slope_entry(table, "szego_lower");
            slopes["szego_upper_env"] = detail::slope_entry(table, "szego_upper_env");
            slopes["env_szego"] = detail::slope_entry(table, "env_szego");
        }
    } else if (cmd == Command::ExtendedScan) {
        if (!cfg.extended)
            throw ValidationError("extended-scan requires an extended domain config");
        ScanOptions options;
        options.quad_tol = cfg.quad_tol;
        options.surface.t0 = cfg.t0;
        options.surface.a_max = cfg.a_max;
        ScanTable scanned = extended_ratio_scan(cfg.ext_domain, cfg.t_grid(), cfg.t0, options);
        scanned.meta = table.meta;
        scanned.meta.t0 = cfg.t0;
        table = std::move(scanned);
        have_table = true;

        verdicts["rows_ok"] = detail::all_rows_ok(table);
        verdicts["row_count"] = static_cast<int>(table.rows.size()) == cfg.grid.points;
        slopes["kappa_lower"] = detail::slope_entry(table, "kappa_lower");
        slopes["env_kappa"] = detail::slope_entry(table, "env_kappa");
        slopes["szego_lower"] = detail::slope_entry(table, "szego_lower");
        slopes["env_szego"] = detail::slope_entry(table, "env_szego");
        const auto kl = slopes["kappa_lower"];
        const auto env = slopes["env_kappa"];
        if (!kl.is_null() && !env.is_null()) {
            const double diff =
                std::abs(kl["slope"].get<double>() - env["slope"].get<double>());
            summary["extended_slope_gap"] = diff;
            verdicts["kappa_slope_matches_envelope"] = diff <= 0.05;
        } else {
            verdicts["kappa_slope_matches_envelope"] = false;
        }
    } else if (cmd == Command::ProfileCheck) {
        nlohmann::json profiles = nlohmann::json::array();
        bool all_classified = true;
        bool lemma_ok = true;
        std::vector<const ProfileFunction*> profs;
        if (cfg.extended)
            for (const auto& b : cfg.ext_domain.blocks) profs.push_back(&b.profile);
        else
            for (const auto& b : cfg.domain.blocks) profs.push_back(&b.profile);
        for (const auto* p : profs) {
            nlohmann::json entry;
            const TypeReport rep = classify(*p);
            switch (rep.kind) {
            case TypeReport::Kind::FiniteType:
                entry["kind"] = "finite";
                entry["m_est"] = rep.m_est;
                entry["c_est"] = rep.c_est;
                break;
            case TypeReport::Kind::MildlyInfinite: {
                entry["kind"] = "mildly_infinite";
                entry["sigma"] = rep.doubling->sigma;
                entry["doubling_R"] = rep.doubling->range_end;
                entry["max_violation"] = rep.doubling->max_violation;
                const double T = p->lambda(rep.doubling->range_end / rep.doubling->sigma);
                nlohmann::json lemma = nlohmann::json::array();
                for (double m : {1.0, 2.0, 4.0}) {
                    const double c = lemma31_ratio(*p, m, T, 256);
                    const double limit = std::pow(rep.doubling->sigma, m) - 1.0 + 1e-9;
                    lemma.push_back({{"m", m}, {"C", c}, {"limit", limit}, {"pass", c <= limit}});
                    if (c > limit) lemma_ok = false;
                }
                entry["lemma31"] = lemma;
                break;
            }
            case TypeReport::Kind::Unknown:
                entry["kind"] = "unknown";
                all_classified = false;
                break;
            }
            profiles.push_back(entry);
        }
        summary["profiles"] = profiles;
        verdicts["all_classified"] = all_classified;
        verdicts["lemma31_ok"] = lemma_ok;
    } else if (cmd == Command::IntegralCheck) {
        nlohmann::json checks = nlohmann::json::array();
        bool finite = true;
        std::vector<std::pair<const ProfileFunction*, int>> profs;
        if (cfg.extended)
            for (const auto& b : cfg.ext_domain.blocks) profs.push_back({&b.profile, b.dim});
        else
            for (const auto& b : cfg.domain.blocks) profs.push_back({&b.profile, 2 * b.dim});
        for (const auto& [p, kexp] : profs) {
            for (int k : {1, kexp}) {
                const double t_top = std::min(0.1, 0.99 * p->eval(p->domain_cap()));
                double worst = 0.0, best = std::numeric_limits<double>::infinity();
                const auto grid = geometric_grid(1e-12, t_top, 40);
                for (double t : grid) {
                    const double r = prop32_ratio(*p, k, t);
                    worst = std::max(worst, r);
                    best = std::min(best, r);
                }
                if (!std::isfinite(worst)) finite = false;
                checks.push_back({{"k", k}, {"max_ratio", worst}, {"min_ratio", best}});
                if (k == kexp) break; // avoid duplicating k = 1 blocks
            }
        }
        summary["prop32"] = checks;
        verdicts["ratios_finite"] = finite;
    } else if (cmd == Command::OracleValidate) {
        const auto& oc = cfg.oracle;
        const Dictionary dict1 = Dictionary::total_degree(1, oc.dmax);
        const Dictionary dict2 = Dictionary::total_degree(2, oc.dmax);
        nlohmann::json oracle = nlohmann::json::object();

        auto agree = [&](const ReferenceDomain& ref, const std::vector<std::complex<double>>& z,
                         const Dictionary& dict, const char* label) {
            const GramEstimate est = gram_kappa(ref, z, dict, oc.mc_samples, oc.seed, oc.svd_cutoff);
            const double exact = exact_kappa_reference(ref, z);
            const double rel = std::abs(est.value - exact) / exact;
            oracle[label] = {{"gram", est.value},
                            {"exact", exact},
                            {"rel_error", rel},
                            {"std_error", est.std_error}};
            verdicts[std::string(label) + "_within_1pct"] = rel <= 0.01;
        };
        agree(ReferenceDomain::disc(1.0), {{0.0, 0.0}}, dict1, "disc_center");
        agree(ReferenceDomain::disc(1.0), {{0.5, 0.0}}, dict1, "disc_half");
        agree(ReferenceDomain::polydisc({1.0, 1.0}), {{0.0, 0.0}, {0.0, 0.0}}, dict2,
              "bidisc_center");
        agree(ReferenceDomain::ball(2, 1.0), {{0.0, 0.0}, {0.0, 0.0}}, dict2, "ball_center");

        bool monotone = true;
        double prev = -1.0;
        nlohmann::json refine = nlohmann::json::array();
        for (int d = 0; d <= oc.dmax; ++d) {
            const GramEstimate est = gram_kappa(ReferenceDomain::disc(1.0), {{0.5, 0.0}},
                                                Dictionary::total_degree(1, d), oc.mc_samples,
                                                oc.seed, oc.svd_cutoff);
            refine.push_back(est.value);
            if (est.value < prev * (1.0 - 1e-12)) monotone = false;
            prev = est.value;
        }
        oracle["disc_half_refinement"] = refine;
        verdicts["subspace_monotone"] = monotone;

        const double d1 = transformation_check(ReferenceDomain::disc(1.0), {2.0}, {{0.0, 0.0}});
        const double d2 = transformation_check(ReferenceDomain::polydisc({1.0, 1.0}), {2.0, 3.0},
                                               {{0.0, 0.0}, {0.0, 0.0}});
        oracle["transform_disc"] = d1;
        oracle["transform_polydisc"] = d2;
        verdicts["transform_exact_zero"] = d1 <= 1e-12 && d2 <= 1e-12;

        const TransformationSampleCheck tc = transformation_check_gram(
            ReferenceDomain::polydisc({1.0, 1.0}), {2.0, 3.0}, {{0.3, 0.0}, {0.1, 0.0}}, dict2,
            oc.mc_samples, oc.seed, oc.svd_cutoff);
        oracle["transform_gram"] = {{"discrepancy", tc.discrepancy},
                                    {"rel_std_error", tc.rel_std_error}};
        verdicts["transform_gram_within_3se"] = tc.discrepancy <= 3.0 * tc.rel_std_error;
        summary["oracle"] = oracle;
    }

    if (!have_table) {
        // non-scan commands still emit a well-formed, empty table
        table.rows.clear();
    }

    summary["slopes"] = slopes;
    summary["bands"] = bands;
    summary["verdicts"] = verdicts;
    bool all_pass = true;
    for (const auto& [key, val] : verdicts.items()) {
        const bool pass = val.get<bool>();
        log += "verdict " + key + "=" + (pass ? "pass" : "fail") + "\n";
        all_pass = all_pass && pass;
    }
    log += std::string("rows=") + std::to_string(table.rows.size()) + "\n";
    log += std::string("result=") + (all_pass ? "pass" : "fail") + "\n";

    const std::filesystem::path out_dir(cfg.out_dir);
    const std::string base = command_name(cmd);
    ReportBundle bundle;
    bundle.csv_path = (out_dir / (base + ".csv")).string();
    bundle.summary_path = (out_dir / (base + "_summary.json")).string();
    bundle.log_path = (out_dir / (base + ".log")).string();
    bundle.csv_content = csv_from_table(table);
    bundle.summary_content = summary.dump(2) + "\n";
    bundle.log_content = log;
    bundle.all_pass = all_pass;
    return bundle;
}

/// Writes the three report files atomically.
inline void emit_report(const ReportBundle& bundle) {
    const std::filesystem::path dir = std::filesystem::path(bundle.csv_path).parent_path();
    if (!dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoError("cannot create output directory: " + dir.string());
    }
    write_text_atomic(bundle.csv_path, bundle.csv_content);
    write_text_atomic(bundle.summary_path, bundle.summary_content);
    write_text_atomic(bundle.log_path, bundle.log_content);
}

inline ReportBundle run_scan(const RunConfig& cfg, Command cmd) {
    ReportBundle bundle = build_report(cfg, cmd);
    emit_report(bundle);
    return bundle;
}

} // namespace bergamot

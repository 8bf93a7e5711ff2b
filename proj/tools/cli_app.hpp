#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dkc/coherent.hpp"
#include "dkc/errors.hpp"
#include "dkc/laguerre_function.hpp"
#include "dkc/quantum_setup.hpp"
#include "dkc/radial_states.hpp"
#include "dkc/report.hpp"
#include "dkc/spectrum.hpp"
#include "dkc/verify.hpp"
#include "output.hpp"

namespace dkc::cli {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr long long kMaxSweepRows = 100000;

enum ExitCode { kSuccess = 0, kVerificationFailed = 1, kUsageError = 2 };

/// Raised for malformed arguments that CLI11 itself accepts.
class UsageError : public Error {
public:
    using Error::Error;
};

struct NRange {
    int lo = 1;
    int hi = 1;
};

inline NRange parse_n_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        std::size_t used = 0;
        if (dots == std::string::npos) {
            const int n = std::stoi(text, &used);
            if (used != text.size()) throw UsageError("");
            return {n, n};
        }
        const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
        const int lo = std::stoi(a, &used);
        if (used != a.size()) throw UsageError("");
        const int hi = std::stoi(b, &used);
        if (used != b.size()) throw UsageError("");
        if (hi < lo) throw UsageError("");
        return {lo, hi};
    } catch (const std::exception&) {
        throw UsageError("--n expects an integer or a range a..b with a <= b, got '" + text + "'");
    }
}

struct SweepRange {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;

    std::vector<double> values() const {
        std::vector<double> out(count);
        for (int i = 0; i < count; ++i) out[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
        return out;
    }
};

/// LO:HI:COUNT
inline SweepRange parse_sweep_range(const std::string& text, const std::string& flag) {
    SweepRange r;
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    try {
        if (c2 == std::string::npos) throw UsageError("");
        std::size_t used = 0;
        const std::string a = text.substr(0, c1), b = text.substr(c1 + 1, c2 - c1 - 1), n = text.substr(c2 + 1);
        r.lo = std::stod(a, &used);
        if (used != a.size()) throw UsageError("");
        r.hi = std::stod(b, &used);
        if (used != b.size()) throw UsageError("");
        const long long count = std::stoll(n, &used);
        if (used != n.size() || count < 1 || count > kMaxSweepRows) throw UsageError("");
        r.count = static_cast<int>(count);
    } catch (const std::exception&) {
        throw UsageError(flag + " expects LO:HI:COUNT with COUNT in [1, " + std::to_string(kMaxSweepRows) + "], got '" +
                         text + "'");
    }
    return r;
}

/// Everything a subcommand needs, after merging the config file and the command line.
struct RunConfig {
    std::string command;
    int dimension = 3;
    double j = 0.5;
    Alignment alignment = Alignment::aligned;
    double alpha_v = 0.5;
    double alpha_s = 0.0;
    double mass = 1.0;
    std::string n_text;
    double xi_re = 0.0;
    double xi_im = 0.0;
    std::optional<double> r_min;
    std::optional<double> r_max;
    int r_points = 200;
    std::string r_spacing = "log";
    std::string format = "json";
    std::string out;
    std::vector<std::string> tolerance_overrides;
    std::string alpha_v_range;
    std::string alpha_s_range;
    bool perturb = false;

    ProblemParams params() const {
        ProblemParams p;
        p.dimension = dimension;
        p.j = HalfInteger::from_value(j);
        p.alignment = alignment;
        p.alpha_v = alpha_v;
        p.alpha_s = alpha_s;
        p.mass = mass;
        p.validate();
        return p;
    }

    NRange n_range() const {
        const bool ranged = command == "spectrum" || command == "sweep";
        return parse_n_range(n_text.empty() ? (ranged ? "1..5" : "1") : n_text);
    }

    std::map<std::string, double> tolerances() const {
        auto tol = default_tolerances();
        for (const auto& item : tolerance_overrides) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw UsageError("--tolerance expects KEY=VAL, got '" + item + "'");
            const std::string key = item.substr(0, eq);
            if (!tol.contains(key)) throw UsageError("unknown tolerance key '" + key + "'");
            try {
                std::size_t used = 0;
                const double v = std::stod(item.substr(eq + 1), &used);
                if (used != item.size() - eq - 1 || !(v > 0.0)) throw UsageError("");
                tol[key] = v;
            } catch (const std::exception&) {
                throw UsageError("tolerance value for '" + key + "' must be a positive number");
            }
        }
        return tol;
    }

    /// Grid on [r_min, r_max], defaulting to [10⁻²/a, 40/a].
    std::vector<double> grid(double a) const {
        if (r_points < 2) throw UsageError("--r-points must be >= 2");
        const double lo = r_min.value_or(1e-2 / a);
        const double hi = r_max.value_or(40.0 / a);
        if (!(lo > 0.0)) throw UsageError("--r-min must be > 0");
        if (!(hi > lo)) throw UsageError("--r-max must exceed --r-min");
        return r_spacing == "linear" ? linear_grid(lo, hi, r_points) : log_grid(lo, hi, r_points);
    }
};

namespace detail {

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"spectrum", "wavefunction", "coherent", "verify", "sweep"};
    return names;
}

inline std::string scalar_token(const nlohmann::json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_real(v.get<double>());
    throw UsageError("config key '" + key + "' must be a string or a number");
}

/// Whether a config key names an option of `command`; keys for other subcommands are ignored.
inline bool key_applies(const std::string& key, const std::string& command) {
    if (key == "xi_re" || key == "xi_im") return command == "coherent";
    if (key.rfind("r_", 0) == 0) return command == "wavefunction" || command == "coherent";
    if (key == "alpha_v_range" || key == "alpha_s_range") return command == "sweep";
    return true;
}

/// Turns a config document into command-line tokens placed before the user's own flags.
inline std::vector<std::string> config_tokens(const nlohmann::json& doc, const std::string& command) {
    if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
    static const std::map<std::string, std::string> flags{
        {"dimension", "--dimension"}, {"j", "--j"},           {"alpha_v", "--alpha-v"},
        {"alpha_s", "--alpha-s"},     {"mass", "--mass"},     {"n", "--n"},
        {"xi_re", "--xi-re"},         {"xi_im", "--xi-im"},   {"r_min", "--r-min"},
        {"r_max", "--r-max"},         {"r_points", "--r-points"}, {"r_spacing", "--r-spacing"},
        {"format", "--format"},       {"out", "--out"},       {"alpha_v_range", "--alpha-v-range"},
        {"alpha_s_range", "--alpha-s-range"}};
    std::vector<std::string> tokens;
    for (const auto& [key, value] : doc.items()) {
        if (key == "command") continue;
        if (key == "alignment") {
            const std::string a = value.is_string() ? value.get<std::string>() : "";
            if (a != "aligned" && a != "unaligned") throw UsageError("config alignment must be aligned|unaligned");
            tokens.push_back("--" + a);
        } else if (key == "tolerance") {
            if (!value.is_object()) throw UsageError("config tolerance must be an object of KEY: VAL");
            for (const auto& [tk, tv] : value.items()) {
                tokens.push_back("--tolerance");
                tokens.push_back(tk + "=" + scalar_token(tv, "tolerance." + tk));
            }
        } else if (auto it = flags.find(key); it != flags.end()) {
            if (!key_applies(key, command)) continue;
            tokens.push_back(it->second);
            tokens.push_back(scalar_token(value, key));
        } else {
            throw UsageError("unknown config key '" + key + "'");
        }
    }
    return tokens;
}

/// Removes --config PATH from args and splices the file's tokens right after the subcommand.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config requires a path");
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (!path) return args;
    std::ifstream in(*path);
    if (!in) throw UsageError("cannot read config file '" + *path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config file '" + *path + "' is not valid JSON: " + e.what());
    }
    const auto& names = command_names();
    auto cmd = std::find_if(args.begin(), args.end(),
                            [&](const std::string& a) { return std::find(names.begin(), names.end(), a) != names.end(); });
    if (cmd == args.end()) {
        if (!doc.is_object() || !doc.contains("command") || !doc["command"].is_string())
            throw UsageError("no subcommand given on the command line or in the config file");
        const std::string command = doc["command"].get<std::string>();
        auto tokens = config_tokens(doc, command);
        tokens.insert(tokens.begin(), command);
        args.insert(args.begin(), tokens.begin(), tokens.end());
    } else {
        const auto tokens = config_tokens(doc, *cmd);
        args.insert(cmd + 1, tokens.begin(), tokens.end());
    }
    return args;
}

inline ordered_json params_json(const ProblemParams& p, const DerivedConstants& c) {
    ordered_json j = ordered_json::object();
    j["dimension"] = p.dimension;
    j["j"] = p.j.value();
    j["alignment"] = to_string(p.alignment);
    j["alpha_v"] = p.alpha_v;
    j["alpha_s"] = p.alpha_s;
    j["mass"] = p.mass;
    j["kappa"] = c.kappa;
    j["s"] = c.s;
    return j;
}

inline ordered_json base_meta(const RunConfig& cfg) {
    ordered_json meta = ordered_json::object();
    meta["program"] = "dkc";
    meta["version"] = kVersion;
    meta["command"] = cfg.command;
    return meta;
}

inline ordered_json grid_json(const std::vector<double>& grid, const RunConfig& cfg) {
    ordered_json g = ordered_json::object();
    g["r_min"] = grid.front();
    g["r_max"] = grid.back();
    g["points"] = grid.size();
    g["spacing"] = cfg.r_spacing;
    return g;
}

inline std::string pass_string(bool b) { return b ? "true" : "false"; }

} // namespace detail

inline Document cmd_spectrum(const RunConfig& cfg) {
    const auto params = cfg.params();
    const auto c = derive_constants(params);
    const auto range = cfg.n_range();
    if (range.lo < 1) throw DomainError("bound level label n must be >= 1");
    Document doc;
    doc.meta = detail::base_meta(cfg);
    doc.meta["params"] = detail::params_json(params, c);
    doc.meta["n"] = {range.lo, range.hi};
    doc.table.columns = {"n", "E_over_m", "a", "s", "kappa", "valid", "scale_resolved"};
    for (int n = range.lo; n <= range.hi; ++n) {
        const double e = energy(n, c, params.mass);
        const double a = bound_scale(n, c, params.mass);
        const bool resolved = a > 0.0;
        doc.table.rows.push_back({static_cast<long long>(n), e / params.mass, a, c.s, c.kappa, true, resolved});
    }
    return doc;
}

inline Document cmd_wavefunction(const RunConfig& cfg) {
    const auto params = cfg.params();
    const auto c = derive_constants(params);
    const auto range = cfg.n_range();
    if (range.lo != range.hi) throw UsageError("wavefunction takes a single --n");
    const auto level = make_level(range.lo, c, params.mass);
    const auto spinor = assemble_spinor(level, c);
    if (!spinor.normalized()) throw NonNormalizable("uncoupled limit: the lower component vanishes identically");
    const auto grid = cfg.grid(level.a);

    Document doc;
    doc.meta = detail::base_meta(cfg);
    doc.meta["params"] = detail::params_json(params, c);
    doc.meta["n"] = level.n;
    doc.meta["energy"] = level.energy;
    doc.meta["a"] = level.a;
    doc.meta["omega"] = level.omega;
    doc.meta["normalization"] = spinor.normalization();
    doc.meta["grid"] = detail::grid_json(grid, cfg);
    doc.table.columns = {"r", "F", "G"};
    std::vector<double> density;
    for (double r : grid) {
        const auto v = spinor.evaluate(r);
        doc.table.rows.push_back({r, v.F, v.G});
        density.push_back(v.F * v.F + v.G * v.G);
    }
    double trapezoid = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) trapezoid += 0.5 * (grid[i] - grid[i - 1]) * (density[i] + density[i - 1]);

    const auto tol = cfg.tolerances();
    const auto& cmp = spinor.comparison();
    VerificationReport closed = make_report("normalization.closed_form_ratio", std::abs(cmp.ratio - 1.0),
                                            std::abs(cmp.ratio - 1.0), 1e-6,
                                            {{"quadrature_constant", format_real(cmp.quadrature_constant)},
                                             {"closed_form", format_real(cmp.closed_form)},
                                             {"ratio", format_real(cmp.ratio)},
                                             {"flagged", detail::pass_string(cmp.flagged)},
                                             {"role", "informational"}});
    doc.reports.push_back(closed);
    doc.reports.push_back(make_report("normalization.grid_trapezoid", std::abs(trapezoid - 1.0),
                                      std::abs(trapezoid - 1.0), 1e-3,
                                      {{"integral", format_real(trapezoid)}, {"role", "informational"}}));
    const auto first = ode_residual_first_order(spinor, grid);
    doc.reports.push_back(make_report("ode.first_order", first.max, first.rms, tol.at("ode.first_order"),
                                      {{"points", std::to_string(first.points)}, {"worst_r", format_real(first.worst_r)}}));
    auto second = ode_residual_second_order(physical_components(level, c).first, Channel::u, level, c, grid);
    second.merge(ode_residual_second_order(physical_components(level, c).second, Channel::v, level, c, grid));
    doc.reports.push_back(make_report("ode.second_order", second.max, second.rms, tol.at("ode.second_order"),
                                      {{"points", std::to_string(second.points)}, {"worst_r", format_real(second.worst_r)}}));
    return doc;
}

inline Document cmd_coherent(const RunConfig& cfg) {
    const std::complex<double> xi(cfg.xi_re, cfg.xi_im);
    if (!(std::abs(xi) < 1.0)) throw DomainError("coherent states require |xi| < 1");
    const auto params = cfg.params();
    const auto c = derive_constants(params);
    const auto range = cfg.n_range();
    if (range.lo != range.hi) throw UsageError("coherent takes a single --n for the reference level");
    const auto level = make_level(range.lo, c, params.mass);
    const auto ref = CoherentReference::from_level(level);
    const auto spinor = assemble_coherent_spinor(c, xi, ref);
    const auto grid = cfg.grid(ref.a_ref);
    const auto tol = cfg.tolerances();

    Document doc;
    doc.meta = detail::base_meta(cfg);
    doc.meta["params"] = detail::params_json(params, c);
    doc.meta["xi"] = {xi.real(), xi.imag()};
    doc.meta["reference_level"] = level.n;
    doc.meta["a_ref"] = ref.a_ref;
    doc.meta["omega_ref"] = ref.omega_ref;
    doc.meta["normalization"] = spinor.normalization();
    doc.meta["grid"] = detail::grid_json(grid, cfg);
    doc.table.columns = {"r", "re_F", "im_F", "re_G", "im_G"};
    for (double r : grid) {
        const auto v = spinor.evaluate(r);
        doc.table.rows.push_back({r, v.F.real(), v.F.imag(), v.G.real(), v.G.imag()});
    }

    const double tail = tol.at("coherent_tail");
    const auto sturmian_grid = log_grid(1e-2, 40.0, 200);
    for (Channel ch : {Channel::u, Channel::v}) {
        const auto cmp = compare_coherent_series(ch, c.s, xi, sturmian_grid, tail);
        doc.reports.push_back(make_report(std::string("coherent.series_") + to_string(ch), cmp.relative, cmp.relative,
                                          tol.at("coherent.series"),
                                          {{"truncation", std::to_string(cmp.truncation)},
                                           {"tail", format_real(cmp.tail)},
                                           {"tail_bound", format_real(tail)},
                                           {"abs_max", format_real(cmp.abs_max)}}));
    }
    const double integral = integrate_adaptive([&](double r) {
        const auto f = spinor.evaluate(r);
        return std::norm(f.F) + std::norm(f.G);
    });
    doc.reports.push_back(make_report("coherent.spinor_norm", std::abs(integral - 1.0), std::abs(integral - 1.0),
                                      tol.at("coherent.spinor_norm"), {{"integral", format_real(integral)}}));
    if (ref.omega_ref != 0.0) {
        const double limit = coherent_ratio_limit_residual(c.s, xi, ref.a_ref, ref.omega_ref);
        doc.reports.push_back(make_report("coherent.ratio_limit", limit, limit, tol.at("coherent.ratio_limit")));
    }
    const auto& cmp = spinor.comparison();
    doc.reports.push_back(make_report("normalization.closed_form_ratio", std::abs(cmp.ratio - 1.0),
                                      std::abs(cmp.ratio - 1.0), 1e-6,
                                      {{"quadrature_constant", format_real(cmp.quadrature_constant)},
                                       {"closed_form", format_real(cmp.closed_form)},
                                       {"ratio", format_real(cmp.ratio)},
                                       {"flagged", detail::pass_string(cmp.flagged)},
                                       {"role", "informational"}}));
    return doc;
}

inline Document cmd_verify(const RunConfig& cfg) {
    VerifyConfig vc;
    vc.params = cfg.params();
    vc.tolerances = cfg.tolerances();
    vc.perturb = cfg.perturb;
    const auto c = derive_constants(vc.params);
    Document doc;
    doc.reports = run_verification_suite(vc);
    const auto summary = summarize(doc.reports);
    doc.meta = detail::base_meta(cfg);
    doc.meta["params"] = detail::params_json(vc.params, c);
    doc.meta["checks"] = summary.total;
    doc.meta["passed"] = summary.passed;
    doc.meta["failed"] = summary.failed;
    doc.table.columns = {"category", "worst_residual"};
    for (const auto& [category, worst] : summary.worst_residual) doc.table.rows.push_back({category, worst});
    return doc;
}

inline Document cmd_sweep(const RunConfig& cfg) {
    const auto base = cfg.params();
    const auto range = cfg.n_range();
    if (range.lo < 1) throw DomainError("bound level label n must be >= 1");
    const auto av = cfg.alpha_v_range.empty() ? SweepRange{cfg.alpha_v, cfg.alpha_v, 1}
                                              : parse_sweep_range(cfg.alpha_v_range, "--alpha-v-range");
    const auto as = cfg.alpha_s_range.empty() ? SweepRange{cfg.alpha_s, cfg.alpha_s, 1}
                                              : parse_sweep_range(cfg.alpha_s_range, "--alpha-s-range");
    const long long rows = static_cast<long long>(av.count) * as.count * (range.hi - range.lo + 1LL);
    if (rows > kMaxSweepRows)
        throw UsageError("sweep would produce " + std::to_string(rows) + " rows (limit " +
                         std::to_string(kMaxSweepRows) + ")");

    Document doc;
    doc.meta = detail::base_meta(cfg);
    doc.meta["dimension"] = base.dimension;
    doc.meta["j"] = base.j.value();
    doc.meta["alignment"] = to_string(base.alignment);
    doc.meta["mass"] = base.mass;
    doc.meta["alpha_v_range"] = {av.lo, av.hi, av.count};
    doc.meta["alpha_s_range"] = {as.lo, as.hi, as.count};
    doc.meta["n"] = {range.lo, range.hi};
    doc.table.columns = {"alpha_v", "alpha_s", "n", "E_over_m", "a", "s", "kappa", "valid", "scale_resolved", "error"};
    for (double v : av.values()) {
        for (double s_coupling : as.values()) {
            ProblemParams p = base;
            p.alpha_v = v;
            p.alpha_s = s_coupling;
            std::optional<DerivedConstants> c;
            std::string cell_error;
            try {
                c = derive_constants(p);
            } catch (const Error& e) {
                cell_error = e.what();
            }
            for (int n = range.lo; n <= range.hi; ++n) {
                std::vector<Cell> row{v, s_coupling, static_cast<long long>(n)};
                if (!c) {
                    row.insert(row.end(), {Cell{}, Cell{}, Cell{}, Cell{}, false, false, cell_error});
                    doc.table.rows.push_back(std::move(row));
                    continue;
                }
                try {
                    const double e = energy(n, *c, p.mass);
                    const double a = bound_scale(n, *c, p.mass);
                    const bool resolved = a > 0.0;
                    row.insert(row.end(), {e / p.mass, a, c->s, c->kappa, true, resolved, std::string()});
                } catch (const Error& e) {
                    row.insert(row.end(), {Cell{}, Cell{}, c->s, c->kappa, false, false, std::string(e.what())});
                }
                doc.table.rows.push_back(std::move(row));
            }
        }
    }
    return doc;
}

inline void add_common_options(CLI::App& sub, RunConfig& cfg) {
    const auto last = CLI::MultiOptionPolicy::TakeLast;
    sub.add_option("--dimension", cfg.dimension, "spatial dimension D >= 2")->multi_option_policy(last);
    sub.add_option("--j", cfg.j, "total angular momentum (half-integer)")->multi_option_policy(last);
    sub.add_flag("--aligned", "spin aligned with orbital momentum (default)");
    sub.add_flag("--unaligned", "spin anti-aligned with orbital momentum");
    sub.add_option("--alpha-v", cfg.alpha_v, "vector coupling alpha_v > 0")->multi_option_policy(last);
    sub.add_option("--alpha-s", cfg.alpha_s, "scalar coupling alpha_s >= 0")->multi_option_policy(last);
    sub.add_option("--mass", cfg.mass, "particle mass m > 0")->multi_option_policy(last);
    sub.add_option("--n", cfg.n_text, "level n or range a..b")->multi_option_policy(last);
    sub.add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->multi_option_policy(last);
    sub.add_option("--out", cfg.out, "output file (default: standard output)")->multi_option_policy(last);
    sub.add_option("--tolerance", cfg.tolerance_overrides, "override a check tolerance, KEY=VAL (repeatable)");
}

inline void add_grid_options(CLI::App& sub, RunConfig& cfg) {
    const auto last = CLI::MultiOptionPolicy::TakeLast;
    sub.add_option("--r-min", cfg.r_min, "smallest radius (default 0.01/a)")->multi_option_policy(last);
    sub.add_option("--r-max", cfg.r_max, "largest radius (default 40/a)")->multi_option_policy(last);
    sub.add_option("--r-points", cfg.r_points, "number of grid points")->multi_option_policy(last);
    sub.add_option("--r-spacing", cfg.r_spacing, "grid spacing")
        ->check(CLI::IsMember({"linear", "log"}))
        ->multi_option_policy(last);
}

/// Runs one invocation. `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Dirac-Kepler-Coulomb spectra, radial spinors and SU(1,1) coherent states", "dkc"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.footer("Config: --config FILE reads a JSON object with the same keys (underscored); flags override it.\n"
               "Exit codes: 0 success, 1 verification failure, 2 usage or domain error.");

    auto* spectrum = app.add_subcommand("spectrum", "bound-state energies for a range of n");
    auto* wavefunction = app.add_subcommand("wavefunction", "normalised radial spinor (F, G) on a grid");
    auto* coherent = app.add_subcommand("coherent", "SU(1,1) coherent spinor on a grid");
    auto* verify = app.add_subcommand("verify", "run the full verification suite");
    auto* sweep = app.add_subcommand("sweep", "spectra over a grid of couplings");
    for (auto* sub : {spectrum, wavefunction, coherent, verify, sweep}) add_common_options(*sub, cfg);
    add_grid_options(*wavefunction, cfg);
    add_grid_options(*coherent, cfg);
    const auto last = CLI::MultiOptionPolicy::TakeLast;
    coherent->add_option("--xi-re", cfg.xi_re, "real part of the coherent label")->multi_option_policy(last);
    coherent->add_option("--xi-im", cfg.xi_im, "imaginary part of the coherent label")->multi_option_policy(last);
    sweep->add_option("--alpha-v-range", cfg.alpha_v_range, "LO:HI:COUNT")->multi_option_policy(last);
    sweep->add_option("--alpha-s-range", cfg.alpha_s_range, "LO:HI:COUNT")->multi_option_policy(last);
    verify->add_flag("--_perturb", cfg.perturb)->group("");

    try {
        args = detail::expand_config(std::move(args));
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kSuccess;
        }
        err << "dkc: " << e.what() << "\n";
        return kUsageError;
    } catch (const UsageError& e) {
        err << "dkc: " << e.what() << "\n";
        return kUsageError;
    }

    // the last of --aligned/--unaligned wins, so command-line flags override the config file
    for (const auto& a : args) {
        if (a == "--aligned") cfg.alignment = Alignment::aligned;
        if (a == "--unaligned") cfg.alignment = Alignment::unaligned;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    Document doc;
    try {
        if (cfg.command == "spectrum") doc = cmd_spectrum(cfg);
        else if (cfg.command == "wavefunction") doc = cmd_wavefunction(cfg);
        else if (cfg.command == "coherent") doc = cmd_coherent(cfg);
        else if (cfg.command == "verify") doc = cmd_verify(cfg);
        else doc = cmd_sweep(cfg);
    } catch (const Error& e) {
        err << "dkc: " << e.what() << "\n";
        return kUsageError;
    }

    const std::string text = cfg.format == "csv" ? render_csv(doc) : render_json(doc);
    if (cfg.out.empty()) {
        out << text;
    } else {
        std::ofstream file(cfg.out, std::ios::binary);
        if (!(file << text)) {
            err << "dkc: cannot write '" << cfg.out << "'\n";
            return kUsageError;
        }
    }
    if (cfg.command == "verify") {
        const auto summary = summarize(doc.reports);
        if (summary.failed > 0) {
            err << "dkc: " << summary.failed << " of " << summary.total << " checks failed\n";
            return kVerificationFailed;
        }
    }
    return kSuccess;
}

} // namespace dkc::cli

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "edge.hpp"
#include "error.hpp"
#include "flow.hpp"
#include "identities.hpp"
#include "io.hpp"
#include "locallaw.hpp"
#include "montecarlo.hpp"
#include "parallel.hpp"
#include "spectrum.hpp"
#include "stieltjes.hpp"
#include "tracy_widom.hpp"

#ifndef SPECTRALEDGE_VERSION
#define SPECTRALEDGE_VERSION "0.1.0"
#endif

namespace spectraledge::cli {

using ojson = nlohmann::ordered_json;

inline std::string sha256_hex(const std::string& bytes)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::NumericError, "SHA-256 failed");
    }
    std::ostringstream os;
    for (unsigned int k = 0; k < len; ++k) {
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[k]);
    }
    return os.str();
}

inline std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw Error(ErrorKind::InvalidConfig, "cannot read '" + path + "'");
    }
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

struct RunManifest {
    std::string command;
    std::string config_hash;
    std::uint64_t seed = 0;
    double wall_time = 0.0;

    ojson to_json() const
    {
        ojson versions;
        versions["spectraledge"] = SPECTRALEDGE_VERSION;
        versions["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                            std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION);
        versions["compiler"] = __VERSION__;
        ojson j;
        j["command"] = command;
        j["config_hash"] = config_hash;
        j["seed"] = seed;
        j["versions"] = versions;
        j["wall_time"] = wall_time;
        return j;
    }
};

inline std::shared_ptr<spdlog::logger> logger()
{
    static const auto log = [] {
        auto l = spdlog::stderr_color_mt("spectraledge");
        l->set_pattern("[%l] %v");
        l->set_level(spdlog::level::warn);
        if (const char* env = std::getenv("SPECTRALEDGE_LOG")) {
            const std::string v = env;
            if (v == "error") {
                l->set_level(spdlog::level::err);
            } else if (v == "info") {
                l->set_level(spdlog::level::info);
            } else if (v == "debug") {
                l->set_level(spdlog::level::debug);
            }
        }
        return l;
    }();
    return log;
}

namespace detail {

struct Common {
    std::string spectrum;
    std::string out;
    unsigned threads = 1;
};

struct Loaded {
    SpectrumSpec spec;
    std::string hash;
};

inline Loaded load_config(const std::string& path)
{
    if (path.empty()) {
        throw Error(ErrorKind::InvalidConfig, "--spectrum is required");
    }
    const std::string bytes = read_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidConfig, std::string("malformed JSON: ") + e.what());
    }
    return {parse_spectrum_spec(j), sha256_hex(bytes)};
}

/// Writes `body` to --out (plus a manifest beside it) or to `os`.
inline void deliver(const std::string& body, const std::string& out, std::ostream& os,
                    RunManifest manifest, std::chrono::steady_clock::time_point start)
{
    if (out.empty()) {
        os << body;
        return;
    }
    write_file(out, body);
    manifest.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit_json(manifest.to_json(), out + ".manifest.json");
    logger()->info("wrote {}", out);
}

inline std::string csv_string(const CsvTable& t)
{
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
}

inline std::string argv_hash(const std::vector<std::string>& args)
{
    std::string joined;
    for (const auto& a : args) {
        joined += a;
        joined += '\0';
    }
    return sha256_hex(joined);
}

} // namespace detail

/// Exit codes: 0 success, 1 numerical or IO failure, 2 invalid configuration
/// or usage.
inline int run_command(const std::vector<std::string>& args, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr)
{
    const auto start = std::chrono::steady_clock::now();
    CLI::App app{"Spectral-edge toolkit for signal-plus-noise matrices", "spectraledge"};
    app.require_subcommand(1);
    app.set_version_flag("--version", SPECTRALEDGE_VERSION);

    detail::Common common;
    auto add_common = [&](CLI::App* sub, bool spectrum, bool threads) {
        if (spectrum) {
            sub->add_option("--spectrum", common.spectrum, "Spectrum JSON file")->required();
        }
        sub->add_option("--out", common.out, "Output path (default: stdout)");
        if (threads) {
            sub->add_option("--threads", common.threads, "Worker threads (0 = all cores)");
        }
    };

    auto* c_edge = app.add_subcommand("edge", "Edge location and scaling constant (JSON)");
    add_common(c_edge, true, false);

    double d_from = 0.05, d_to = std::nan(""), d_step = 0.05;
    auto* c_density = app.add_subcommand("density", "Limiting density on a grid (CSV)");
    add_common(c_density, true, true);
    c_density->add_option("--from", d_from);
    c_density->add_option("--to", d_to, "Default: lambda_r + 0.5");
    c_density->add_option("--step", d_step);

    int trials = 2000;
    std::string dist = "gaussian";
    std::uint64_t seed = 7;
    bool rescale = false;
    auto* c_sim = app.add_subcommand("simulate", "Rescaled largest-eigenvalue ensemble (CSV)");
    add_common(c_sim, true, true);
    c_sim->add_option("--trials", trials);
    c_sim->add_option("--dist", dist, "gaussian | rademacher | uniform");
    c_sim->add_option("--seed", seed);
    c_sim->add_flag("--rescale", rescale, "Sample sqrt(gamma0)(R+X) and use E_+");

    double t_from = -10.0, t_to = 6.0, t_step = 0.01;
    auto* c_tw = app.add_subcommand("twtable", "Tracy-Widom F1 table (CSV)");
    add_common(c_tw, false, true);
    c_tw->add_option("--from", t_from);
    c_tw->add_option("--to", t_to);
    c_tw->add_option("--step", t_step);

    int ll_N = 200, ll_seeds = 10;
    double ll_eta = std::nan(""), ll_offset = 0.0;
    bool ll_unscaled = false;
    std::uint64_t ll_seed = 0;
    std::string ll_dist = "gaussian";
    auto* c_ll = app.add_subcommand("locallaw", "Resolvent deviations from the local law (CSV)");
    add_common(c_ll, true, true);
    c_ll->add_option("--N", ll_N);
    c_ll->add_option("--eta", ll_eta, "Default: N^{-1/2}");
    c_ll->add_option("--E-offset", ll_offset, "E = E_+ + offset");
    c_ll->add_option("--seeds", ll_seeds);
    c_ll->add_option("--seed", ll_seed, "Base seed; instance k uses trial k");
    c_ll->add_option("--dist", ll_dist);
    c_ll->add_flag("--unscaled", ll_unscaled, "Use R+X and E = lambda_r instead of the rescaled model");

    double f_from = 0.0, f_to = 3.0, f_dt = 0.25, f_step = 1e-4;
    auto* c_flow = app.add_subcommand("flow-check", "Flow derivative residuals (CSV)");
    add_common(c_flow, true, true);
    c_flow->add_option("--t-from", f_from);
    c_flow->add_option("--t-to", f_to);
    c_flow->add_option("--t-step", f_dt);
    c_flow->add_option("--step", f_step, "Finite-difference step");

    double i_t = 0.0;
    auto* c_id = app.add_subcommand("identity-check", "Edge identity residuals (JSON)");
    add_common(c_id, true, false);
    c_id->add_option("--t", i_t, "Flow time");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion& e) {
        out << SPECTRALEDGE_VERSION << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    RunManifest manifest;
    manifest.command = command;

    try {
        if (command == "twtable") {
            manifest.config_hash = detail::argv_hash(args);
            const auto rows = f1_table(t_from, t_to, t_step, common.threads);
            CsvTable t{{"s", "F1", "f1"}, {}};
            for (const auto& r : rows) {
                t.add_row({format_double(r.s), format_double(r.F1), format_double(r.f1)});
            }
            detail::deliver(detail::csv_string(t), common.out, out, manifest, start);
            return 0;
        }

        const auto cfg = detail::load_config(common.spectrum);
        manifest.config_hash = cfg.hash;
        const auto model = cfg.spec.build();

        if (command == "edge") {
            const auto e = solve_edge(model);
            ojson res;
            res["R1"] = e.residuals.R1;
            res["R2"] = e.residuals.R2;
            res["first_order"] = e.residuals.first_order;
            ojson j;
            j["xi_r"] = e.xi_r;
            j["lambda_r"] = e.lambda_r;
            j["b"] = e.b;
            j["tb"] = e.tb;
            j["h"] = e.h;
            j["gamma0"] = e.gamma0;
            j["E_plus"] = e.E_plus;
            j["xi"] = e.xi;
            j["assumption3_margin"] = check_assumption3(model, e);
            j["critical_points"] = e.critical_points;
            j["near_degenerate"] = e.near_degenerate;
            j["residuals"] = res;
            detail::deliver(dump_json(j), common.out, out, manifest, start);
            return 0;
        }

        if (command == "density") {
            if (std::isnan(d_to)) {
                d_to = find_edge(model).lambda_r + 0.5;
            }
            if (!(d_step > 0.0) || !(d_to >= d_from)) {
                throw Error(ErrorKind::InvalidArgument, "density grid needs step > 0 and to >= from");
            }
            const auto n = static_cast<std::size_t>(std::floor((d_to - d_from) / d_step + 0.5)) + 1;
            std::vector<StieltjesValue> vals(n);
            std::vector<double> Es(n);
            for (std::size_t k = 0; k < n; ++k) {
                Es[k] = d_from + static_cast<double>(k) * d_step;
                if (Es[k] == 0.0) {
                    throw Error(ErrorKind::InvalidArgument, "density grid contains E = 0");
                }
            }
            parallel_for(n, common.threads,
                         [&](std::size_t k) { vals[k] = solve_stieltjes(model, cplx(Es[k], 0.0)); });
            CsvTable t{{"E", "rho0", "Im_s", "Re_s"}, {}};
            for (std::size_t k = 0; k < n; ++k) {
                const double rho = std::max(0.0, vals[k].s.imag() / std::numbers::pi);
                t.add_row({format_double(Es[k]), format_double(rho), format_double(vals[k].s.imag()),
                           format_double(vals[k].s.real())});
            }
            detail::deliver(detail::csv_string(t), common.out, out, manifest, start);
            return 0;
        }

        if (command == "simulate") {
            if (trials < 1) {
                throw Error(ErrorKind::InvalidConfig, "--trials must be >= 1");
            }
            manifest.seed = seed;
            const auto nd = parse_noise_dist(dist);
            const auto r = run_ensemble(model, trials, nd, seed, rescale, common.threads);
            ojson summary;
            summary["mean"] = r.mean;
            summary["var"] = r.variance;
            summary["ks"] = r.ks_distance;
            summary["lambda_r"] = r.lambda_r;
            summary["gamma0"] = r.gamma0;
            summary["n_trials"] = r.n_trials;
            summary["dist"] = std::string(to_string(nd));
            summary["seed"] = seed;
            if (common.out.empty()) {
                out << dump_json(summary);
                return 0;
            }
            CsvTable t{{"trial", "mu1", "theta"}, {}};
            for (std::size_t k = 0; k < r.thetas.size(); ++k) {
                t.add_row({std::to_string(k), format_double(r.mu1[k]), format_double(r.thetas[k])});
            }
            detail::deliver(detail::csv_string(t), common.out, out, manifest, start);
            emit_json(summary, common.out + ".summary.json");
            return 0;
        }

        if (command == "locallaw") {
            if (ll_N < 1 || ll_seeds < 1) {
                throw Error(ErrorKind::InvalidConfig, "--N and --seeds must be >= 1");
            }
            manifest.seed = ll_seed;
            const double c = static_cast<double>(cfg.spec.M) / cfg.spec.N;
            const int m = std::max(1, static_cast<int>(std::lround(c * ll_N)));
            const auto sized = cfg.spec.resized(m, ll_N).build();
            const auto e = solve_edge(sized);
            const double gamma = ll_unscaled ? 1.0 : e.gamma0;
            const double E = (ll_unscaled ? e.lambda_r : e.E_plus) + ll_offset;
            const double eta = std::isnan(ll_eta) ? 1.0 / std::sqrt(static_cast<double>(ll_N)) : ll_eta;
            const auto nd = parse_noise_dist(ll_dist);
            std::vector<LocalLawReport> reps(static_cast<std::size_t>(ll_seeds));
            parallel_for(reps.size(), common.threads, [&](std::size_t k) {
                Matrix Y = sample_matrix(sized, nd, ll_seed, k);
                Y *= std::sqrt(gamma);
                reps[k] = locallaw_deviation(sized, Y, cplx(E, eta), gamma);
            });
            CsvTable t{{"seed", "class", "deviation", "psi", "ratio"}, {}};
            const double inv_neta = 1.0 / (ll_N * eta);
            for (std::size_t k = 0; k < reps.size(); ++k) {
                const auto& r = reps[k];
                const auto row = [&](const char* cls, double dev, double psi, double ratio) {
                    t.add_row({std::to_string(k), cls, format_double(dev), format_double(psi),
                               format_double(ratio)});
                };
                row("ii", r.dev_ii, r.psi, r.ratio_ii);
                row("barbar", r.dev_barbar, r.psi, r.ratio_barbar);
                row("cross", r.dev_cross, r.psi, r.ratio_cross);
                row("mumu", r.dev_mumu, r.psi, r.ratio_mumu);
                row("offdiag", r.dev_offdiag, r.psi, r.ratio_offdiag);
                row("avg", r.dev_avg, inv_neta, r.ratio_avg);
            }
            detail::deliver(detail::csv_string(t), common.out, out, manifest, start);
            return 0;
        }

        if (command == "flow-check") {
            if (!(f_dt > 0.0) || !(f_to >= f_from)) {
                throw Error(ErrorKind::InvalidArgument, "time grid needs --t-step > 0 and --t-to >= --t-from");
            }
            const auto n = static_cast<std::size_t>(std::floor((f_to - f_from) / f_dt + 0.5)) + 1;
            std::vector<FlowCheck<long double>> checks(n);
            parallel_for(n, common.threads, [&](std::size_t k) {
                const long double t = f_from + static_cast<double>(k) * f_dt;
                checks[k] = flow_derivative_check<long double>(model, t, f_step);
            });
            CsvTable t{{"t", "b", "gamma", "E_plus", "xi", "h"}, {}};
            for (const auto& ch : checks) {
                const auto& r = ch.residual;
                t.add_row({format_double(static_cast<double>(ch.t)), format_double(static_cast<double>(r.b)),
                           format_double(static_cast<double>(r.gamma)),
                           format_double(static_cast<double>(r.E_plus)),
                           format_double(static_cast<double>(r.xi)),
                           format_double(static_cast<double>(r.h))});
            }
            detail::deliver(detail::csv_string(t), common.out, out, manifest, start);
            return 0;
        }

        if (command == "identity-check") {
            const auto st = flow_state<long double>(model, i_t);
            ojson res;
            for (const auto& [k, v] : identity_residuals(st)) {
                res[k] = static_cast<double>(v);
            }
            ojson j;
            j["t"] = i_t;
            j["residuals"] = res;
            detail::deliver(dump_json(j), common.out, out, manifest, start);
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.is_config_error() ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << app.help();
    return 2;
}

} // namespace spectraledge::cli

// tvlab: truncated variation, two-sided Skorokhod reflection and the
// Lévy exponent of the inverse clock, with Monte Carlo verification
// subcommands for CI use.
//
// Exit codes: 0 success / verdict pass, 2 usage or domain error,
// 3 verification failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tvlab/brownian.hpp"
#include "tvlab/experiments.hpp"
#include "tvlab/local_time.hpp"
#include "tvlab/path.hpp"
#include "tvlab/report.hpp"
#include "tvlab/skorokhod.hpp"
#include "tvlab/subordinator.hpp"
#include "tvlab/truncated_variation.hpp"
#include "tvlab/version.hpp"

namespace {

using tvlab::ordered_json;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("TVLAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw std::invalid_argument("TVLAB_SEED is not an integer");
        }
    }
    return 7;
}

std::uint64_t fresh_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const auto comma = s.find(',', pos);
        const std::string tok = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
        out.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty numeric list");
    return out;
}

/// "start:stop:lin|log:count" -> grid
std::vector<double> parse_grid(const std::string& s) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const auto colon = s.find(':', pos);
        parts.push_back(s.substr(pos, colon == std::string::npos ? colon : colon - pos));
        if (colon == std::string::npos) break;
        pos = colon + 1;
    }
    if (parts.size() != 4) throw std::invalid_argument("grid must be start:stop:lin|log:count");
    const double a = std::stod(parts[0]), b = std::stod(parts[1]);
    const int n = std::stoi(parts[3]);
    if (n < 2) throw std::invalid_argument("grid count must be >= 2");
    std::vector<double> out(static_cast<std::size_t>(n));
    if (parts[2] == "log") {
        if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("log grid needs positive bounds");
        const double la = std::log(a), lb = std::log(b);
        for (int i = 0; i < n; ++i)
            out[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
    } else if (parts[2] == "lin") {
        for (int i = 0; i < n; ++i)
            out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    } else {
        throw std::invalid_argument("grid scale must be lin or log");
    }
    return out;
}

int emit_report(const tvlab::MonteCarloReport& rep, bool json, const std::string& out_file) {
    const std::string payload = rep.to_json().dump(2) + "\n";
    if (!out_file.empty()) {
        std::ofstream f(out_file, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot write '" + out_file + "'");
        f << payload;
    }
    if (json) {
        std::cout << payload;
    } else {
        std::cout << rep.summary();
    }
    return rep.pass ? 0 : 3;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot write '" + path + "'");
    return file;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"truncated variation / Skorokhod reflection toolbox"};
    app.set_version_flag("--version", std::string("tvlab ") + tvlab::kVersion);
    app.require_subcommand(0, 1);

    // shared flags
    std::string input, out_file, q_list = "0.5,1,2", q_grid, target_str = "ttv",
                estimator_str = "occupation", mode_str = "ttv";
    double c = 1.0, t = 1.0, dt = 1e-4, eps = -1.0, x_start = 0.0;
    double tan_c = 0.5, tan_dt = 1e-5;
    bool json = false, running = false, fresh = false, no_scaling = false;
    int paths = 0, seeds = 50, max_len = 12, threads = 0;
    std::uint64_t seed = default_seed(), path_index = 0;

    auto* sim = app.add_subcommand("simulate-bm", "generate a Brownian path CSV");
    sim->add_option("--t", t, "horizon")->capture_default_str();
    sim->add_option("--dt", dt, "step")->capture_default_str();
    sim->add_option("--seed", seed, "master seed")->capture_default_str();
    sim->add_option("--index", path_index, "path index")->capture_default_str();
    sim->add_option("--out", out_file, "output CSV ('-' for stdout)");

    auto* ttv_cmd = app.add_subcommand("ttv", "truncated variation of a CSV path");
    ttv_cmd->add_option("--input", input, "path CSV")->required();
    ttv_cmd->add_option("--c", c, "band width")->required();
    ttv_cmd->add_flag("--running", running, "emit the running TTV process");
    ttv_cmd->add_flag("--json", json, "JSON output");

    auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive TTV oracle (<= 16 samples)");
    oracle_cmd->add_option("mode", mode_str, "ttv|utv|dtv")->required();
    oracle_cmd->add_option("--input", input, "path CSV")->required();
    oracle_cmd->add_option("--c", c, "band width")->required();

    auto* sk = app.add_subcommand("skorokhod", "two-sided Skorokhod reflection");
    sk->add_option("--input", input, "path CSV")->required();
    sk->add_option("--c", c, "band width")->required();
    sk->add_option("--x", x_start, "starting level (default: lazy anchor)");
    sk->add_option("--out", out_file, "output CSV ('-' for stdout)");

    auto* lt = app.add_subcommand("localtime", "lattice local times of a CSV path");
    lt->add_option("--input", input, "path CSV")->required();
    lt->add_option("--c", c, "lattice spacing")->required();
    lt->add_option("--eps", eps, "strip half-width (default c/20)");
    lt->add_option("--estimator", estimator_str, "crossing|occupation")->capture_default_str();
    lt->add_option("--out", out_file, "output CSV ('-' for stdout)");

    auto* expo = app.add_subcommand("exponent", "closed-form exponent/scale table");
    expo->add_option("--c", c, "band width")->capture_default_str();
    expo->add_option("--q", q_list, "comma-separated q values")->capture_default_str();
    expo->add_option("--q-grid", q_grid, "start:stop:lin|log:count");

    auto* verify = app.add_subcommand("verify", "Monte Carlo verification experiments");
    verify->require_subcommand(1);
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "master seed")->capture_default_str();
        cmd->add_flag("--fresh-seed", fresh, "draw the seed from the OS");
        cmd->add_option("--threads", threads, "worker threads (0 = auto)");
        cmd->add_flag("--json", json, "JSON report to stdout");
        cmd->add_option("--out", out_file, "write JSON report to a file");
    };

    auto* v_exp = verify->add_subcommand("exponent", "Levy exponent of the inverse TTV clock");
    v_exp->add_option("--c", c, "band width")->capture_default_str();
    v_exp->add_option("--q", q_list, "comma-separated q values")->capture_default_str();
    v_exp->add_option("--t", t, "inversion level")->capture_default_str();
    v_exp->add_option("--dt", dt, "step")->capture_default_str();
    v_exp->add_option("--paths", paths, "ensemble size (default 4000)");
    add_common(v_exp);

    auto* v_rep = verify->add_subcommand("representation", "local-time representation of TTV");
    v_rep->add_option("--c", c, "band width")->capture_default_str();
    v_rep->add_option("--t", t, "time horizon")->capture_default_str();
    v_rep->add_option("--dt", dt, "step")->capture_default_str();
    v_rep->add_option("--paths", paths, "per-ensemble size (default 2000)");
    v_rep->add_option("--target", target_str, "ttv|path")->capture_default_str();
    v_rep->add_option("--estimator", estimator_str, "occupation|crossing")
        ->capture_default_str();
    add_common(v_rep);

    auto* v_tails = verify->add_subcommand("tails", "exponential tails + scaling of tau");
    v_tails->add_option("--c", c, "band width")->capture_default_str();
    v_tails->add_option("--dt", dt, "step")->capture_default_str();
    v_tails->add_option("--paths", paths, "ensemble size (default 10000)");
    v_tails->add_flag("--no-scaling", no_scaling, "skip the Brownian-scaling KS check");
    add_common(v_tails);

    auto* v_tan = verify->add_subcommand("tanaka", "Ito-Tanaka residual for the sawtooth map");
    v_tan->add_option("--c", tan_c, "lattice spacing")->capture_default_str();
    v_tan->add_option("--dt", tan_dt, "step")->capture_default_str();
    v_tan->add_option("--eps", eps, "strip half-width (default 0.004)");
    v_tan->add_option("--seeds", seeds, "number of paths")->capture_default_str();
    v_tan->add_option("--estimator", estimator_str, "occupation|crossing")
        ->capture_default_str();
    add_common(v_tan);

    auto* v_or = verify->add_subcommand("oracle", "streaming vs exhaustive TTV oracle");
    v_or->add_option("--paths", paths, "number of random paths (default 1000)");
    v_or->add_option("--max-len", max_len, "maximum samples per path")->capture_default_str();
    add_common(v_or);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (fresh) seed = fresh_seed();
        const auto estimator = [&] {
            if (estimator_str == "occupation") return tvlab::LocalTimeEstimator::occupation;
            if (estimator_str == "crossing") return tvlab::LocalTimeEstimator::crossing;
            throw std::invalid_argument("estimator must be occupation or crossing");
        };

        if (sim->parsed()) {
            tvlab::SimConfig cfg;
            cfg.horizon = t;
            cfg.dt = dt;
            cfg.seed = seed;
            cfg.path_index = path_index;
            std::ofstream file;
            tvlab::write_path_csv(open_out(file, out_file), tvlab::generate_bm(cfg));
            return 0;
        }

        if (ttv_cmd->parsed()) {
            const tvlab::SampledPath path = tvlab::read_path_csv_file(input);
            const tvlab::TruncVarResult r = tvlab::ttv_stream(path, c);
            if (json) {
                ordered_json j{{"c", r.c}, {"ttv", r.ttv}, {"utv", r.utv}, {"dtv", r.dtv}};
                if (running) j["running_ttv"] = r.running_ttv;
                std::cout << j.dump() << "\n";
            } else {
                std::printf("c = %g\nttv = %.12g\nutv = %.12g\ndtv = %.12g\n", r.c, r.ttv,
                            r.utv, r.dtv);
                if (running) {
                    std::printf("time,running_ttv\n");
                    for (std::size_t i = 0; i < path.size(); ++i)
                        std::printf("%.12g,%.12g\n", path.times[i], r.running_ttv[i]);
                }
            }
            return 0;
        }

        if (oracle_cmd->parsed()) {
            const tvlab::SampledPath path = tvlab::read_path_csv_file(input);
            tvlab::TvMode mode;
            if (mode_str == "ttv") mode = tvlab::TvMode::ttv;
            else if (mode_str == "utv") mode = tvlab::TvMode::utv;
            else if (mode_str == "dtv") mode = tvlab::TvMode::dtv;
            else throw std::invalid_argument("oracle mode must be ttv, utv or dtv");
            std::printf("%.17g\n", tvlab::ttv_oracle(path, c, mode));
            return 0;
        }

        if (sk->parsed()) {
            const tvlab::SampledPath path = tvlab::read_path_csv_file(input);
            const tvlab::TubeSolution sol = sk->count("--x") > 0
                                                ? tvlab::reflect(path, c, x_start)
                                                : tvlab::solve(path, c);
            std::ofstream file;
            auto& os = open_out(file, out_file);
            os << "time,f,g,h,U,D\n";
            char buf[160];
            for (std::size_t i = 0; i < path.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                              path.times[i], path.values[i], sol.g[i], sol.residual[i],
                              sol.up[i], sol.down[i]);
                os << buf;
            }
            return 0;
        }

        if (lt->parsed()) {
            const tvlab::SampledPath path = tvlab::read_path_csv_file(input);
            const double e = eps > 0.0 ? eps : c / 20.0;
            const auto lattice = tvlab::lattice_local_times(path, c, estimator(), e);
            std::ofstream file;
            auto& os = open_out(file, out_file);
            os << "time,level_index,L\n";
            char buf[96];
            for (std::size_t j = 0; j < lattice.levels.size(); ++j) {
                for (std::size_t i = 0; i < lattice.times.size(); ++i) {
                    std::snprintf(buf, sizeof buf, "%.12g,%d,%.12g\n", lattice.times[i],
                                  lattice.k_of(j), lattice.levels[j][i]);
                    os << buf;
                }
            }
            return 0;
        }

        if (expo->parsed()) {
            const std::vector<double> qs =
                q_grid.empty() ? parse_list(q_list) : parse_grid(q_grid);
            std::printf("q,phi,i1,i2,w_c,z_c\n");
            for (double q : qs) {
                const auto [i1, i2] = tvlab::excursion_terms(c, q);
                std::printf("%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", q,
                            tvlab::levy_exponent(c, q), i1, i2, tvlab::scale_w(q, c),
                            tvlab::scale_z(q, c));
            }
            return 0;
        }

        if (v_exp->parsed()) {
            tvlab::experiments::ExponentConfig cfg;
            cfg.c = c;
            cfg.t = t;
            cfg.dt = dt;
            cfg.paths = paths > 0 ? paths : 4000;
            cfg.seed = seed;
            cfg.q = parse_list(q_list);
            cfg.threads = threads;
            return emit_report(tvlab::experiments::empirical_exponent(cfg), json, out_file);
        }

        if (v_rep->parsed()) {
            tvlab::experiments::ReprConfig cfg;
            cfg.c = c;
            cfg.t = t;
            cfg.dt = dt;
            cfg.paths = paths > 0 ? paths : 2000;
            cfg.seed = seed;
            cfg.threads = threads;
            cfg.estimator = estimator();
            if (target_str == "ttv") cfg.target = tvlab::experiments::ReprTarget::ttv;
            else if (target_str == "path") cfg.target = tvlab::experiments::ReprTarget::path;
            else throw std::invalid_argument("target must be ttv or path");
            return emit_report(tvlab::experiments::representation_test(cfg), json, out_file);
        }

        if (v_tails->parsed()) {
            tvlab::experiments::TailConfig cfg;
            cfg.c = c;
            cfg.dt = dt;
            cfg.paths = paths > 0 ? paths : 10000;
            cfg.seed = seed;
            cfg.scaling_check = !no_scaling;
            cfg.threads = threads;
            return emit_report(tvlab::experiments::tail_check_tau(cfg), json, out_file);
        }

        if (v_tan->parsed()) {
            tvlab::experiments::TanakaConfig cfg;
            cfg.c = tan_c;
            cfg.dt = tan_dt;
            if (eps > 0.0) cfg.eps = eps;
            cfg.seeds = seeds;
            cfg.seed = seed;
            cfg.estimator = estimator();
            cfg.threads = threads;
            return emit_report(tvlab::experiments::tanaka_check(cfg), json, out_file);
        }

        if (v_or->parsed()) {
            tvlab::experiments::OracleConfig cfg;
            cfg.paths = paths > 0 ? paths : 1000;
            cfg.max_len = max_len;
            cfg.seed = seed;
            cfg.threads = threads;
            return emit_report(tvlab::experiments::oracle_equivalence(cfg), json, out_file);
        }

        std::cout << app.help();
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

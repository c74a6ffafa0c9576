// Acceptance suite: one line per criterion, exit code = number of failures.
//
// Criterion 7 (Ito-Tanaka residual bound) is expected to fail at the pinned
// resolution: the sup-norm residual is dominated by the local-time
// estimator's statistical fluctuation, whose floor at dt = 1e-5 sits near
// 0.1 for every estimator setting we measured (see the informational lines
// printed next to it, which show the residual shrinking as dt is refined
// further). The bound is kept as stated rather than tuned to pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tvlab/experiments.hpp"
#include "tvlab/local_time.hpp"
#include "tvlab/skorokhod.hpp"
#include "tvlab/subordinator.hpp"
#include "tvlab/truncated_variation.hpp"

namespace fs = std::filesystem;
using namespace tvlab;
using namespace tvlab::experiments;

namespace {

int failures = 0;

void line(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("criterion %d: %s  %s (%s)\n", criterion, pass ? "PASS" : "FAIL",
                what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

void info(const std::string& msg) {
    std::printf("    note: %s\n", msg.c_str());
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

double stat(const MonteCarloReport& rep, const std::string& name) {
    for (const auto& s : rep.statistics)
        if (s.name == name) return s.value;
    throw std::runtime_error("missing statistic " + name);
}

// --- criteria 1 + 2: oracle equivalence and the variational properties ---

void criteria_1_2() {
    const auto t0 = std::chrono::steady_clock::now();
    OracleConfig cfg;
    cfg.paths = 1000;
    cfg.max_len = 12;
    cfg.seed = 1;
    const auto rep = oracle_equivalence(cfg);
    const double dt = seconds_since(t0);
    const double diff = stat(rep, "max_abs_diff_vs_oracle");
    line(1, diff <= 1e-12 && dt < 10.0, "streaming TTV/UTV/DTV equals the 2^n oracle",
         "max |diff| = " + fmt(diff) + ", " + fmt(dt) + " s");
    const double tube = stat(rep, "max_tube_excess");
    const double mini = stat(rep, "max_abs_tv_minus_ttv");
    const double comp = stat(rep, "max_complementarity_dev");
    const double marg = stat(rep, "min_competitor_margin");
    line(2,
         tube <= 1e-12 && mini <= 1e-12 && comp <= 1e-9 && marg >= -1e-12 && dt < 10.0,
         "tube bound, minimality, complementarity, competitor inequality",
         "tube excess " + fmt(tube) + ", |TV(g)-TTV| " + fmt(mini) + ", compl " +
             fmt(comp) + ", margin " + fmt(marg));
}

// --- criterion 3: the worked example ---

void criterion_3() {
    std::vector<double> times{0.0, 1.0, 2.0, 3.0}, values{0.0, 1.0, 0.5, 1.5};
    const SampledPath path(times, values);
    const double c = 0.4;
    const auto sol = solve(path, c);
    const auto r = ttv_stream(path, c);
    const auto oracle = ttv_oracle_all(path, c);
    const std::vector<double> g_expect{0.2, 0.8, 0.7, 1.3};
    bool ok = std::abs(sol.anchor.x - 0.2) <= 1e-12;
    for (std::size_t i = 0; i < 4; ++i) ok = ok && std::abs(sol.g[i] - g_expect[i]) <= 1e-12;
    ok = ok && std::abs(r.ttv - 1.3) <= 1e-12 && std::abs(r.utv - 1.2) <= 1e-12 &&
         std::abs(r.dtv - 0.1) <= 1e-12;
    ok = ok && std::abs(r.ttv - oracle.ttv) <= 1e-12 && std::abs(r.utv - oracle.utv) <= 1e-12;
    line(3, ok, "worked example [0,1,0.5,1.5], c=0.4",
         "x = " + fmt(sol.anchor.x) + ", ttv = " + fmt(r.ttv) + ", utv = " + fmt(r.utv) +
             ", dtv = " + fmt(r.dtv));
}

// --- criterion 4: closed-form identities ---

void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_identity = 0.0;
    for (double c : {0.1, 0.5, 1.0, 2.0, 5.0})
        for (double q : {0.01, 0.1, 1.0, 10.0, 100.0}) {
            const auto [i1, i2] = excursion_terms(c, q);
            worst_identity = std::max(worst_identity,
                                      std::abs(i1 + i2 - levy_exponent(c, q)));
        }
    double worst_scale = 0.0;
    for (double x = 0.0; x <= 5.0; x += 0.25) {
        worst_scale = std::max(worst_scale, std::abs(scale_w(1e-12, x) - 2.0 * x));
        worst_scale = std::max(worst_scale, std::abs(scale_z(1e-12, x) - 1.0));
    }
    double worst_drift = 0.0;
    for (double q : {0.5, 1.0, 2.0}) {
        const double v = levy_exponent(1e-3, q / 1e-3);
        worst_drift = std::max(worst_drift, std::abs(v - q) / q);
    }
    const double dt = seconds_since(t0);
    line(4,
         worst_identity <= 1e-12 && worst_scale <= 1e-6 && worst_drift <= 1e-3 && dt < 1.0,
         "I1 + I2 identity, scale-function limits, small-c drift",
         "identity " + fmt(worst_identity) + ", scale " + fmt(worst_scale) + ", drift " +
             fmt(worst_drift) + ", " + fmt(dt) + " s");
}

// --- criterion 5: Monte Carlo exponent ---

void criterion_5() {
    ExponentConfig cfg;  // c=1, t=1, dt=1e-4, 4000 paths, seed 7, q {0.5,1,2}
    const auto rep = empirical_exponent(cfg);
    std::string detail;
    for (double q : cfg.q) {
        const std::string qs = fmt_num(q);
        detail += "q=" + qs + ": err " + fmt(stat(rep, "abs_err_increment(q=" + qs + ")")) +
                  " (tol " + fmt(rep.thresholds["tolerance(q=" + qs + ")"].get<double>()) +
                  "); ";
    }
    const auto shrink = exponent_bias_shrink(cfg.c, 1.0, cfg.seed);
    const bool shrink_ok = shrink.median_fine < shrink.median_coarse;
    line(5, rep.pass && shrink_ok, "empirical Levy exponent at dt = 1e-4",
         detail + "median |err| " + fmt(shrink.median_coarse) + " (dt 1e-3) -> " +
             fmt(shrink.median_fine) + " (dt 1e-4)");
}

// --- criterion 6: distributional representation ---

void criterion_6() {
    ReprConfig cfg;  // c=1, t=1, dt=1e-4, 2000 paths, seed 7, occupation, eps=c/20
    cfg.target = ReprTarget::ttv;
    const auto rep_ttv = representation_test(cfg);
    cfg.target = ReprTarget::path;
    const auto rep_path = representation_test(cfg);
    line(6, rep_ttv.pass && rep_path.pass,
         "KS acceptance of the local-time representation (ttv and path targets)",
         "p_ttv = " + fmt(stat(rep_ttv, "ks_p")) + ", p_path = " +
             fmt(stat(rep_path, "ks_p")) + ", occupation estimator, eps = c/20");
    ReprConfig cross = cfg;
    cross.target = ReprTarget::ttv;
    cross.estimator = LocalTimeEstimator::crossing;
    const auto rep_cross = representation_test(cross);
    info("crossing estimator at the same settings: KS D = " + fmt(stat(rep_cross, "ks_d")) +
         ", p = " + fmt(stat(rep_cross, "ks_p")) +
         " - its finite-dt undercount shifts the rebuilt sample; reported as an "
         "estimator-bias finding, not gated");
}

// --- criterion 7: Ito-Tanaka residual ---

void criterion_7() {
    TanakaConfig cfg;  // c=0.5, dt=1e-5, eps=0.004, 50 seeds, occupation
    const auto rep = tanaka_check(cfg);
    const double med = stat(rep, "median_residual");
    const double coarse = stat(rep, "median_residual_coarse");
    const double refined = stat(rep, "median_residual_refined_subset");
    line(7, rep.pass, "Ito-Tanaka residual: median < 0.05 at dt = 1e-5 and refinement decrease",
         "median = " + fmt(med) + " (bound 0.05), refinement " + fmt(coarse) + " -> " +
             fmt(refined));
    if (!rep.pass) {
        TanakaConfig finer;
        finer.dt = 1e-6;
        finer.eps = 0.002;
        finer.seeds = 5;
        finer.refinement_seeds = 2;
        const auto deep = tanaka_check(finer);
        info("residual floor tracks the estimator fluctuation ~ dt^(1/4): median " +
             fmt(med) + " at dt = 1e-5 vs " + fmt(stat(deep, "median_residual")) +
             " at dt = 1e-6 (5 seeds); the identity holds in the limit but the 0.05 "
             "bound is unreachable at dt = 1e-5");
    }
}

// --- criterion 8: local-time calibration, tails, scaling ---

void criterion_8() {
    CalibrationConfig cal;  // dt=1e-4, 10^4 paths, eps=0.02, seed 7
    const auto crep = localtime_calibration(cal);
    TailConfig tails;  // c=1, dt=1e-4, 10^4 paths, scaling on
    const auto trep = tail_check_tau(tails);
    line(8, crep.pass && trep.pass,
         "local-time calibration, exponential tails, Brownian scaling",
         "rel err L^0_1 = " + fmt(stat(crep, "rel_err_occupation")) + " (occ), lambda = " +
             fmt(stat(trep, "lambda_hat")) + ", tail resid " +
             fmt(stat(trep, "tail_fit_rel_residual")) + ", scaling p = " +
             fmt(stat(trep, "scaling_ks_p")));
    info("crossing estimator at the same eps: rel err " +
         fmt(stat(crep, "rel_err_crossing")) + " (finite-dt undercount, informational)");
}

// --- criterion 9: byte-identical reports across thread counts ---

int run_cli(const std::string& args) {
    const std::string cmd = std::string(TVLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return status == -1 ? -1 : WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_9() {
    const fs::path dir = fs::temp_directory_path() / "tvlab_acceptance";
    fs::create_directories(dir);
    const std::vector<std::pair<std::string, std::string>> cmds = {
        {"exponent", "verify exponent --c 1 --q 1 --t 1 --dt 1e-3 --paths 120 --seed 7"},
        {"representation",
         "verify representation --c 1 --t 1 --dt 1e-3 --paths 150 --seed 7"},
        {"tails", "verify tails --c 1 --dt 1e-3 --paths 400 --seed 7"},
        {"tanaka", "verify tanaka --c 0.5 --dt 1e-4 --eps 0.01 --seeds 4 --seed 7"},
        {"oracle", "verify oracle --paths 120 --max-len 9 --seed 7"},
    };
    bool ok = true;
    std::string detail;
    for (const auto& [name, args] : cmds) {
        const fs::path f1 = dir / (name + "_t1.json");
        const fs::path f8 = dir / (name + "_t8.json");
        const int r1 = run_cli(args + " --threads 1 --out " + f1.string());
        const int r8 = run_cli(args + " --threads 8 --out " + f8.string());
        const bool codes_ok = (r1 == 0 || r1 == 3) && r1 == r8;
        const bool bytes_ok = codes_ok && !slurp(f1).empty() && slurp(f1) == slurp(f8);
        if (!bytes_ok) detail += name + " differs; ";
        ok = ok && bytes_ok;
    }
    if (ok) detail = "all verify reports byte-identical with --threads 1 vs 8";
    line(9, ok, "deterministic reports across thread counts", detail);
}

}  // namespace

int main() {
    std::printf("tvlab acceptance suite\n");
    const auto t0 = std::chrono::steady_clock::now();
    criteria_1_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    std::printf("total: %s in %.1f s\n", failures == 0 ? "all criteria pass" :
                (std::to_string(failures) + " criterion(s) failing").c_str(),
                seconds_since(t0));
    return failures;
}

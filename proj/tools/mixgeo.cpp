// mixgeo: multiplicative-noise experiment harness (noise synthesis, denoising
// solvers, quality metrics, parameter sweeps).

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mixgeo/aos.hpp"
#include "mixgeo/energy.hpp"
#include "mixgeo/explicit_euler.hpp"
#include "mixgeo/metrics.hpp"
#include "mixgeo/noise.hpp"
#include "mixgeo/pgm.hpp"
#include "mixgeo/run_log.hpp"
#include "mixgeo/sav.hpp"
#include "mixgeo/synthetic.hpp"

namespace fs = std::filesystem;
using namespace mixgeo;

namespace {

std::string default_sidecar(const std::string& pgm_path) { return pgm_path + ".mgd"; }

/// Load an image, preferring a real-valued sidecar over the quantized PGM.
ImageGrid load_image(const std::string& pgm_path, const std::string& sidecar_path) {
    if (!sidecar_path.empty()) return read_sidecar(sidecar_path);
    const std::string auto_sidecar = default_sidecar(pgm_path);
    if (fs::exists(auto_sidecar)) return read_sidecar(auto_sidecar);
    return read_pgm(pgm_path);
}

void strip_wall_times(RunLog& log) {
    for (auto& row : log.rows) row.wall_ms.reset();
}

std::string format_psnr(double v) {
    if (std::isinf(v)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

struct DenoiseOptions {
    std::string input;
    std::string sidecar;
    std::string truth_path;
    std::string solver = "sav1";
    std::string output;
    std::string log_path;
    bool no_wall_time = false;

    double b = 0.01;
    double eta = 0.1;
    double sigma = 2.0;
    double p = 1.0;
    double alpha_const = -1.0;  // >0 switches the indicator to constant mode
    bool refresh_alpha = false;

    double tau = -1.0;  // explicit/aos step; <0 keeps the solver default
    int max_iters = 200;
    std::string stop = "iters";
    double eps_rel = 1e-4;
    double eps_abs = 1e-1;

    double gamma = 1.0;
    double C = 1e7;
    double tau0 = 0.0;
    double tau_min = 0.8;
    double tau_max = 1.2;
    double rho = 0.9;
    double tol = 1e-3;
    bool fixed_tau = false;
};

ModelWeights make_weights(const DenoiseOptions& opt) {
    ModelWeights w;
    w.b = opt.b;
    w.eta = opt.eta;
    w.indicator = (opt.alpha_const > 0.0) ? IndicatorSpec::constant_value(opt.alpha_const)
                                          : IndicatorSpec::adaptive(opt.sigma, opt.p);
    w.indicator.refresh_from_iterate = opt.refresh_alpha;
    return w;
}

StoppingRule make_stop(const DenoiseOptions& opt) {
    if (opt.stop == "rel") return StoppingRule::relative_change(opt.eps_rel);
    if (opt.stop == "abs") return StoppingRule::absolute_change(opt.eps_abs);
    return StoppingRule::max_iters();
}

/// Every bad field gets its own line; the command refuses to start on any.
std::vector<std::string> validate(const DenoiseOptions& opt) {
    std::vector<std::string> errors;
    if (opt.b < 0.0) errors.push_back("--b must be >= 0");
    if (!(opt.eta > 0.0)) errors.push_back("--eta must be > 0");
    if (opt.alpha_const > 1.0) errors.push_back("--alpha-const must lie in (0, 1]");
    if (opt.alpha_const <= 0.0) {
        if (!(opt.sigma > 0.0)) errors.push_back("--sigma must be > 0");
        if (!(opt.p > 0.0)) errors.push_back("--p must be > 0");
    }
    if (opt.max_iters < 0) errors.push_back("--max-iters must be >= 0");
    if (opt.stop == "rel" && !(opt.eps_rel > 0.0)) errors.push_back("--eps-rel must be > 0");
    if (opt.stop == "abs" && !(opt.eps_abs > 0.0)) errors.push_back("--eps-abs must be > 0");
    if ((opt.solver == "explicit" || opt.solver == "aos") && opt.tau >= 0.0 && !(opt.tau > 0.0)) {
        errors.push_back("--tau must be > 0");
    }
    if (opt.solver == "sav1" || opt.solver == "sav2") {
        if (!(opt.C > 0.0)) errors.push_back("--C must be > 0");
        if (opt.gamma < 0.0) errors.push_back("--gamma must be >= 0");
        if (!(opt.tau_min > 0.0)) errors.push_back("--tau-min must be > 0");
        if (!(opt.tau_min <= opt.tau_max)) errors.push_back("--tau-min must be <= --tau-max");
        if (!(opt.rho > 0.0) || opt.rho > 1.0) errors.push_back("--rho must lie in (0, 1]");
        if (!(opt.tol > 0.0)) errors.push_back("--tol must be > 0");
    }
    return errors;
}

int run_denoise(const DenoiseOptions& opt) {
    // every referenced file must exist before any computation starts
    std::vector<std::string> missing;
    if (!fs::exists(opt.input)) missing.push_back(opt.input);
    if (!opt.sidecar.empty() && !fs::exists(opt.sidecar)) missing.push_back(opt.sidecar);
    if (!opt.truth_path.empty() && !fs::exists(opt.truth_path)) missing.push_back(opt.truth_path);
    for (const auto& m : missing) std::cerr << "error: no such file: " << m << "\n";
    if (!missing.empty()) return 1;

    const std::vector<std::string> errors = validate(opt);
    for (const auto& e : errors) std::cerr << "error: " << e << "\n";
    if (!errors.empty()) return 2;

    const ImageGrid noisy = load_image(opt.input, opt.sidecar);
    std::optional<ImageGrid> truth;
    if (!opt.truth_path.empty()) {
        truth = load_image(opt.truth_path, "");
        if (!truth->same_shape(noisy)) {
            std::cerr << "error: ground truth shape does not match input\n";
            return 1;
        }
    }
    const ImageGrid* truth_ptr = truth ? &*truth : nullptr;

    const ModelWeights w = make_weights(opt);
    SolveResult result;
    if (opt.solver == "explicit") {
        ExplicitConfig cfg;
        if (opt.tau > 0.0) cfg.tau = opt.tau;
        cfg.max_iters = opt.max_iters;
        cfg.stop = make_stop(opt);
        result = explicit_run(noisy, w, cfg, truth_ptr);
    } else if (opt.solver == "aos") {
        AosConfig cfg;
        if (opt.tau > 0.0) cfg.tau = opt.tau;
        cfg.max_iters = opt.max_iters;
        cfg.stop = make_stop(opt);
        result = aos_run(noisy, w, cfg, truth_ptr);
    } else {
        SavConfig cfg;
        cfg.order = (opt.solver == "sav2") ? SavOrder::Second : SavOrder::First;
        cfg.gamma = opt.gamma;
        cfg.C = opt.C;
        cfg.tau0 = opt.tau0;
        cfg.tau_min = opt.tau_min;
        cfg.tau_max = opt.tau_max;
        cfg.rho = opt.rho;
        cfg.tol_step = opt.tol;
        cfg.adaptive = !opt.fixed_tau;
        cfg.max_iters = opt.max_iters;
        cfg.stop = make_stop(opt);
        result = sav_run(noisy, w, cfg, truth_ptr);
    }

    if (opt.no_wall_time) strip_wall_times(result.log);
    write_pgm(result.restored, opt.output);
    write_sidecar(result.restored, default_sidecar(opt.output));
    if (!opt.log_path.empty()) {
        std::ofstream os(opt.log_path, std::ios::binary);
        if (!os) {
            std::cerr << "error: cannot write " << opt.log_path << "\n";
            return 1;
        }
        write_csv(result.log, os);
    }

    if (truth) {
        const QualityReport q = evaluate_quality(*truth, result.restored);
        std::printf("PSNR: %s, SSIM: %.4f (best at iteration %d)\n",
                    format_psnr(q.psnr_db).c_str(), q.ssim, result.best_iter);
    }
    return 0;
}

struct SweepSummaryRow {
    double value = 0.0;
    double best_psnr = 0.0;
    int best_iter = 0;
    std::optional<double> wall_s;
};

int run_sweep(DenoiseOptions opt, const std::string& axis, const std::vector<double>& values,
              const std::string& out_dir) {
    if (opt.truth_path.empty()) {
        std::cerr << "error: sweep requires --truth to rank iterates\n";
        return 2;
    }
    fs::create_directories(out_dir);
    std::vector<SweepSummaryRow> summary;
    for (double v : values) {
        DenoiseOptions run_opt = opt;
        if (axis == "tau") {
            run_opt.tau = v;
            run_opt.tau0 = v;
            run_opt.tau_min = std::min(run_opt.tau_min, v);
            run_opt.tau_max = std::max(run_opt.tau_max, v);
        } else if (axis == "b") {
            run_opt.b = v;
        } else if (axis == "eta") {
            run_opt.eta = v;
        } else {  // C
            run_opt.C = v;
        }
        char tag[64];
        std::snprintf(tag, sizeof(tag), "%s_%g", axis.c_str(), v);
        const fs::path dir = fs::path(out_dir) / tag;
        fs::create_directories(dir);
        run_opt.output = (dir / "restored.pgm").string();
        run_opt.log_path = (dir / "run.csv").string();

        const auto t0 = std::chrono::steady_clock::now();
        const int rc = run_denoise(run_opt);
        if (rc != 0) return rc;
        const double wall_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        // recover best psnr / iteration from the run log
        std::ifstream is(run_opt.log_path);
        std::string line;
        std::getline(is, line);  // header
        SweepSummaryRow row;
        row.value = v;
        double best = -1.0;
        while (std::getline(is, line)) {
            int iter = 0;
            double tau_col = 0, et = 0, er = 0, ef = 0;
            char em[64] = "", rr[64] = "", ps[64] = "";
            std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf,%63[^,],%63[^,],%63[^,]", &iter,
                        &tau_col, &et, &er, &ef, em, rr, ps);
            const double p = std::atof(ps);
            if (p > best) {
                best = p;
                row.best_iter = iter;
            }
        }
        row.best_psnr = best;
        if (!opt.no_wall_time) row.wall_s = wall_s;
        summary.push_back(row);
    }

    const fs::path summary_path = fs::path(out_dir) / "summary.csv";
    std::ofstream os(summary_path, std::ios::binary);
    os << "value,best_psnr,best_iter,wall_s\n";
    for (const auto& row : summary) {
        char buf[160];
        if (row.wall_s) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d,%.3f\n", row.value, row.best_psnr,
                          row.best_iter, *row.wall_s);
        } else {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d,\n", row.value, row.best_psnr,
                          row.best_iter);
        }
        os << buf;
    }
    std::cout << "wrote " << summary_path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixed-geometry multiplicative denoising harness"};
    app.require_subcommand(1);
    app.set_config("--config");

    // ---- generate ----
    std::string gen_pattern = "halo";
    int gen_size = 256;
    std::string gen_out;
    auto* gen = app.add_subcommand("generate", "write a synthetic test image");
    gen->add_option("--pattern", gen_pattern, "halo | dartboard | shapes")
        ->check(CLI::IsMember({"halo", "dartboard", "shapes"}));
    gen->add_option("--size", gen_size, "image side length")->check(CLI::PositiveNumber);
    gen->add_option("--out", gen_out, "output PGM path")->required();

    // ---- add-noise ----
    std::string an_in, an_out, an_sidecar;
    double an_looks = 4.0;
    std::uint64_t an_seed = 0;
    auto* an = app.add_subcommand("add-noise", "apply multiplicative gamma noise");
    an->add_option("--in", an_in, "clean PGM")->required();
    an->add_option("--out", an_out, "noisy PGM")->required();
    an->add_option("--L", an_looks, "number of looks (noise level)");
    an->add_option("--seed", an_seed, "RNG seed");
    an->add_option("--sidecar", an_sidecar, "raw real-valued sidecar path (default <out>.mgd)");

    // ---- denoise ----
    DenoiseOptions dn;
    auto* de = app.add_subcommand("denoise", "run a solver on a noisy image");
    de->add_option("--in", dn.input, "noisy PGM (a <in>.mgd sidecar is preferred when present)")
        ->required();
    de->add_option("--sidecar", dn.sidecar, "explicit sidecar path for the input");
    de->add_option("--truth", dn.truth_path, "clean reference for PSNR/SSIM logging");
    de->add_option("--solver", dn.solver, "explicit | aos | sav1 | sav2")
        ->required()
        ->check(CLI::IsMember({"explicit", "aos", "sav1", "sav2"}));
    de->add_option("--out", dn.output, "restored PGM")->required();
    de->add_option("--log", dn.log_path, "per-iteration CSV");
    de->add_flag("--no-wall-time", dn.no_wall_time, "leave wall-clock cells empty (reproducible CSV)");
    de->add_option("--b", dn.b, "curvature weight");
    de->add_option("--eta", dn.eta, "fidelity weight");
    de->add_option("--sigma", dn.sigma, "indicator pre-smoothing scale");
    de->add_option("--p", dn.p, "indicator exponent");
    de->add_option("--alpha-const", dn.alpha_const, "use a constant indicator value in (0,1]");
    de->add_flag("--refresh-alpha", dn.refresh_alpha,
                 "recompute the indicator from the iterate each iteration");
    de->add_option("--tau", dn.tau, "time step (explicit: default 0.05, aos: default 2)");
    de->add_option("--max-iters", dn.max_iters, "iteration budget");
    de->add_option("--stop", dn.stop, "iters | rel | abs")
        ->check(CLI::IsMember({"iters", "rel", "abs"}));
    de->add_option("--eps-rel", dn.eps_rel, "relative-change stopping threshold");
    de->add_option("--eps-abs", dn.eps_abs, "absolute-change stopping threshold (RMS)");
    de->add_option("--gamma", dn.gamma, "SAV linear-split weight");
    de->add_option("--C", dn.C, "SAV non-negativity shift");
    de->add_option("--tau0", dn.tau0, "SAV initial step (default tau-min)");
    de->add_option("--tau-min", dn.tau_min, "SAV minimum step");
    de->add_option("--tau-max", dn.tau_max, "SAV maximum step");
    de->add_option("--rho", dn.rho, "SAV adaptive safety factor");
    de->add_option("--tol", dn.tol, "SAV adaptive reference tolerance");
    de->add_flag("--fixed-tau", dn.fixed_tau, "disable SAV adaptive stepping");

    // ---- evaluate ----
    std::string ev_ref, ev_cand;
    auto* ev = app.add_subcommand("evaluate", "print PSNR/SSIM of a restoration");
    ev->add_option("--ref", ev_ref, "reference PGM")->required();
    ev->add_option("--cand", ev_cand, "candidate PGM")->required();

    // ---- sweep ----
    std::string sw_axis = "tau";
    std::string sw_values;
    std::string sw_out_dir = "sweep";
    auto* sw = app.add_subcommand("sweep", "run denoise across a parameter axis");
    sw->add_option("--axis", sw_axis, "tau | b | eta | C")
        ->check(CLI::IsMember({"tau", "b", "eta", "C"}));
    sw->add_option("--values", sw_values, "comma-separated values")->required();
    sw->add_option("--out-dir", sw_out_dir, "directory for per-value runs and summary.csv");
    sw->add_option("--in", dn.input, "noisy PGM")->required();
    sw->add_option("--sidecar", dn.sidecar, "explicit sidecar path for the input");
    sw->add_option("--truth", dn.truth_path, "clean reference (required)")->required();
    sw->add_option("--solver", dn.solver, "explicit | aos | sav1 | sav2")
        ->check(CLI::IsMember({"explicit", "aos", "sav1", "sav2"}));
    sw->add_option("--b", dn.b, "curvature weight");
    sw->add_option("--eta", dn.eta, "fidelity weight");
    sw->add_option("--sigma", dn.sigma, "indicator pre-smoothing scale");
    sw->add_option("--p", dn.p, "indicator exponent");
    sw->add_option("--alpha-const", dn.alpha_const, "constant indicator value");
    sw->add_option("--max-iters", dn.max_iters, "iteration budget per run");
    sw->add_option("--gamma", dn.gamma, "SAV linear-split weight");
    sw->add_option("--C", dn.C, "SAV non-negativity shift");
    sw->add_option("--tau-min", dn.tau_min, "SAV minimum step");
    sw->add_option("--tau-max", dn.tau_max, "SAV maximum step");
    sw->add_flag("--no-wall-time", dn.no_wall_time, "leave wall-clock cells empty");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            write_pgm(make_pattern(gen_pattern, gen_size), gen_out);
            return 0;
        }
        if (an->parsed()) {
            if (!fs::exists(an_in)) {
                std::cerr << "error: no such file: " << an_in << "\n";
                return 1;
            }
            if (!(an_looks > 0.0)) {
                std::cerr << "error: --L must be > 0\n";
                return 2;
            }
            const ImageGrid clean = read_pgm(an_in);
            const ImageGrid noisy = apply_multiplicative_noise(clean, {an_looks, an_seed});
            write_pgm(noisy, an_out);
            write_sidecar(noisy, an_sidecar.empty() ? default_sidecar(an_out) : an_sidecar);
            return 0;
        }
        if (de->parsed()) {
            return run_denoise(dn);
        }
        if (ev->parsed()) {
            if (!fs::exists(ev_ref) || !fs::exists(ev_cand)) {
                std::cerr << "error: missing input file\n";
                return 1;
            }
            const ImageGrid ref = read_pgm(ev_ref);
            const ImageGrid cand = read_pgm(ev_cand);
            const QualityReport q = evaluate_quality(ref, cand);
            std::printf("PSNR: %s, SSIM: %.4f\n", format_psnr(q.psnr_db).c_str(), q.ssim);
            return 0;
        }
        if (sw->parsed()) {
            std::vector<double> values;
            std::stringstream ss(sw_values);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (!item.empty()) values.push_back(std::stod(item));
            }
            return run_sweep(dn, sw_axis, values, sw_out_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

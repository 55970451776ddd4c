#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dilated/cltsys.hpp"
#include "dilated/errors.hpp"
#include "dilated/measure.hpp"
#include "dilated/psd.hpp"
#include "dilated/quantale.hpp"
#include "dilated/serialize.hpp"
#include "dilated/vspace.hpp"

namespace {

using namespace dilated;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitMaxIter = 4;
constexpr int kExitUnbounded = 5;

unsigned default_seed() {
    if (const char* env = std::getenv("DILATED_SEED")) {
        try {
            return static_cast<unsigned>(std::stoul(env));
        } catch (...) {
            throw ConfigError("DILATED_SEED is not a number");
        }
    }
    return 42;
}

// Measure spec mini-grammar: dirac:<x> | rademacher | bernoulli:<p> |
// uniform:<a>,<b>,<n> | gaussian:<mean>,<var> | lattice:@file.json
Measure parse_measure(const std::string& spec) {
    auto colon = spec.find(':');
    std::string head = spec.substr(0, colon);
    std::string args = (colon == std::string::npos) ? "" : spec.substr(colon + 1);
    std::vector<double> nums;
    if (head != "lattice" && !args.empty()) {
        std::stringstream ss(args);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                nums.push_back(std::stod(item));
            } catch (...) {
                throw ConfigError("bad number in measure spec: " + item);
            }
        }
    }
    if (head == "dirac" && nums.size() == 1) return Measure(dirac({nums[0]}));
    if (head == "rademacher" && nums.empty()) return Measure(rademacher());
    if (head == "bernoulli" && nums.size() == 1) return Measure(bernoulli(nums[0]));
    if (head == "uniform" && nums.size() == 3)
        return Measure(uniform_lattice(nums[0], nums[1], static_cast<std::size_t>(nums[2])));
    if (head == "gaussian" && nums.size() == 2) {
        GaussianMeasure g;
        g.mean = {nums[0]};
        g.covariance = PsdMatrix::scalar(nums[1]);
        return Measure(g);
    }
    if (head == "lattice" && !args.empty() && args[0] == '@') {
        std::ifstream in(args.substr(1));
        if (!in) throw ConfigError("cannot open " + args.substr(1));
        json j = json::parse(in);
        return measure_from_json(j);
    }
    throw ConfigError("unrecognized measure spec: " + spec);
}

struct RunConfig {
    std::string measure = "rademacher";
    double l = 0.0;
    int iters = 20;
    double target_tol = 0.02;
    double grading_tol = 1e-8;
    unsigned seed = 42;
    int threads = 1;
    bool grid_dense = false;
    double grid_rmin = 1e-2;
    double grid_rmax = 1e2;
    std::size_t grid_radii = 64;
    std::string out_json = "report.json";
    std::string out_csv = "convergence.csv";
    double rescale_override = 0.0;
};

void add_run_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--measure", cfg.measure,
                    "initial measure: dirac:<x> | rademacher | bernoulli:<p> | "
                    "uniform:<a>,<b>,<n> | gaussian:<mean>,<var> | lattice:@file.json")
        ->capture_default_str();
    cmd->add_option("--l", cfg.l, "Fourier distance exponent")->capture_default_str();
    cmd->add_option("--iters", cfg.iters, "iteration cap")->capture_default_str();
    cmd->add_option("--target-tol", cfg.target_tol, "distance-to-target threshold for a converged verdict")
        ->capture_default_str();
    cmd->add_option("--grading-tol", cfg.grading_tol, "maximum allowed grading drift")
        ->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "RNG seed (default 42; env DILATED_SEED overrides)");
    cmd->add_option("--threads", cfg.threads, "worker threads for grid evaluation")
        ->capture_default_str();
    cmd->add_flag("--grid-dense", cfg.grid_dense, "double the dual-grid density");
    cmd->add_option("--grid-rmin", cfg.grid_rmin, "smallest dual radius")->capture_default_str();
    cmd->add_option("--grid-rmax", cfg.grid_rmax, "largest dual radius")->capture_default_str();
    cmd->add_option("--grid-radii", cfg.grid_radii, "number of dual radii")->capture_default_str();
    cmd->add_option("--out-json", cfg.out_json, "report output path")->capture_default_str();
    cmd->add_option("--out-csv", cfg.out_csv, "convergence table output path")->capture_default_str();
    cmd->add_option("--rescale", cfg.rescale_override,
                    "diagnostic: override the theta rescale factor (breaks grading preservation)");
}

DualGrid make_grid(const RunConfig& cfg, int dim) {
    std::size_t radii = cfg.grid_dense ? cfg.grid_radii * 2 : cfg.grid_radii;
    std::size_t dirs = cfg.grid_dense ? 28 : 14;
    DualGrid g = DualGrid::make(dim, cfg.grid_rmin, cfg.grid_rmax, radii, dirs, cfg.seed);
    g.threads = cfg.threads;
    return g;
}

void write_outputs(const RunConfig& cfg, const ConvergenceReport& report) {
    std::ofstream js(cfg.out_json);
    js << to_json(report).dump(2) << '\n';
    std::ofstream csv(cfg.out_csv);
    csv << report_to_csv(report);
}

int verdict_exit(const ConvergenceReport& report) {
    switch (report.verdict) {
        case Verdict::Converged: return kExitOk;
        case Verdict::Diverged: return kExitDiverged;
        default: return kExitMaxIter;
    }
}

int run_limit(Kind kind, const RunConfig& cfg) {
    double l = cfg.l != 0.0 ? cfg.l : (kind == Kind::CLT ? 2.5 : 1.5);
    Measure mu0 = parse_measure(cfg.measure);
    CltSystem sys = CltSystem::make(kind, l, make_grid(cfg, mu0.dim()));
    if (cfg.rescale_override > 0.0) {
        sys.rescale = cfg.rescale_override;
        sys.rescale_squared = cfg.rescale_override * cfg.rescale_override;
    }
    CentralLimitOptions opts;
    opts.target_tol = cfg.target_tol;
    opts.grading_tol = cfg.grading_tol;
    ConvergenceReport report = central_limit(sys, mu0, cfg.iters, opts);
    write_outputs(cfg, report);
    std::cout << kind_name(kind) << ": verdict=" << verdict_name(report.verdict)
              << " iterations=" << report.iterations
              << " final_d=" << report.distance_to_target.back() << '\n';
    return verdict_exit(report);
}

int run_distance(const RunConfig& cfg, const std::string& spec_a, const std::string& spec_b) {
    Measure a = parse_measure(spec_a);
    Measure b = parse_measure(spec_b);
    double l = cfg.l != 0.0 ? cfg.l : 2.5;
    DualGrid grid = make_grid(cfg, a.dim());
    double d = fourier_l_distance(a, b, l, grid);
    if (std::isinf(d))
        std::cout << "d_" << l << " = inf (moment gate: moments below order l differ)\n";
    else
        std::cout << "d_" << l << " = " << d << " (grid lower bound of the sup)\n";
    return kExitOk;
}

std::function<double()> make_sampler(const std::string& name, unsigned seed) {
    auto rng = std::make_shared<std::mt19937_64>(seed);
    auto unif01 = [rng]() { return static_cast<double>((*rng)() >> 11) * 0x1p-53; };
    if (name == "circle")
        return [unif01]() { return 2.0 * std::numbers::pi * unif01(); };
    if (name == "uniform01") return unif01;
    if (name == "twoatom")
        return [unif01]() { return unif01() < 0.5 ? -1.0 : 1.0; };
    throw ConfigError("unknown sampler: " + name + " (catalog: circle, uniform01, twoatom)");
}

// Observable catalog: cos | sin | identity | const:<c> | poly:<c0>,<c1>,...
std::function<double(double)> make_observable(const std::string& name) {
    if (name == "cos") return [](double x) { return std::cos(x); };
    if (name == "sin") return [](double x) { return std::sin(x); };
    if (name == "identity") return [](double x) { return x; };
    if (name.rfind("const:", 0) == 0) {
        double c = std::stod(name.substr(6));
        return [c](double) { return c; };
    }
    if (name.rfind("poly:", 0) == 0) {
        std::vector<double> coeffs;
        std::stringstream ss(name.substr(5));
        std::string item;
        while (std::getline(ss, item, ',')) coeffs.push_back(std::stod(item));
        return [coeffs](double x) {
            double acc = 0.0;
            for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
            return acc;
        };
    }
    throw ConfigError("unknown observable: " + name +
                      " (catalog: cos, sin, identity, const:<c>, poly:<coeffs>)");
}

int run_observable(const RunConfig& cfg, const std::string& sampler_name, const std::string& h_name,
                   std::size_t samples, std::size_t bins) {
    double l = cfg.l != 0.0 ? cfg.l : 2.5;
    CltSystem sys = CltSystem::make(Kind::CLT, l, make_grid(cfg, 1));
    ObservableOptions opts;
    opts.run.target_tol = cfg.target_tol;
    opts.run.grading_tol = cfg.grading_tol;
    auto sampler = make_sampler(sampler_name, cfg.seed);
    auto H = make_observable(h_name);
    ConvergenceReport report = observable_clt(sampler, H, samples, bins, sys, cfg.iters, opts);
    write_outputs(cfg, report);
    std::cout << "observable: verdict=" << verdict_name(report.verdict)
              << " iterations=" << report.iterations
              << " final_d=" << report.distance_to_target.back() << '\n';
    return verdict_exit(report);
}

// ---- selfcheck suites ----

bool suite_quantale(bool break_unit, std::string& detail) {
    for (auto inst :
         {QuantaleInstance::Boolean, QuantaleInstance::ExtRealMul, QuantaleInstance::Lawvere}) {
        Quantale q = make_quantale(inst);
        if (break_unit && inst == QuantaleInstance::ExtRealMul) {
            // Test hook: tensor = max has unit 1 only for arguments >= 1.
            q.tensor_fn = [](double a, double b) { return std::max(a, b); };
        }
        LawReport report = check_laws(q, default_samples(inst), 42);
        if (!report.all_passed()) {
            const LawResult* f = report.first_failure();
            detail = "instance " + std::to_string(static_cast<int>(inst)) + " law '" + f->law +
                     "' witness " + f->witness;
            return false;
        }
    }
    return true;
}

bool suite_metric(std::string& detail) {
    // Reflexivity and symmetry of the shipped distances; no triangle
    // inequality is assumed or checked here.
    DualGrid grid = DualGrid::make(1);
    std::vector<Measure> ms = {Measure(rademacher()), Measure(bernoulli(0.3)),
                               Measure(uniform_lattice(-1.0, 1.0, 9))};
    for (const auto& m : ms)
        if (fourier_l_distance(m, m, 2.5, grid) != 0.0) {
            detail = "fourier distance not reflexive";
            return false;
        }
    for (const auto& a : ms)
        for (const auto& b : ms) {
            double ab = fourier_l_distance(a, b, 1.5, grid);
            double ba = fourier_l_distance(b, a, 1.5, grid);
            if (!(ab == ba || (std::isinf(ab) && std::isinf(ba)))) {
                detail = "fourier distance not symmetric";
                return false;
            }
        }
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        auto rnd = [&]() { return static_cast<double>(rng() >> 11) * 0x1p-53 * 3.0; };
        PsdMatrix a = PsdMatrix::diagonal({rnd() + 0.1, rnd() + 0.1});
        PsdMatrix b = PsdMatrix::diagonal({rnd() + 0.1, rnd() + 0.1});
        if (std::abs(bures_wasserstein(a, b) - bures_wasserstein(b, a)) > 1e-12 ||
            bures_wasserstein(a, a) > 1e-10) {
            detail = "Bures-Wasserstein axiom failure";
            return false;
        }
    }
    return true;
}

bool suite_psd(std::string& detail) {
    std::mt19937_64 rng(11);
    auto rnd = [&]() { return static_cast<double>(rng() >> 11) * 0x1p-53 * 2.0 - 1.0; };
    for (int i = 0; i < 50; ++i) {
        std::vector<double> b = {rnd(), rnd(), rnd(), rnd()};
        PsdMatrix a = psd_pushforward(b, 2, PsdMatrix::identity(2));  // B B^T
        PsdMatrix s = sqrt_psd(a);
        if (psd_pushforward(s.entries(), 2, PsdMatrix::identity(2)).max_abs_diff(a) > 1e-9) {
            detail = "sqrt_psd(A)^2 != A";
            return false;
        }
        double c = 0.25 + 0.5 * (rnd() + 1.0);
        PsdMatrix a2 = psd_pushforward({rnd(), rnd(), rnd(), rnd()}, 2, PsdMatrix::identity(2));
        double lhs = bures_wasserstein(psd_dilate(c, a), psd_dilate(c, a2));
        double rhs = c * bures_wasserstein(a, a2);
        if (std::abs(lhs - rhs) > 1e-9) {
            detail = "Bures-Wasserstein homogeneity failure";
            return false;
        }
    }
    return true;
}

bool suite_theta(std::string& detail) {
    DualGrid grid = DualGrid::make(1);
    CltSystem clt = CltSystem::make(Kind::CLT, 2.5, grid);
    GaussianMeasure g;
    g.mean = {0.0};
    g.covariance = PsdMatrix::scalar(1.0);
    if (fourier_l_distance(theta(clt, Measure(g)), Measure(g), 2.5, grid) > 1e-10) {
        detail = "theta does not fix N(0,1)";
        return false;
    }
    CltSystem lln = CltSystem::make(Kind::LLN, 1.5, grid);
    Measure d = Measure(dirac({0.7}));
    if (fourier_l_distance(theta(lln, d), d, 1.5, grid) > 1e-10) {
        detail = "theta_LLN does not fix the Dirac";
        return false;
    }
    return true;
}

int run_selfcheck(const std::string& suite, bool break_unit) {
    struct Entry {
        std::string name;
        std::function<bool(std::string&)> run;
    };
    std::vector<Entry> suites = {
        {"quantale", [&](std::string& d) { return suite_quantale(break_unit, d); }},
        {"metric", [](std::string& d) { return suite_metric(d); }},
        {"psd", [](std::string& d) { return suite_psd(d); }},
        {"theta", [](std::string& d) { return suite_theta(d); }},
    };
    bool all = true;
    bool matched = false;
    for (auto& s : suites) {
        if (suite != "all" && suite != s.name) continue;
        matched = true;
        std::string detail;
        bool ok = s.run(detail);
        std::cout << s.name << ": " << (ok ? "pass" : "FAIL " + detail) << '\n';
        if (!ok) {
            all = false;
            break;  // report the first counterexample
        }
    }
    if (!matched) throw ConfigError("unknown suite: " + suite);
    return all ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixed-point central limits: rescaled self-convolution experiments"};
    app.require_subcommand(1);

    RunConfig cfg;
    try {
        cfg.seed = default_seed();
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    auto* clt = app.add_subcommand("clt", "central-limit iteration to the Gaussian");
    add_run_options(clt, cfg);

    auto* lln = app.add_subcommand("lln", "law-of-large-numbers iteration to the Dirac");
    add_run_options(lln, cfg);

    auto* dist = app.add_subcommand("distance", "Fourier l-distance between two measures");
    std::string spec_a, spec_b;
    dist->add_option("--a", spec_a, "first measure spec")->required();
    dist->add_option("--b", spec_b, "second measure spec")->required();
    add_run_options(dist, cfg);

    auto* obs = app.add_subcommand("observable", "CLT for a bounded observable of a sampler");
    std::string sampler_name = "circle";
    std::string h_name = "cos";
    std::size_t n_samples = 100000;
    std::size_t n_bins = 2048;
    obs->add_option("--sampler", sampler_name, "sampler catalog: circle, uniform01, twoatom")
        ->capture_default_str();
    obs->add_option("--H", h_name, "observable catalog: cos, sin, identity, const:<c>, poly:<coeffs>")
        ->capture_default_str();
    obs->add_option("--samples", n_samples, "Monte Carlo sample count")->capture_default_str();
    obs->add_option("--bins", n_bins, "histogram bins")->capture_default_str();
    add_run_options(obs, cfg);

    auto* check = app.add_subcommand("selfcheck", "run the algebraic and metric property suites");
    std::string suite = "all";
    bool break_unit = false;
    check->add_option("--suite", suite, "all, quantale, metric, psd, or theta")->capture_default_str();
    check->add_flag("--break-unit", break_unit, "test hook: inject a unit-law violation");

    CLI11_PARSE(app, argc, argv);

    try {
        if (clt->parsed()) return run_limit(Kind::CLT, cfg);
        if (lln->parsed()) return run_limit(Kind::LLN, cfg);
        if (dist->parsed()) return run_distance(cfg, spec_a, spec_b);
        if (obs->parsed()) return run_observable(cfg, sampler_name, h_name, n_samples, n_bins);
        if (check->parsed()) return run_selfcheck(suite, break_unit);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NotInDomain& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const UnboundedObservable& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUnbounded;
    } catch (const DivergenceDetected& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDiverged;
    } catch (const MaxIterationsExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitMaxIter;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}

// delaylog: command-line front end for the delay logistic map library.

#include "delaylog/cycle_detector.hpp"
#include "delaylog/errors.hpp"
#include "delaylog/io.hpp"
#include "delaylog/linear_stability.hpp"
#include "delaylog/lyapunov.hpp"
#include "delaylog/period_two.hpp"
#include "delaylog/recipes.hpp"
#include "delaylog/rng.hpp"
#include "delaylog/sweep.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace delaylog;

constexpr int kExitRecipeFailed = 1;
constexpr int kExitInvalidInput = 2;

char const* const kBudgets = R"(Budgets and defaults:
  orbit          --iters 1000, --transient 0
  detect-cycle   --transient 1000, --p-max 2048, --window 3*p-max,
                 --match-tol 1e-7; --iters defaults to the minimum the
                 detector needs (transient + 2*p-max + window)
  classify       10 seeds, --transient 1000 then --iters 100000 analysed
                 steps per seed (use --transient 100000 for long-period
                 hunting)
  lyapunov       --iters 1000000 total, --transient 1000, --renorm 1,
                 --chaos-tol 1e-3
  sweep          5 seeds per cell, --iters 100000 analysed steps per seed
  reproduce      recipe budgets are fixed: 1e5 transient + 1e5 analysed
                 steps for the high-period figures, 1e3 + 1e5 per Lyapunov
                 run for the table

When --z-1/--z0 are omitted, orbit, detect-cycle and lyapunov draw the
initial pair from the unit disk using --seed. Negative values need the
--flag=value form, e.g. --z0=-0.5+i. Complex values are written a+bi,
a-bi, bi, a or (re,im); components may be ratios such as 1/3.

Exit codes: 0 success, 1 recipe check failed, 2 invalid input.)";

struct Settings {
    std::string alpha = "0.5";
    std::string beta = "0.5";
    std::optional<std::string> z0;
    std::optional<std::string> z_minus1;
    std::int64_t iters = 0; // 0: the verb's default
    std::optional<std::int64_t> transient;
    std::uint64_t seed = 0;
    std::string out;
    std::string format;

    int p_max = 2048;
    double match_tol = 1e-7;
    std::int64_t window = 0;
    int seeds = 0;
    std::int64_t renorm = 1;
    double chaos_tol = kDefaultChaosTol;
    std::string trace;
    unsigned workers = 1;
    double guard = kDefaultGuardEpsilon;
    double tol_hyp = kDefaultHyperbolicTol;

    std::string target = "alpha";
    double re_min = -1.0, re_max = 1.0;
    int re_steps = 10;
    double im_min = -1.0, im_max = 1.0;
    int im_steps = 10;
    std::string fixed = "1";

    std::string recipe;
};

MapParameters params_of(Settings const& s)
{
    return {parse_complex(s.alpha), parse_complex(s.beta)};
}

/// Initial pair from the flags, or a unit-disk draw when they are absent.
std::pair<Complex, Complex> initial_pair(Settings const& s)
{
    CounterRng rng(s.seed, 0, 0);
    Complex const drawn_prev = rng.unit_disk();
    Complex const drawn_curr = rng.unit_disk();
    return {s.z_minus1 ? parse_complex(*s.z_minus1) : drawn_prev, s.z0 ? parse_complex(*s.z0) : drawn_curr};
}

OrbitSpec orbit_spec(Settings const& s, std::int64_t default_iters, std::int64_t default_transient)
{
    OrbitSpec spec;
    std::tie(spec.z_minus1, spec.z0) = initial_pair(s);
    spec.transient = s.transient.value_or(default_transient);
    spec.n_iterations = s.iters > 0 ? s.iters : default_iters;
    spec.guard_epsilon = s.guard;
    return spec;
}

std::string format_or(Settings const& s, std::string fallback)
{
    std::string f = s.format.empty() ? fallback : s.format;
    if (f != "csv" && f != "json")
        throw InvalidInputError("--format must be csv or json");
    return f;
}

void json_only(Settings const& s, char const* verb)
{
    if (format_or(s, "json") != "json")
        throw InvalidInputError(std::string(verb) + " writes JSON only");
}

template <class Writer>
void emit(Settings const& s, Writer&& write)
{
    if (s.out.empty()) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(s.out, std::ios::binary);
    if (!file)
        throw InvalidInputError("cannot open " + s.out + " for writing");
    write(file);
}

void emit_json(Settings const& s, Json const& j)
{
    emit(s, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

int run_orbit(Settings const& s)
{
    auto const params = params_of(s);
    Orbit const orbit = generate_orbit(params, orbit_spec(s, 1000, 0));
    if (format_or(s, "csv") == "csv")
        emit(s, [&](std::ostream& os) { write_orbit_csv(os, orbit); });
    else
        emit_json(s, orbit_to_json(params, orbit));
    if (!orbit.status.ok())
        std::cerr << "orbit stopped: " << orbit.status.to_string() << '\n';
    return 0;
}

int run_equilibria(Settings const& s)
{
    json_only(s, "equilibria");
    auto const params = params_of(s);
    auto const eq = equilibria(params);
    auto const ball = trap_ball_radius(params);
    Json j;
    j["alpha"] = complex_to_json(params.alpha);
    j["beta"] = complex_to_json(params.beta);
    Json list = Json::array({complex_to_json(eq.zero)});
    if (eq.nonzero)
        list.push_back(complex_to_json(*eq.nonzero));
    j["equilibria"] = std::move(list);
    j["trap_ball_radius"] = ball.radius ? Json(*ball.radius) : Json(nullptr);
    j["alpha_below_one"] = ball.alpha_below_one;
    j["beta_below_one"] = ball.beta_below_one;
    emit_json(s, j);
    return 0;
}

int run_stability(Settings const& s)
{
    json_only(s, "stability");
    Json reports = Json::array();
    for (auto const& r : analyze_equilibria(params_of(s), s.tol_hyp, s.guard))
        reports.push_back(stability_to_json(r));
    emit_json(s, reports);
    return 0;
}

int run_period2(Settings const& s)
{
    json_only(s, "period2");
    emit_json(s, period_two_to_json(params_of(s), s.tol_hyp, s.guard));
    return 0;
}

int run_detect_cycle(Settings const& s)
{
    auto const params = params_of(s);
    DetectOptions opt;
    opt.transient = s.transient.value_or(1000);
    opt.p_max = s.p_max;
    opt.match_tol = s.match_tol;
    opt.window = s.window;
    std::int64_t const needed = opt.transient + 2 * static_cast<std::int64_t>(opt.p_max) + opt.effective_window();
    Orbit const orbit = generate_orbit(params, orbit_spec(s, needed, 0));
    if (!orbit.status.ok())
        throw InvalidInputError("orbit did not complete: " + orbit.status.to_string());
    auto const report = detect_cycle(orbit, opt);
    if (format_or(s, "json") == "csv")
        emit(s, [&](std::ostream& os) { write_points_csv(os, report.representative_points); });
    else
        emit_json(s, cycle_to_json(report));
    return 0;
}

ClassifyBudgets budgets_of(Settings const& s)
{
    ClassifyBudgets b;
    b.transient = s.transient.value_or(1000);
    if (s.iters > 0)
        b.iterations = s.iters;
    b.p_max = s.p_max;
    b.match_tol = s.match_tol;
    b.window = s.window;
    b.chaos_tol = s.chaos_tol;
    b.guard_epsilon = s.guard;
    return b;
}

int run_classify(Settings const& s)
{
    json_only(s, "classify");
    ClassifyOptions opt;
    opt.n_seeds = s.seeds > 0 ? s.seeds : 10;
    opt.rng_seed = s.seed;
    opt.budgets = budgets_of(s);
    opt.workers = s.workers;
    emit_json(s, classification_to_json(classify_parameter_point(params_of(s), opt)));
    return 0;
}

int run_lyapunov(Settings const& s)
{
    LyapunovOptions opt;
    opt.renorm_interval = s.renorm;
    opt.chaos_tol = s.chaos_tol;
    auto const report = largest_lyapunov(params_of(s), orbit_spec(s, 1000000, 1000), opt);
    if (!s.trace.empty()) {
        std::ofstream file(s.trace, std::ios::binary);
        if (!file)
            throw InvalidInputError("cannot open " + s.trace + " for writing");
        write_trace_csv(file, report.running_estimates);
    }
    if (format_or(s, "json") == "csv")
        emit(s, [&](std::ostream& os) { write_trace_csv(os, report.running_estimates); });
    else
        emit_json(s, lyapunov_to_json(report, false));
    return 0;
}

int run_sweep_verb(Settings const& s)
{
    GridSpec grid;
    grid.re_min = s.re_min;
    grid.re_max = s.re_max;
    grid.re_steps = s.re_steps;
    grid.im_min = s.im_min;
    grid.im_max = s.im_max;
    grid.im_steps = s.im_steps;
    grid.fixed_other = parse_complex(s.fixed);
    grid.target = parse_sweep_target(s.target);

    SweepOptions opt;
    opt.n_seeds = s.seeds > 0 ? s.seeds : 5;
    opt.rng_seed = s.seed;
    opt.budgets = budgets_of(s);
    opt.workers = s.workers;
    auto const result = run_sweep(grid, opt);

    if (format_or(s, "csv") == "csv") {
        emit(s, [&](std::ostream& os) { write_sweep_csv(os, result); });
        return 0;
    }
    Json records = Json::array();
    for (auto const& r : result.records) {
        Json jr;
        jr["cell"] = complex_to_json(r.cell);
        jr["classification"] = r.classification.label();
        jr["lambda_max"] = r.lambda_max ? Json(*r.lambda_max) : Json(nullptr);
        jr["agree_fraction"] = r.agree_fraction;
        records.push_back(std::move(jr));
    }
    emit_json(s, Json{{"target", to_string(grid.target)}, {"records", std::move(records)}});
    return 0;
}

int run_reproduce(Settings const& s)
{
    std::vector<std::string> names;
    if (s.recipe.empty() || s.recipe == "all")
        names = recipe_names();
    else
        names.push_back(s.recipe);
    std::filesystem::path const dir = s.out.empty() ? "delaylog_out" : s.out;
    RecipeOptions opt;
    opt.rng_seed = s.seed == 0 ? 1 : s.seed;
    opt.workers = s.workers;

    bool all_passed = true;
    for (auto const& name : names) {
        auto const r = reproduce_recipe(name, dir, opt);
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << '\n';
        for (auto const& c : r.checks)
            std::cout << "  " << (c.passed ? "ok   " : "FAIL ") << c.name << ": " << c.detail << '\n';
        all_passed = all_passed && r.passed;
    }
    std::cout << "files written to " << dir.string() << '\n';
    return all_passed ? 0 : kExitRecipeFailed;
}

// Flags of a subcommand. Every verb gets the common set; the rest only
// where they mean something.
enum Extra : unsigned {
    kCycle = 1,
    kSeeds = 2,
    kLyap = 4,
    kGrid = 8,
    kWorkers = 16,
    kTol = 32,
};

void add_flags(CLI::App* cmd, Settings& s, unsigned extra)
{
    cmd->add_option("--alpha", s.alpha, "alpha as a+bi")->capture_default_str();
    cmd->add_option("--beta", s.beta, "beta as a+bi")->capture_default_str();
    cmd->add_option("--z0", s.z0, "initial value z_0");
    cmd->add_option("--z-1", s.z_minus1, "initial value z_-1");
    cmd->add_option("--iters", s.iters, "iteration budget (see below)")->check(CLI::PositiveNumber);
    cmd->add_option("--transient", s.transient, "steps discarded before analysis")->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", s.seed, "RNG seed for initial pairs")->capture_default_str();
    cmd->add_option("--out", s.out, "output file (directory for reproduce); stdout if omitted");
    cmd->add_option("--format", s.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--guard", s.guard, "forbidden-set guard epsilon")->capture_default_str();
    if (extra & kTol)
        cmd->add_option("--tol-hyp", s.tol_hyp, "unit-circle band for root moduli")->capture_default_str();
    if (extra & kCycle) {
        cmd->add_option("--p-max", s.p_max, "largest period searched")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--match-tol", s.match_tol, "point match tolerance")->capture_default_str();
        cmd->add_option("--window", s.window, "consecutive matches required (0: 3*p-max)")->capture_default_str();
    }
    if (extra & kSeeds)
        cmd->add_option("--seeds", s.seeds, "initial pairs per parameter point")->check(CLI::PositiveNumber);
    if (extra & kLyap) {
        cmd->add_option("--renorm", s.renorm, "tangent renormalisation interval")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--chaos-tol", s.chaos_tol, "exponent band treated as zero")->capture_default_str();
    }
    if (extra & kWorkers)
        cmd->add_option("--workers", s.workers, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    if (extra & kGrid) {
        cmd->add_option("--target", s.target, "swept parameter")->check(CLI::IsMember({"alpha", "beta"}))->capture_default_str();
        cmd->add_option("--re-min", s.re_min)->capture_default_str();
        cmd->add_option("--re-max", s.re_max)->capture_default_str();
        cmd->add_option("--re-steps", s.re_steps)->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--im-min", s.im_min)->capture_default_str();
        cmd->add_option("--im-max", s.im_max)->capture_default_str();
        cmd->add_option("--im-steps", s.im_steps)->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--fixed", s.fixed, "value of the parameter not swept")->capture_default_str();
    }
}

std::string config_token(Json const& v)
{
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return "(" + format_double(v[0].get<double>()) + "," + format_double(v[1].get<double>()) + ")";
    if (v.is_number_integer())
        return std::to_string(v.get<std::int64_t>());
    if (v.is_number())
        return format_double(v.get<double>());
    throw InvalidInputError("unsupported config value " + v.dump());
}

/// Pulls --config out of argv and turns the file into --key=value tokens
/// placed right after the verb, so flags typed later win.
std::vector<std::string> apply_config(CLI::App& app, std::vector<std::string> args)
{
    std::optional<std::string> path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (!path)
        return args;

    std::ifstream in(*path);
    if (!in)
        throw InvalidInputError("cannot read config " + *path);
    Json cfg;
    try {
        cfg = Json::parse(in);
    } catch (Json::exception const& e) {
        throw InvalidInputError("config " + *path + ": " + e.what());
    }
    if (!cfg.is_object())
        throw InvalidInputError("config must be a JSON object");

    std::size_t verb_at = 1;
    while (verb_at < args.size() && args[verb_at].rfind("-", 0) == 0)
        ++verb_at;
    if (verb_at == args.size())
        throw InvalidInputError("a subcommand is required");
    CLI::App* cmd = app.get_subcommand_no_throw(args[verb_at]);
    if (!cmd)
        return args; // CLI11 reports the unknown verb

    std::vector<std::string> tokens;
    for (auto const& [key, value] : cfg.items()) {
        bool known = false;
        for (auto const* sub : app.get_subcommands({}))
            known = known || sub->get_option_no_throw("--" + key) != nullptr;
        if (!known)
            throw InvalidInputError("unknown config key '" + key + "'");
        if (cmd->get_option_no_throw("--" + key))
            tokens.push_back("--" + key + "=" + config_token(value));
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(verb_at + 1), tokens.begin(), tokens.end());
    return args;
}

} // namespace

int main(int argc, char** argv)
{
    Settings s;
    CLI::App app{"Orbits, stability, cycles and Lyapunov exponents of z[n+1] = alpha*z[n]/(1+beta*z[n-1])"};
    app.footer(kBudgets);
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string config_path;
    app.add_option("--config", config_path, "JSON file of flag values; command-line flags override it");

    auto* orbit = app.add_subcommand("orbit", "iterate the map and export the orbit");
    add_flags(orbit, s, 0);
    auto* eq = app.add_subcommand("equilibria", "equilibria and the trap-ball radius");
    add_flags(eq, s, 0);
    auto* stab = app.add_subcommand("stability", "root-based stability of both equilibria");
    add_flags(stab, s, kTol);
    auto* p2 = app.add_subcommand("period2", "closed-form period-2 cycle and its stability");
    add_flags(p2, s, kTol);
    auto* det = app.add_subcommand("detect-cycle", "detect eventual periodicity of one orbit");
    add_flags(det, s, kCycle);
    auto* cls = app.add_subcommand("classify", "classify a parameter point over random initial pairs");
    add_flags(cls, s, kCycle | kSeeds | kLyap | kWorkers);
    auto* lyap = app.add_subcommand("lyapunov", "largest Lyapunov exponent of one orbit");
    add_flags(lyap, s, kLyap);
    lyap->add_option("--trace", s.trace, "also write the running estimates as CSV");
    auto* sweep = app.add_subcommand("sweep", "classify every cell of a parameter grid");
    add_flags(sweep, s, kCycle | kSeeds | kLyap | kWorkers | kGrid);
    auto* rep = app.add_subcommand("reproduce", "run a figure/table recipe (or all) and check it");
    add_flags(rep, s, kWorkers);
    std::string names = "all";
    for (auto const& n : recipe_names())
        names += ", " + n;
    rep->add_option("recipe,--recipe", s.recipe, "one of: " + names);

    try {
        std::vector<std::string> args(argv, argv + argc);
        args = apply_config(app, std::move(args));
        std::vector<char const*> cargs;
        for (auto const& a : args)
            cargs.push_back(a.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (CLI::ParseError const& e) {
        int const code = app.exit(e);
        return code == 0 ? 0 : kExitInvalidInput;
    } catch (Error const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    }

    try {
        if (orbit->parsed())
            return run_orbit(s);
        if (eq->parsed())
            return run_equilibria(s);
        if (stab->parsed())
            return run_stability(s);
        if (p2->parsed())
            return run_period2(s);
        if (det->parsed())
            return run_detect_cycle(s);
        if (cls->parsed())
            return run_classify(s);
        if (lyap->parsed())
            return run_lyapunov(s);
        if (sweep->parsed())
            return run_sweep_verb(s);
        return run_reproduce(s);
    } catch (RecipeFailure const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRecipeFailed;
    } catch (InvalidInputError const& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (DegenerateError const& e) {
        std::cerr << "degenerate parameters: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (InsufficientDataError const& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (Error const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRecipeFailed;
    }
}

// Acceptance gate: one line per criterion, nonzero exit if any fails.
//   acceptance            run all twelve
//   acceptance --only N   run criterion N

#include "oracles.hpp"

#include "delaylog/cycle_detector.hpp"
#include "delaylog/errors.hpp"
#include "delaylog/io.hpp"
#include "delaylog/linear_stability.hpp"
#include "delaylog/lyapunov.hpp"
#include "delaylog/parallel.hpp"
#include "delaylog/period_two.hpp"
#include "delaylog/rng.hpp"
#include "delaylog/sweep.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace delaylog;
using namespace std::complex_literals;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int digits = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

unsigned hardware_workers()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

double nearest(std::vector<Complex> const& found, Complex z)
{
    double best = std::numeric_limits<double>::infinity();
    for (auto f : found)
        best = std::min(best, std::abs(f - z));
    return best;
}

struct PeriodTwoCase {
    MapParameters params;
    Complex phi, psi;
    double abs_chi, abs_lambda;
    bool stable;
};

Outcome period_two_case(PeriodTwoCase const& c)
{
    auto const t0 = Clock::now();
    auto const cycles = period_two_cycles(c.params);
    if (!cycles)
        return {false, "no cycle"};
    auto const jac = jacobian_t2(c.params, (*cycles)[0]);
    auto const st = period_two_stability(jac);
    double const elapsed = seconds_since(t0);

    auto const& cyc = (*cycles)[0];
    double const dphi = std::abs(cyc.phi - c.phi);
    double const dpsi = std::abs(cyc.psi - c.psi);
    double const chi = std::abs(jac.chi);
    double const lam = std::abs(jac.lambda_det);
    bool const ok_points = dphi <= 1e-5 && dpsi <= 1e-5;
    bool const ok_chi = std::abs(chi - c.abs_chi) <= 1e-4;
    bool const ok_lam = std::abs(lam - c.abs_lambda) <= 1e-4;
    bool const ok_verdict = st.modulus_test_stable == c.stable;
    bool const ok_time = elapsed < 1e-3;
    std::ostringstream os;
    os << "|dphi|=" << fmt(dphi, 3) << " |dpsi|=" << fmt(dpsi, 3) << (ok_points ? "" : " [points off]")
       << "; |chi|=" << fmt(chi) << " want " << fmt(c.abs_chi) << (ok_chi ? "" : " [off]")
       << "; |lambda_det|=" << fmt(lam) << " want " << fmt(c.abs_lambda) << (ok_lam ? "" : " [off]")
       << "; modulus test " << (st.modulus_test_stable ? "stable" : "unstable") << " want "
       << (c.stable ? "stable" : "unstable") << (ok_verdict ? "" : " [off]") << "; eigenvalue test "
       << to_string(st.eigen_classification) << "; " << fmt(elapsed * 1e3, 3) << " ms";
    return {ok_points && ok_chi && ok_lam && ok_verdict && ok_time, os.str()};
}

Outcome criterion1()
{
    return period_two_case({{1i, 2.0 + 3i}, -0.294567 + 0.313317i, -0.0900486 - 0.236394i, 1.38112, 0.689678, true});
}

Outcome criterion2()
{
    return period_two_case(
        {{1.0 + 1i, 2.0 + 3i}, -0.168166 + 0.534411i, -0.370295 - 0.226718i, 1.5, 1.58114, false});
}

Outcome listed_cycle(MapParameters const& params, std::vector<Complex> const& listed, int period, bool check_points)
{
    auto const t0 = Clock::now();
    RefineOptions ropt;
    ropt.p_max = 12;
    auto const pt = refine_periodic_point(params, listed[0], listed[1], ropt);
    DetectOptions dopt;
    dopt.transient = 0;
    dopt.p_max = 12;
    OrbitSpec spec;
    spec.z_minus1 = pt ? pt->z_prev : listed[0];
    spec.z0 = pt ? pt->z_curr : listed[1];
    spec.n_iterations = 2 * dopt.p_max + dopt.effective_window();
    Orbit const orbit = generate_orbit(params, spec);
    CycleReport report;
    if (orbit.status.ok())
        report = detect_cycle(orbit, dopt);
    double const elapsed = seconds_since(t0);

    double dist = 0.0;
    for (auto z : listed)
        dist = std::max(dist, nearest(report.representative_points, z));
    bool const ok_period = report.detected && report.period == period;
    bool const ok_points = !check_points || dist <= 1e-3;
    std::ostringstream os;
    os << "seed moved " << (pt ? fmt(pt->distance_from_seed, 3) : std::string("(no refinement)"))
       << "; detected period " << report.period << " want " << period << "; max distance to listed points "
       << fmt(dist, 3) << "; " << fmt(elapsed, 3) << " s";
    return {ok_period && ok_points && elapsed < 1.0, os.str()};
}

Outcome criterion3()
{
    return listed_cycle({1i, 2.0 + 3i}, {0.316268 + 0.129975i, -0.288941 + 0.157085i, -0.181173 - 0.056291i}, 3,
                        true);
}

Outcome criterion4()
{
    return listed_cycle({1.0 / 3.0 + 1i, 2.0 + 1i},
                        {-0.0197446 - 1.28723i, 1.03398 + 0.925847i, -0.406487 + 0.128166i,
                         -0.125003 - 0.00142325i, 0.63328 - 0.516259i, 0.83925 + 0.756558i, -0.223017 + 0.36021i,
                         -0.116754 + 0.0893373i, -0.239031 + 0.16474i, -0.382611 - 0.236912i},
                        10, false);
}

Outcome criterion5()
{
    bool all = true;
    std::ostringstream os;
    for (auto [alpha, period] : {std::pair{15.0 + 26i, 55}, std::pair{55.0 + 95i, 199}}) {
        auto const t0 = Clock::now();
        ClassifyOptions opt;
        opt.n_seeds = 10;
        opt.rng_seed = 1;
        opt.budgets.transient = 100000;
        opt.budgets.iterations = 100000;
        opt.budgets.p_max = 2048;
        opt.workers = hardware_workers();
        auto const cls = classify_parameter_point({alpha, 1.0}, opt);
        double const elapsed = seconds_since(t0);
        PointVerdict const want{VerdictKind::Periodic, period};
        auto const hits = std::count_if(cls.seeds.begin(), cls.seeds.end(),
                                        [&](SeedOutcome const& s) { return s.verdict == want; });
        bool const ok = hits >= 8 && elapsed < 60.0;
        all = all && ok;
        os << "alpha=" << format_complex(alpha) << ": " << hits << "/10 " << want.label() << " (majority "
           << cls.plurality.label() << "), " << fmt(elapsed, 3) << " s; ";
    }
    return {all, os.str()};
}

Outcome criterion6()
{
    auto const t0 = Clock::now();
    std::vector<Complex> const alphas{8.0 + 43i, 1.0 + 97i, 6.0 + 53i, 12.0 + 50i};
    constexpr int kSeeds = 20;
    bool all = true;
    std::ostringstream os;
    for (std::size_t row = 0; row < alphas.size(); ++row) {
        std::vector<double> lambdas(kSeeds, std::numeric_limits<double>::quiet_NaN());
        parallel_for(kSeeds, hardware_workers(), [&](std::size_t i) {
            CounterRng rng(1, row, i);
            OrbitSpec spec;
            spec.z_minus1 = rng.unit_disk();
            spec.z0 = rng.unit_disk();
            spec.transient = 1000;
            spec.n_iterations = spec.transient + 100000;
            LyapunovOptions lopt;
            lopt.keep_trace = false;
            try {
                lambdas[i] = largest_lyapunov({alphas[row], 1.0}, spec, lopt).lambda_max;
            } catch (Error const&) {
            }
        });
        int positive = 0;
        int in_band = 0;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (double l : lambdas) {
            positive += l > 0.0;
            in_band += l >= 0.1 && l <= 3.5;
            if (std::isfinite(l)) {
                lo = std::min(lo, l);
                hi = std::max(hi, l);
            }
        }
        all = all && positive >= 18 && in_band >= 18;
        os << "alpha=" << format_complex(alphas[row]) << ": " << positive << "/20 positive, " << in_band
           << "/20 in [0.1,3.5], range [" << fmt(lo, 3) << ", " << fmt(hi, 3) << "]; ";
    }
    double const elapsed = seconds_since(t0);
    os << fmt(elapsed, 3) << " s";
    return {all && elapsed < 120.0, os.str()};
}

Outcome criterion7()
{
    auto const t0 = Clock::now();
    std::mt19937_64 g(7);
    double const tol = kDefaultHyperbolicTol;
    int mismatches = 0;
    int on_circle = 0;
    for (int k = 0; k < 10000; ++k) {
        Complex alpha = oracle::random_in_disk(g, 2.0);
        if (k % 20 == 0)
            alpha = std::polar(1.0, std::arg(alpha)); // exercise the band itself
        auto const rep = classify(char_poly_zero_eq({alpha, 1.0}), tol);
        double const m = std::abs(alpha);
        Stability want = Stability::Unstable;
        if (m < 1.0 - tol)
            want = Stability::LocallyAsymptoticallyStable;
        else if (std::abs(m - 1.0) <= tol)
            want = Stability::NonHyperbolic;
        on_circle += want == Stability::NonHyperbolic;
        mismatches += rep.classification != want;
    }
    double const elapsed = seconds_since(t0);
    return {mismatches == 0 && elapsed < 1.0, std::to_string(mismatches) + " mismatches in 10000 (" +
                                                  std::to_string(on_circle) + " on the unit circle); " +
                                                  fmt(elapsed, 3) + " s"};
}

Outcome criterion8()
{
    auto const t0 = Clock::now();
    std::mt19937_64 g(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int draws = 0;
    int escapes = 0;
    while (draws < 1000) {
        Complex const alpha = oracle::random_in_disk(g, 1.0);
        Complex const beta = oracle::random_in_disk(g, 2.0);
        auto const ball = trap_ball_radius({alpha, beta});
        if (!ball.radius)
            continue;
        double const eps = *ball.radius * u(g);
        if (!(eps > 0.0))
            continue;
        Complex const zc = oracle::random_in_disk(g, eps);
        Complex const zp = oracle::random_in_disk(g, eps);
        ++draws;
        escapes += !(std::abs(iterate_step({alpha, beta}, zc, zp)) < eps);
    }
    double const elapsed = seconds_since(t0);
    return {escapes == 0 && elapsed < 1.0,
            std::to_string(escapes) + " escapes in 1000 draws; " + fmt(elapsed, 3) + " s"};
}

Outcome criterion9()
{
    auto const t0 = Clock::now();
    std::mt19937_64 g(9);
    std::uniform_real_distribution<double> mod(0.5, 3.0);
    std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
    int draws = 0;
    int roots = 0;
    int mismatched = 0;
    int empty_draws = 0;
    double worst = 0.0;
    while (draws < 50) {
        MapParameters const p{oracle::random_complex(g, -3, 3), std::polar(mod(g), ang(g))};
        auto const cycles = period_two_cycles(p);
        if (!cycles)
            continue;
        ++draws;
        auto const& c = (*cycles)[0];
        Complex const z2 = (p.alpha - 1.0) / p.beta;
        // fixed points of T itself are deflated away so Newton looks elsewhere
        std::vector<oracle::Vec4> const fixed_by_map{oracle::realify(0.0, 0.0), oracle::realify(z2, z2)};
        double const radius = 2.0 * std::max(1.0, std::abs(1.0 + p.alpha) / std::abs(p.beta));
        int found = 0;
        for (int start = 0; start < 100; ++start) {
            auto const x = oracle::newton_fixed_point(
                p, oracle::realify(oracle::random_in_disk(g, radius), oracle::random_in_disk(g, radius)), 2,
                fixed_by_map);
            if (!x)
                continue;
            Complex const u{(*x)[0], (*x)[1]};
            Complex const v{(*x)[2], (*x)[3]};
            double const scale = 1.0 + std::abs(u) + std::abs(v);
            bool const fixed_by_t =
                std::abs(u - v) < 1e-6 * scale && (std::abs(u) < 1e-6 * scale || std::abs(u - z2) < 1e-6 * scale);
            if (fixed_by_t)
                continue;
            ++found;
            double const err = std::min(std::max(std::abs(u - c.phi), std::abs(v - c.psi)),
                                        std::max(std::abs(u - c.psi), std::abs(v - c.phi))) /
                               scale;
            worst = std::max(worst, err);
            mismatched += err > 1e-8;
        }
        roots += found;
        empty_draws += found == 0;
    }
    double const elapsed = seconds_since(t0);
    std::ostringstream os;
    os << roots << " period-2 roots from 5000 starts over 50 draws, " << mismatched
       << " off the closed form (worst relative " << fmt(worst, 3) << "), " << empty_draws
       << " draws with no root; " << fmt(elapsed, 3) << " s";
    return {mismatched == 0 && empty_draws == 0 && elapsed < 30.0, os.str()};
}

Outcome criterion10()
{
    auto const t0 = Clock::now();
    std::mt19937_64 g(10);
    std::uniform_real_distribution<double> mod(0.5, 3.0);
    std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
    int instances = 0;
    int failures = 0;
    double worst = 0.0;
    while (instances < 100) {
        MapParameters const p{oracle::random_complex(g, -3, 3), std::polar(mod(g), ang(g))};
        auto const cycles = period_two_cycles(p);
        if (!cycles)
            continue;
        auto const& c = (*cycles)[instances % 2];
        ++instances;
        auto const jac = jacobian_t2(p, c);
        oracle::Mat4 analytic{};
        oracle::put_block(analytic, 0, 0, jac.g_u);
        oracle::put_block(analytic, 0, 2, jac.g_v);
        oracle::put_block(analytic, 2, 0, jac.h_u);
        oracle::put_block(analytic, 2, 2, jac.h_v);
        auto const fd = oracle::fd_jacobian(p, oracle::realify(c.phi, c.psi), 2, 1e-6);
        double big = 0.0;
        for (auto const& row : analytic)
            for (double v : row)
                big = std::max(big, std::abs(v));
        double err = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                err = std::max(err, std::abs(fd[i][j] - analytic[i][j]) / std::max(1.0, big));
        worst = std::max(worst, err);
        failures += err > 1e-6;
    }
    double const elapsed = seconds_since(t0);
    return {failures == 0 && elapsed < 5.0, std::to_string(failures) + " of 100 instances off; worst relative " +
                                                fmt(worst, 3) + "; " + fmt(elapsed, 3) + " s"};
}

Outcome criterion11()
{
    auto const t0 = Clock::now();
    std::mt19937_64 g(11);
    double const want = std::log(0.5);
    double worst = 0.0;
    std::string values;
    for (int k = 0; k < 3; ++k) {
        OrbitSpec spec;
        spec.z_minus1 = oracle::random_in_disk(g, 0.1);
        spec.z0 = oracle::random_in_disk(g, 0.1);
        spec.n_iterations = 1000000;
        LyapunovOptions lopt;
        lopt.keep_trace = false;
        double const l = largest_lyapunov({0.5, 0.5}, spec, lopt).lambda_max;
        worst = std::max(worst, std::abs(l - want));
        values += (values.empty() ? "" : ", ") + fmt(l, 8);
    }
    double const elapsed = seconds_since(t0);
    return {worst <= 0.01 && elapsed < 5.0, "lambda_max " + values + " vs ln 0.5 = " + fmt(want, 8) +
                                                "; worst error " + fmt(worst, 3) + "; " + fmt(elapsed, 3) + " s"};
}

Outcome criterion12()
{
    namespace fs = std::filesystem;
    GridSpec grid;
    grid.re_min = 0.0;
    grid.re_max = 20.0;
    grid.re_steps = 8;
    grid.im_min = 0.0;
    grid.im_max = 50.0;
    grid.im_steps = 6;
    grid.fixed_other = 1.0;
    SweepOptions opt;
    opt.n_seeds = 3;
    opt.rng_seed = 12;
    opt.budgets.iterations = 20000;
    opt.budgets.p_max = 256;

    fs::path const dir = fs::temp_directory_path() / "delaylog_acceptance_12";
    fs::create_directories(dir);
    auto write = [&](unsigned workers, std::string const& name) {
        opt.workers = workers;
        auto const result = run_sweep(grid, opt);
        std::ofstream out(dir / name, std::ios::binary);
        write_sweep_csv(out, result);
    };
    auto slurp = [&](std::string const& name) {
        std::ifstream in(dir / name, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    auto const t0 = Clock::now();
    write(1, "run1.csv");
    write(1, "run2.csv");
    write(8, "run8.csv");
    double const elapsed = seconds_since(t0);
    std::string const a = slurp("run1.csv");
    bool const same_twice = a == slurp("run2.csv");
    bool const same_workers = a == slurp("run8.csv");
    std::ostringstream os;
    os << "48-cell sweep: rerun " << (same_twice ? "identical" : "DIFFERS") << ", workers 1 vs 8 "
       << (same_workers ? "identical" : "DIFFERS") << " (" << a.size() << " bytes); " << fmt(elapsed, 3) << " s";
    return {same_twice && same_workers && !a.empty(), os.str()};
}

struct Criterion {
    char const* title;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv)
{
    std::vector<Criterion> const criteria{
        {"period-2 closed form, alpha=i, beta=2+3i", criterion1},
        {"period-2 closed form, alpha=1+i, beta=2+3i", criterion2},
        {"period-3 cycle at alpha=i, beta=2+3i", criterion3},
        {"period-10 cycle at alpha=1/3+i, beta=2+i", criterion4},
        {"periods 55 and 199 for beta=1", criterion5},
        {"positive Lyapunov exponents for the four chaotic alphas", criterion6},
        {"zero-equilibrium |alpha| trichotomy", criterion7},
        {"trap ball", criterion8},
        {"realified Newton reproduces the period-2 closed form", criterion9},
        {"T^2 Jacobian against finite differences", criterion10},
        {"Lyapunov calibration at alpha=beta=0.5", criterion11},
        {"sweep determinism", criterion12},
    };

    CLI::App app{"acceptance criteria"};
    int only = 0;
    app.add_option("--only", only, "run a single criterion")->check(CLI::Range(1, static_cast<int>(criteria.size())));
    CLI11_PARSE(app, argc, argv);

    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        if (only != 0 && static_cast<int>(k) + 1 != only)
            continue;
        Outcome o;
        try {
            o = criteria[k].run();
        } catch (std::exception const& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s [%zu] %s: %s\n", o.passed ? "PASS" : "FAIL", k + 1, criteria[k].title, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.passed;
    }
    return failed == 0 ? 0 : 1;
}

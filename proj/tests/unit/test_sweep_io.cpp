#include "doctest.h"
#include "oracles.hpp"

#include "delaylog/errors.hpp"
#include "delaylog/io.hpp"
#include "delaylog/sweep.hpp"

#include <clocale>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

using namespace delaylog;
using namespace std::complex_literals;

namespace {

std::string sweep_text(GridSpec const& grid, SweepOptions const& opt)
{
    std::ostringstream os;
    write_sweep_csv(os, run_sweep(grid, opt));
    return os.str();
}

} // namespace

TEST_CASE("parse_complex accepted forms")
{
    CHECK(parse_complex("1+2i") == 1.0 + 2i);
    CHECK(parse_complex("1-2i") == 1.0 - 2i);
    CHECK(parse_complex("-3.5i") == -3.5i);
    CHECK(parse_complex("2.25") == Complex{2.25, 0.0});
    CHECK(parse_complex("i") == 1i);
    CHECK(parse_complex("-i") == -1i);
    CHECK(parse_complex("(15, 26)") == 15.0 + 26i);
    CHECK(parse_complex("(-356.366,-194.0009)") == -356.366 - 194.0009i);
    CHECK(parse_complex("1e-3+2E+2i") == 1e-3 + 200i);
    CHECK(parse_complex("-1e-3-2e-2j") == -1e-3 - 2e-2i);
    CHECK(parse_complex(" 1/3 ") == Complex{1.0 / 3.0, 0.0});
    CHECK(parse_complex("1/3+i") == 1.0 / 3.0 + 1i);
    CHECK(parse_complex("-1/4-2/5i") == -0.25 - 0.4i);
    CHECK(parse_complex("+4-i") == 4.0 - 1i);

    for (char const* bad : {"", "abc", "1+", "1+2", "(1,2", "1+2i+3i", "nan", "inf", "1..2", "1/0"})
        CHECK_THROWS_AS(parse_complex(bad), InvalidInputError);
}

TEST_CASE("format_complex round-trips exactly")
{
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> e(-300, 300);
    for (int trial = 0; trial < 5000; ++trial) {
        Complex const z{std::pow(10.0, e(g)) * (trial % 2 ? 1 : -1), std::pow(10.0, e(g)) * (trial % 3 ? 1 : -1)};
        CHECK(parse_complex(format_complex(z)) == z);
    }
    CHECK(format_complex(1.0 + 2i) == "1+2i");
    CHECK(format_complex(0.1 - 0.5i) == "0.10000000000000001-0.5i");
    CHECK(format_complex({-0.0, -0.0}) == "-0-0i");
    CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("number formatting ignores the C locale")
{
    char const* const set = std::setlocale(LC_NUMERIC, "de_DE.UTF-8");
    CHECK(format_double(1.5) == "1.5");
    CHECK(parse_double("1.5") == 1.5);
    std::setlocale(LC_NUMERIC, "C");
    if (!set)
        MESSAGE("de_DE locale not installed; checked the default locale only");
}

TEST_CASE("orbit CSV and JSON round-trip")
{
    MapParameters const p{8.0 + 43i, 1.0};
    OrbitSpec spec;
    spec.z_minus1 = 0.1 - 0.3i;
    spec.z0 = -0.4 + 0.2i;
    spec.n_iterations = 500;
    Orbit const o = generate_orbit(p, spec);

    std::stringstream csv;
    write_orbit_csv(csv, o);
    CHECK(csv.str().rfind("n,re,im\n-1,", 0) == 0);
    CHECK(read_orbit_csv(csv) == o.points);

    MapParameters back{};
    Json const j = orbit_to_json(p, o);
    CHECK(orbit_from_json(Json::parse(j.dump()), &back) == o);
    CHECK(back.alpha == p.alpha);
    CHECK(back.beta == p.beta);
    CHECK(j["status"] == "Completed");

    OrbitSpec bad = spec;
    bad.z_minus1 = -1.0;
    bad.z0 = 0.5;
    Orbit const u = generate_orbit({2.0, 1.0}, bad);
    Orbit const u2 = orbit_from_json(Json::parse(orbit_to_json({2.0, 1.0}, u).dump()));
    CHECK(u2 == u);
    CHECK(u2.status == OrbitStatus::undefined_at(1));
}

TEST_CASE("points and trace CSV round-trip")
{
    std::vector<Complex> const pts{0.316268 + 0.129975i, -0.288941 + 0.157085i, -1e-300 - 1e300i};
    std::stringstream a;
    write_points_csv(a, pts);
    CHECK(a.str().rfind("k,re,im\n0,", 0) == 0);
    CHECK(read_points_csv(a) == pts);

    std::vector<double> const tr{-0.5, 0.1, 1.0 / 3.0};
    std::stringstream b;
    write_trace_csv(b, tr);
    CHECK(b.str().rfind("k,estimate\n", 0) == 0);
    CHECK(read_trace_csv(b) == tr);

    std::stringstream broken("k,re,im\n0,1.0\n");
    CHECK_THROWS_AS(read_points_csv(broken), InvalidInputError);
}

TEST_CASE("report JSON round-trips")
{
    for (auto const& rep : analyze_equilibria({1i, 2.0 + 3i})) {
        auto const back = stability_from_json(Json::parse(stability_to_json(rep).dump()));
        CHECK(back.equilibrium == rep.equilibrium);
        CHECK(back.roots == rep.roots);
        CHECK(back.root_moduli == rep.root_moduli);
        CHECK(back.classification == rep.classification);
        CHECK(back.band_verdict == rep.band_verdict);
        CHECK(back.agreement == rep.agreement);
    }

    OrbitSpec spec;
    spec.z_minus1 = 0.1 + 0.2i;
    spec.z0 = -0.2 + 0.05i;
    spec.n_iterations = 3000;
    DetectOptions dopt;
    dopt.p_max = 64;
    auto const cyc = detect_cycle(generate_orbit({1.0 / 3.0 + 1i, 2.0 + 1i}, spec), dopt);
    CHECK(cycle_from_json(Json::parse(cycle_to_json(cyc).dump())) == cyc);

    spec.n_iterations = 12000;
    auto const lyap = largest_lyapunov({6.0 + 53i, 1.0}, spec);
    CHECK(lyapunov_from_json(Json::parse(lyapunov_to_json(lyap).dump())) == lyap);

    LyapunovReport collapsed;
    collapsed.lambda_max = -std::numeric_limits<double>::infinity();
    collapsed.verdict = ChaosVerdict::NonChaotic;
    CHECK(lyapunov_from_json(Json::parse(lyapunov_to_json(collapsed).dump())) == collapsed);
}

TEST_CASE("period-2 JSON carries both verdicts")
{
    Json const j = period_two_to_json({1.0 + 1i, 2.0 + 3i});
    CHECK(j["exists"] == true);
    CHECK(j["jacobian"]["abs_chi"].get<double>() == doctest::Approx(1.5).epsilon(1e-5));
    CHECK(j["stability"]["modulus_test_stable"] == false);
    CHECK(period_two_to_json({1.0 / 3.0, 1.0})["exists"] == false);
}

TEST_CASE("grid geometry and validation")
{
    GridSpec g;
    g.re_min = 0.0;
    g.re_max = 4.0;
    g.re_steps = 4;
    g.im_min = -1.0;
    g.im_max = 1.0;
    g.im_steps = 2;
    g.fixed_other = 2.0 + 1i;
    CHECK(g.cell_center(0, 0) == 0.5 - 0.5i);
    CHECK(g.cell_center(3, 1) == 3.5 + 0.5i);
    CHECK(g.params_at(1.0 + 1i).alpha == 1.0 + 1i);
    CHECK(g.params_at(1.0 + 1i).beta == 2.0 + 1i);
    g.target = SweepTarget::Beta;
    CHECK(g.params_at(1.0 + 1i).alpha == 2.0 + 1i);
    CHECK(g.params_at(1.0 + 1i).beta == 1.0 + 1i);
    CHECK(parse_sweep_target("beta") == SweepTarget::Beta);

    GridSpec bad = g;
    bad.re_max = bad.re_min;
    CHECK_THROWS_AS(bad.validate(), InvalidInputError);
    bad = g;
    bad.im_steps = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidInputError);
    bad = g;
    bad.max_cells = 7;
    CHECK_THROWS_AS(bad.validate(), InvalidInputError);
}

TEST_CASE("single-cell sweeps")
{
    SweepOptions opt;
    opt.n_seeds = 3;
    opt.budgets.iterations = 20000;
    opt.budgets.p_max = 256;

    GridSpec g;
    g.re_min = 0.49;
    g.re_max = 0.51;
    g.im_min = -0.01;
    g.im_max = 0.01;
    g.fixed_other = 0.5;
    auto const sink = run_sweep(g, opt);
    REQUIRE(sink.records.size() == 1);
    CHECK(sink.records[0].cell == Complex{0.5, 0.0});
    CHECK(sink.records[0].classification.kind == VerdictKind::ConvergentToEquilibrium);

    g.re_min = 7.99;
    g.re_max = 8.01;
    g.im_min = 42.99;
    g.im_max = 43.01;
    g.fixed_other = 1.0;
    auto const chaos = run_sweep(g, opt);
    CHECK(chaos.records[0].classification.kind == VerdictKind::Chaotic);
}

TEST_CASE("sweep output is identical across runs and worker counts")
{
    GridSpec g;
    g.re_min = -2.0;
    g.re_max = 2.0;
    g.re_steps = 6;
    g.im_min = -1.5;
    g.im_max = 1.5;
    g.im_steps = 5;
    g.fixed_other = 1.0;
    SweepOptions opt;
    opt.n_seeds = 3;
    opt.rng_seed = 9;
    opt.budgets.iterations = 12000;
    opt.budgets.p_max = 128;

    opt.workers = 1;
    std::string const first = sweep_text(g, opt);
    std::string const second = sweep_text(g, opt);
    opt.workers = 8;
    std::string const parallel = sweep_text(g, opt);
    CHECK(first == second);
    CHECK(first == parallel);

    std::istringstream in(first);
    auto const records = read_sweep_csv(in);
    auto const direct = run_sweep(g, opt).records;
    CHECK(records == direct);
    CHECK(records.size() == 30);
    // row-major: real index varies fastest
    CHECK(records[0].cell.imag() == records[5].cell.imag());
    CHECK(records[0].cell.real() < records[1].cell.real());
    CHECK(records[6].cell.imag() > records[0].cell.imag());

    opt.rng_seed = 10;
    CHECK(sweep_text(g, opt) != first);
}

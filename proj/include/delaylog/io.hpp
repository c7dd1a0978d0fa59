#pragma once

// Text and file formats: complex literals, CSV tables and JSON reports.
// Numbers are written with 17 significant digits and a '.' decimal point
// regardless of locale.

#include "delaylog/cycle_detector.hpp"
#include "delaylog/linear_stability.hpp"
#include "delaylog/lyapunov.hpp"
#include "delaylog/map_core.hpp"
#include "delaylog/period_two.hpp"
#include "delaylog/sweep.hpp"

#include "json.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace delaylog {

using Json = nlohmann::ordered_json;

std::string format_double(double x);
double parse_double(std::string_view text);

/// "a+bi" / "a-bi" with 17 significant digits per component.
std::string format_complex(Complex z);

/// Accepts a+bi, a-bi, bi, a, i, -i and the pair form (a,b); j works as i
/// and either component may be a ratio such as 1/3.
Complex parse_complex(std::string_view text);

Json complex_to_json(Complex z); // [re, im]
Complex complex_from_json(Json const& j);

// orbit: CSV "n,re,im" with n starting at -1, JSON with params and status
void write_orbit_csv(std::ostream& out, Orbit const& orbit);
std::vector<Complex> read_orbit_csv(std::istream& in);
Json orbit_to_json(MapParameters const& params, Orbit const& orbit);
Orbit orbit_from_json(Json const& j, MapParameters* params = nullptr);

// representative points "k,re,im"
void write_points_csv(std::ostream& out, std::vector<Complex> const& points);
std::vector<Complex> read_points_csv(std::istream& in);

// Lyapunov trace "k,estimate"
void write_trace_csv(std::ostream& out, std::vector<double> const& estimates);
std::vector<double> read_trace_csv(std::istream& in);

Json stability_to_json(StabilityReport const& r);
StabilityReport stability_from_json(Json const& j);

Json cycle_to_json(CycleReport const& r);
CycleReport cycle_from_json(Json const& j);

Json lyapunov_to_json(LyapunovReport const& r, bool include_trace = true);
LyapunovReport lyapunov_from_json(Json const& j);

Json period_two_to_json(MapParameters const& params, double tol_hyp = kDefaultHyperbolicTol,
                        double guard_epsilon = kDefaultGuardEpsilon);

Json classification_to_json(PointClassification const& c);

// sweep: "cell_re,cell_im,classification,period,lambda_max,agree_fraction"
void write_sweep_csv(std::ostream& out, SweepResult const& result);
std::vector<SweepRecord> read_sweep_csv(std::istream& in);

} // namespace delaylog

#include "delaylog/io.hpp"

#include "delaylog/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace delaylog {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_csv(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        auto const comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return fields;
}

// Reads the header then returns rows with exactly `columns` fields.
std::vector<std::vector<std::string>> read_table(std::istream& in, std::string_view header, std::size_t columns)
{
    std::string line;
    if (!std::getline(in, line) || trim(line) != header)
        throw InvalidInputError("expected CSV header '" + std::string(header) + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        auto const fields = split_csv(line);
        if (fields.size() != columns)
            throw InvalidInputError("malformed CSV row: " + line);
        rows.emplace_back(fields.begin(), fields.end());
    }
    return rows;
}

std::int64_t parse_int(std::string_view text)
{
    text = trim(text);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw InvalidInputError("not an integer: " + std::string(text));
    return v;
}

Json number_or_null(double x)
{
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

double number_from(Json const& j, double null_value)
{
    return j.is_null() ? null_value : j.get<double>();
}

} // namespace

std::string format_double(double x)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
    if (ec != std::errc{})
        throw std::logic_error("format_double: buffer too small");
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text)
{
    text = trim(text);
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        throw InvalidInputError("not a finite number: '" + std::string(text) + "'");
    return v;
}

namespace {

// a plain number or a ratio "p/q", so 1/3+i can be typed exactly
double parse_component(std::string_view text)
{
    auto const slash = text.find('/');
    if (slash == std::string_view::npos)
        return parse_double(text);
    double const q = parse_double(text.substr(slash + 1));
    double const v = parse_double(text.substr(0, slash)) / q;
    if (!std::isfinite(v))
        throw InvalidInputError("not a finite number: '" + std::string(text) + "'");
    return v;
}

} // namespace

std::string format_complex(Complex z)
{
    std::string s = format_double(z.real());
    s += std::signbit(z.imag()) ? '-' : '+';
    s += format_double(std::abs(z.imag()));
    s += 'i';
    return s;
}

Complex parse_complex(std::string_view text)
{
    std::string_view s = trim(text);
    if (s.empty())
        throw InvalidInputError("empty complex literal");

    if (s.front() == '(') {
        if (s.back() != ')')
            throw InvalidInputError("unbalanced parenthesis in '" + std::string(text) + "'");
        auto const inner = s.substr(1, s.size() - 2);
        auto const comma = inner.find(',');
        if (comma == std::string_view::npos)
            throw InvalidInputError("pair form needs (re, im): '" + std::string(text) + "'");
        return {parse_component(inner.substr(0, comma)), parse_component(inner.substr(comma + 1))};
    }

    if (s.back() != 'i' && s.back() != 'j')
        return {parse_component(s), 0.0};

    std::string_view const body = trim(s.substr(0, s.size() - 1));
    std::size_t split = std::string_view::npos;
    for (std::size_t pos = body.size(); pos-- > 1;) {
        char const c = body[pos];
        char const before = body[pos - 1];
        if ((c == '+' || c == '-') && before != 'e' && before != 'E') {
            split = pos;
            break;
        }
    }
    double re = 0.0;
    std::string_view im_text = body;
    if (split != std::string_view::npos) {
        re = parse_component(body.substr(0, split));
        im_text = trim(body.substr(split));
    }
    double im = 0.0;
    if (im_text.empty() || im_text == "+")
        im = 1.0;
    else if (im_text == "-")
        im = -1.0;
    else
        im = parse_component(im_text);
    return {re, im};
}

Json complex_to_json(Complex z)
{
    return Json::array({z.real(), z.imag()});
}

Complex complex_from_json(Json const& j)
{
    if (j.is_string())
        return parse_complex(j.get<std::string>());
    if (!j.is_array() || j.size() != 2)
        throw InvalidInputError("complex value must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

void write_orbit_csv(std::ostream& out, Orbit const& orbit)
{
    out << "n,re,im\n";
    std::int64_t n = -1;
    for (auto z : orbit.points)
        out << n++ << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
}

std::vector<Complex> read_orbit_csv(std::istream& in)
{
    std::vector<Complex> points;
    std::int64_t expected = -1;
    for (auto const& row : read_table(in, "n,re,im", 3)) {
        if (parse_int(row[0]) != expected++)
            throw InvalidInputError("orbit CSV indices must run -1, 0, 1, ...");
        points.emplace_back(parse_double(row[1]), parse_double(row[2]));
    }
    return points;
}

Json orbit_to_json(MapParameters const& params, Orbit const& orbit)
{
    Json j;
    j["alpha"] = complex_to_json(params.alpha);
    j["beta"] = complex_to_json(params.beta);
    j["status"] = orbit.status.to_string();
    Json pts = Json::array();
    for (auto z : orbit.points)
        pts.push_back(complex_to_json(z));
    j["points"] = std::move(pts);
    return j;
}

Orbit orbit_from_json(Json const& j, MapParameters* params)
{
    Orbit orbit;
    orbit.status = OrbitStatus::parse(j.at("status").get<std::string>());
    for (auto const& p : j.at("points"))
        orbit.points.push_back(complex_from_json(p));
    if (params) {
        params->alpha = complex_from_json(j.at("alpha"));
        params->beta = complex_from_json(j.at("beta"));
    }
    return orbit;
}

void write_points_csv(std::ostream& out, std::vector<Complex> const& points)
{
    out << "k,re,im\n";
    for (std::size_t k = 0; k < points.size(); ++k)
        out << k << ',' << format_double(points[k].real()) << ',' << format_double(points[k].imag()) << '\n';
}

std::vector<Complex> read_points_csv(std::istream& in)
{
    std::vector<Complex> points;
    for (auto const& row : read_table(in, "k,re,im", 3)) {
        if (parse_int(row[0]) != static_cast<std::int64_t>(points.size()))
            throw InvalidInputError("point CSV indices must run 0, 1, ...");
        points.emplace_back(parse_double(row[1]), parse_double(row[2]));
    }
    return points;
}

void write_trace_csv(std::ostream& out, std::vector<double> const& estimates)
{
    out << "k,estimate\n";
    for (std::size_t k = 0; k < estimates.size(); ++k)
        out << k << ',' << format_double(estimates[k]) << '\n';
}

std::vector<double> read_trace_csv(std::istream& in)
{
    std::vector<double> estimates;
    for (auto const& row : read_table(in, "k,estimate", 2)) {
        if (parse_int(row[0]) != static_cast<std::int64_t>(estimates.size()))
            throw InvalidInputError("trace CSV indices must run 0, 1, ...");
        estimates.push_back(parse_double(row[1]));
    }
    return estimates;
}

Json stability_to_json(StabilityReport const& r)
{
    Json j;
    j["equilibrium"] = complex_to_json(r.equilibrium);
    j["roots"] = Json::array({complex_to_json(r.roots[0]), complex_to_json(r.roots[1])});
    j["root_moduli"] = Json::array({r.root_moduli[0], r.root_moduli[1]});
    j["classification"] = to_string(r.classification);
    j["band_verdict"] = r.band_verdict ? Json(to_string(*r.band_verdict)) : Json(nullptr);
    j["agreement"] = r.agreement;
    return j;
}

StabilityReport stability_from_json(Json const& j)
{
    StabilityReport r;
    r.equilibrium = complex_from_json(j.at("equilibrium"));
    r.roots = {complex_from_json(j.at("roots").at(0)), complex_from_json(j.at("roots").at(1))};
    r.root_moduli = {j.at("root_moduli").at(0).get<double>(), j.at("root_moduli").at(1).get<double>()};
    r.classification = parse_stability(j.at("classification").get<std::string>());
    if (!j.at("band_verdict").is_null())
        r.band_verdict = parse_stability(j.at("band_verdict").get<std::string>());
    r.agreement = j.at("agreement").get<bool>();
    return r;
}

Json cycle_to_json(CycleReport const& r)
{
    Json j;
    j["detected"] = r.detected;
    j["period"] = r.period;
    Json pts = Json::array();
    for (auto z : r.representative_points)
        pts.push_back(complex_to_json(z));
    j["representative_points"] = std::move(pts);
    j["residual"] = number_or_null(r.residual);
    j["window_start"] = r.window_start;
    j["classification"] = to_string(r.classification);
    j["contraction_per_period"] = number_or_null(r.contraction_per_period);
    return j;
}

CycleReport cycle_from_json(Json const& j)
{
    CycleReport r;
    r.detected = j.at("detected").get<bool>();
    r.period = j.at("period").get<int>();
    for (auto const& p : j.at("representative_points"))
        r.representative_points.push_back(complex_from_json(p));
    r.residual = number_from(j.at("residual"), std::numeric_limits<double>::infinity());
    r.window_start = j.at("window_start").get<std::int64_t>();
    r.classification = parse_cycle_kind(j.at("classification").get<std::string>());
    r.contraction_per_period = number_from(j.at("contraction_per_period"), std::numeric_limits<double>::infinity());
    return r;
}

Json lyapunov_to_json(LyapunovReport const& r, bool include_trace)
{
    Json j;
    j["lambda_max"] = number_or_null(r.lambda_max);
    j["n_used"] = r.n_used;
    j["renorm_interval"] = r.renorm_interval;
    j["verdict"] = to_string(r.verdict);
    j["max_modulus"] = r.max_modulus;
    if (include_trace) {
        Json trace = Json::array();
        for (double x : r.running_estimates)
            trace.push_back(number_or_null(x));
        j["running_estimates"] = std::move(trace);
    }
    return j;
}

LyapunovReport lyapunov_from_json(Json const& j)
{
    double const neg_inf = -std::numeric_limits<double>::infinity();
    LyapunovReport r;
    r.lambda_max = number_from(j.at("lambda_max"), neg_inf);
    r.n_used = j.at("n_used").get<std::int64_t>();
    r.renorm_interval = j.at("renorm_interval").get<std::int64_t>();
    r.verdict = parse_chaos_verdict(j.at("verdict").get<std::string>());
    r.max_modulus = j.at("max_modulus").get<double>();
    if (j.contains("running_estimates")) {
        for (auto const& x : j.at("running_estimates"))
            r.running_estimates.push_back(number_from(x, neg_inf));
    }
    return r;
}

Json period_two_to_json(MapParameters const& params, double tol_hyp, double guard_epsilon)
{
    Json j;
    j["alpha"] = complex_to_json(params.alpha);
    j["beta"] = complex_to_json(params.beta);
    auto const cycles = period_two_cycles(params, guard_epsilon);
    j["exists"] = cycles.has_value();
    if (!cycles)
        return j;

    Json list = Json::array();
    for (auto const& c : *cycles) {
        Json cj;
        cj["branch"] = to_string(c.branch);
        cj["phi"] = complex_to_json(c.phi);
        cj["psi"] = complex_to_json(c.psi);
        list.push_back(std::move(cj));
    }
    j["cycles"] = std::move(list);

    auto const jac = jacobian_t2(params, (*cycles)[0], guard_epsilon);
    Json jj;
    jj["g_u"] = complex_to_json(jac.g_u);
    jj["g_v"] = complex_to_json(jac.g_v);
    jj["h_u"] = complex_to_json(jac.h_u);
    jj["h_v"] = complex_to_json(jac.h_v);
    jj["chi"] = complex_to_json(jac.chi);
    jj["lambda_det"] = complex_to_json(jac.lambda_det);
    jj["abs_chi"] = std::abs(jac.chi);
    jj["abs_lambda_det"] = std::abs(jac.lambda_det);
    jj["eigenvalues"] = Json::array({complex_to_json(jac.eigenvalues[0]), complex_to_json(jac.eigenvalues[1])});
    jj["eigenvalue_moduli"] = Json::array({std::abs(jac.eigenvalues[0]), std::abs(jac.eigenvalues[1])});
    j["jacobian"] = std::move(jj);

    auto const st = period_two_stability(jac, tol_hyp);
    Json sj;
    sj["modulus_test_stable"] = st.modulus_test_stable;
    sj["eigen_classification"] = to_string(st.eigen_classification);
    sj["eigen_stable"] = st.eigen_stable;
    sj["agreement"] = st.agreement;
    j["stability"] = std::move(sj);
    return j;
}

Json classification_to_json(PointClassification const& c)
{
    Json j;
    j["verdict"] = c.verdict.label();
    j["plurality"] = c.plurality.label();
    j["agree_fraction"] = c.agree_fraction;
    j["lambda_max"] = c.lambda_max ? Json(*c.lambda_max) : Json(nullptr);
    Json seeds = Json::array();
    for (auto const& s : c.seeds) {
        Json sj;
        sj["z_minus1"] = complex_to_json(s.z_minus1);
        sj["z0"] = complex_to_json(s.z0);
        sj["verdict"] = s.verdict.label();
        sj["lambda_max"] = s.lambda_max ? Json(*s.lambda_max) : Json(nullptr);
        sj["orbit_status"] = s.orbit_status;
        seeds.push_back(std::move(sj));
    }
    j["seeds"] = std::move(seeds);
    return j;
}

void write_sweep_csv(std::ostream& out, SweepResult const& result)
{
    out << "cell_re,cell_im,classification,period,lambda_max,agree_fraction\n";
    for (auto const& r : result.records) {
        out << format_double(r.cell.real()) << ',' << format_double(r.cell.imag()) << ','
            << to_string(r.classification.kind) << ',' << r.classification.period << ','
            << (r.lambda_max ? format_double(*r.lambda_max) : std::string()) << ','
            << format_double(r.agree_fraction) << '\n';
    }
}

std::vector<SweepRecord> read_sweep_csv(std::istream& in)
{
    std::vector<SweepRecord> records;
    for (auto const& row : read_table(in, "cell_re,cell_im,classification,period,lambda_max,agree_fraction", 6)) {
        SweepRecord r;
        r.cell = {parse_double(row[0]), parse_double(row[1])};
        auto const kind = PointVerdict::parse(row[2] == "Periodic" ? "Periodic(" + row[3] + ")" : row[2]).kind;
        r.classification = {kind, static_cast<int>(parse_int(row[3]))};
        if (!row[4].empty())
            r.lambda_max = parse_double(row[4]);
        r.agree_fraction = parse_double(row[5]);
        records.push_back(r);
    }
    return records;
}

} // namespace delaylog

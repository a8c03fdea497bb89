#include "mapoi/serialize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mapoi/errors.hpp"

namespace mapoi {

using nlohmann::json;

namespace {

json pulse_json(const PulseShape& p) {
    json comps = json::array();
    for (const auto& c : p.components) comps.push_back({{"omega", c.omega}, {"amplitude", c.amplitude}, {"phase", c.phase}});
    return {{"duration", p.duration},
            {"width", p.width},
            {"components", comps},
            {"amplitude_bounds", {p.amplitude_bounds.lo, p.amplitude_bounds.hi}},
            {"phase_bounds", {p.phase_bounds.lo, p.phase_bounds.hi}}};
}

PulseShape pulse_of(const json& j) {
    PulseShape p;
    p.duration = j.at("duration").get<double>();
    p.width = j.at("width").get<double>();
    for (const auto& c : j.at("components"))
        p.components.push_back({c.at("omega").get<double>(), c.at("amplitude").get<double>(), c.at("phase").get<double>()});
    p.amplitude_bounds = {j.at("amplitude_bounds")[0].get<double>(), j.at("amplitude_bounds")[1].get<double>()};
    p.phase_bounds = {j.at("phase_bounds")[0].get<double>(), j.at("phase_bounds")[1].get<double>()};
    return p;
}

json plan_json(const MeasurementPlan& plan) {
    return {{"samples", plan.samples},
            {"levels", plan.levels},
            {"duration", plan.duration},
            {"times", plan.times()},
            {"measurements", plan.measurement_count()}};
}

MeasurementPlan plan_of(const json& j) {
    return {j.at("samples").get<int>(), j.at("levels").get<int>(), j.at("duration").get<double>()};
}

json dataset_json(const LabDataset& d) {
    return {{"pulse", pulse_json(d.pulse)},
            {"pulse_id", d.pulse_id},
            {"plan", plan_json(d.plan)},
            {"values", d.values},
            {"err_rel", d.err_rel},
            {"seed", d.seed}};
}

LabDataset dataset_of(const json& j) {
    LabDataset d;
    d.pulse = pulse_of(j.at("pulse"));
    d.pulse_id = j.at("pulse_id").get<std::string>();
    d.plan = plan_of(j.at("plan"));
    d.values = j.at("values").get<std::vector<double>>();
    d.err_rel = j.at("err_rel").get<std::vector<double>>();
    d.seed = j.at("seed").get<std::uint64_t>();
    if (d.values.size() != d.plan.measurement_count() || d.err_rel.size() != d.values.size())
        throw ConfigError("dataset arrays do not match its measurement plan");
    return d;
}

json diagnostics_json(const MapDiagnostics& d) {
    return {{"rms_err", d.rms_err},         {"max_err", d.max_err},         {"rms_overall", d.rms_overall},
            {"max_overall", d.max_overall}, {"n_test", d.n_test},           {"build_solves", d.build_solves},
            {"flagged", d.flagged}};
}

MapDiagnostics diagnostics_of(const json& j) {
    MapDiagnostics d;
    d.rms_err = j.at("rms_err").get<std::vector<double>>();
    d.max_err = j.at("max_err").get<std::vector<double>>();
    d.rms_overall = j.at("rms_overall").get<double>();
    d.max_overall = j.at("max_overall").get<double>();
    d.n_test = j.at("n_test").get<std::size_t>();
    d.build_solves = j.at("build_solves").get<std::size_t>();
    d.flagged = j.at("flagged").get<bool>();
    return d;
}

json bounds_json(const std::vector<VariableBounds>& bounds) {
    json lo = json::array(), hi = json::array(), width = json::array(), rel = json::array(), fb = json::array();
    for (const auto& b : bounds) {
        lo.push_back(b.lo);
        hi.push_back(b.hi);
        width.push_back(b.width);
        rel.push_back(b.rel_width);
        fb.push_back(b.fallback);
    }
    return {{"lo", lo}, {"hi", hi}, {"width", width}, {"rel_width", rel}, {"fallback", fb}};
}

std::vector<VariableBounds> bounds_of(const json& j) {
    const auto lo = j.at("lo").get<std::vector<double>>();
    const auto hi = j.at("hi").get<std::vector<double>>();
    const auto width = j.at("width").get<std::vector<double>>();
    const auto rel = j.at("rel_width").get<std::vector<double>>();
    const auto fb = j.at("fallback").get<std::vector<bool>>();
    std::vector<VariableBounds> out(lo.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {lo.at(i), hi.at(i), width.at(i), rel.at(i), fb.at(i)};
    return out;
}

json family_json(const InversionFamily& f) {
    return {{"members", f.members},
            {"residuals", f.residuals},
            {"converged", f.converged},
            {"evaluations", f.evaluations},
            {"generations", f.generations}};
}

InversionFamily family_of(const json& j) {
    InversionFamily f;
    f.members = j.at("members").get<std::vector<std::vector<double>>>();
    f.residuals = j.at("residuals").get<std::vector<double>>();
    f.converged = j.at("converged").get<bool>();
    f.evaluations = j.at("evaluations").get<std::uint64_t>();
    f.generations = j.at("generations").get<std::size_t>();
    return f;
}

json grid_json(const Eigen::MatrixXd& g) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
        std::vector<double> row(static_cast<std::size_t>(g.cols()));
        for (Eigen::Index c = 0; c < g.cols(); ++c) row[static_cast<std::size_t>(c)] = g(r, c);
        rows.push_back(row);
    }
    return rows;
}

Eigen::MatrixXd grid_of(const json& j) {
    const auto rows = j.get<std::vector<std::vector<double>>>();
    Eigen::MatrixXd g(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) g(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return g;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed artifact: ") + e.what());
    }
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::vector<std::string>> split_csv(const std::string& text, bool skip_header) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first && skip_header) {
            first = false;
            continue;
        }
        first = false;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

double to_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ConfigError("bad number in CSV: '" + s + "'");
    return v;
}

}  // namespace

std::string pulse_to_json(const PulseShape& pulse) { return pulse_json(pulse).dump(2); }
PulseShape pulse_from_json(const std::string& text) {
    return guarded([&] { return pulse_of(parse_json(text)); });
}

std::string dataset_to_json(const LabDataset& dataset) { return dataset_json(dataset).dump(2); }
LabDataset dataset_from_json(const std::string& text) {
    return guarded([&] { return dataset_of(parse_json(text)); });
}

std::string diagnostics_to_json(const MapDiagnostics& diagnostics) { return diagnostics_json(diagnostics).dump(2); }

std::string map_to_json(const CutHdmrMap& map, const MapDiagnostics* diagnostics) {
    json terms = json::array();
    for (const auto& t : map.terms()) terms.push_back({{"nodes", t.nodes}, {"samples", t.samples}});
    json j = {{"order", map.order()},
              {"samples_per_term", map.samples_per_term()},
              {"reference", map.reference()},
              {"lower", map.domain().lower},
              {"upper", map.domain().upper},
              {"f0", map.f0()},
              {"terms", terms},
              {"pulse_id", map.pulse_id()},
              {"spline", VectorSpline::name(map.spline_kind())},
              {"build_solves", map.build_solves()}};
    j["pulse"] = map.pulse().components.empty() ? json(nullptr) : pulse_json(map.pulse());
    j["diagnostics"] = diagnostics ? diagnostics_json(*diagnostics) : json(nullptr);
    return j.dump(2);
}

CutHdmrMap map_from_json(const std::string& text) {
    return guarded([&] {
        const json j = parse_json(text);
        if (j.at("order").get<int>() != 1) throw ConfigError("only first-order maps can be loaded");
        MapDomain d;
        d.nominal = j.at("reference").get<std::vector<double>>();
        d.lower = j.at("lower").get<std::vector<double>>();
        d.upper = j.at("upper").get<std::vector<double>>();
        std::vector<CutTerm> terms;
        for (const auto& t : j.at("terms"))
            terms.push_back({t.at("nodes").get<std::vector<double>>(), t.at("samples").get<std::vector<double>>()});
        PulseShape pulse;
        if (!j.at("pulse").is_null()) pulse = pulse_of(j.at("pulse"));
        const auto spline = j.contains("spline") ? VectorSpline::kind_from_string(j.at("spline").get<std::string>())
                                                 : VectorSpline::Kind::NaturalCubic;
        return CutHdmrMap(std::move(d), j.at("f0").get<std::vector<double>>(), std::move(terms), std::move(pulse),
                          spline);
    });
}

std::optional<MapDiagnostics> map_diagnostics_from_json(const std::string& text) {
    return guarded([&]() -> std::optional<MapDiagnostics> {
        const json j = parse_json(text);
        const json& d = j.contains("diagnostics") ? j.at("diagnostics") : j;
        if (d.is_null()) return std::nullopt;
        return diagnostics_of(d);
    });
}

std::string family_to_json(const InversionFamily& family, const std::vector<VariableBounds>& bounds,
                           const std::string& dataset_ref) {
    json j = family_json(family);
    j["bounds"] = bounds_json(bounds);
    j["dataset"] = dataset_ref;
    return j.dump(2);
}

InversionFamily family_from_json(const std::string& text) {
    return guarded([&] { return family_of(parse_json(text)); });
}

std::vector<VariableBounds> family_bounds_from_json(const std::string& text) {
    return guarded([&] { return bounds_of(parse_json(text).at("bounds")); });
}

std::string manifest_to_json(const OIResult& r, const std::string& config_text, int measurements,
                             const std::string& truth_ref) {
    json trace = json::array();
    for (const auto& g : r.trace)
        trace.push_back({{"generation", g.generation},
                         {"best_fitness", g.best_fitness},
                         {"mean_fitness", g.mean_fitness},
                         {"evals", g.evaluations}});
    const Accounting& a = r.accounting;
    json j = {
        {"mode", r.conventional ? "conventional" : "oi"},
        {"seed", r.seed},
        {"Q", r.samples},
        {"M", measurements},
        {"config", config_text},
        {"truth", truth_ref},
        {"knobs", r.knobs},
        {"pulse", pulse_json(r.pulse)},
        {"dataset", dataset_json(r.dataset)},
        {"family", family_json(r.family)},
        {"bounds", bounds_json(r.bounds)},
        {"summary",
         {{"hamiltonian", r.summary.hamiltonian},
          {"dipole", r.summary.dipole},
          {"overall", r.summary.overall},
          {"fallback_count", r.summary.fallback_count}}},
        {"grids", {{"hamiltonian", grid_json(r.grids.hamiltonian)}, {"dipole", grid_json(r.grids.dipole)}}},
        {"uncertainty", r.uncertainty},
        {"control_cost", r.control_cost},
        {"alpha", r.alpha},
        {"beta", r.beta},
        {"best_trial", r.best_trial},
        {"trace", trace},
        {"accounting",
         {{"trial_fields", a.trial_fields},
          {"map_builds", a.map_builds},
          {"map_solves", a.map_solves},
          {"validation_solves", a.validation_solves},
          {"lab_propagations", a.lab_propagations},
          {"map_evaluations", a.map_evaluations}}},
        {"timing",
         {{"seconds_lab", a.seconds_lab},
          {"seconds_map_build", a.seconds_map_build},
          {"seconds_inversion", a.seconds_inversion},
          {"seconds_total", a.seconds_total}}},
    };
    j["map_diagnostics"] = r.map_diagnostics ? diagnostics_json(*r.map_diagnostics) : json(nullptr);
    return j.dump(2);
}

OIResult manifest_from_json(const std::string& text) {
    return guarded([&] {
        const json j = parse_json(text);
        OIResult r;
        r.conventional = j.at("mode").get<std::string>() == "conventional";
        r.seed = j.at("seed").get<std::uint64_t>();
        r.samples = j.at("Q").get<int>();
        r.knobs = j.at("knobs").get<std::vector<double>>();
        r.pulse = pulse_of(j.at("pulse"));
        r.dataset = dataset_of(j.at("dataset"));
        r.family = family_of(j.at("family"));
        r.bounds = bounds_of(j.at("bounds"));
        const json& s = j.at("summary");
        r.summary = {s.at("hamiltonian").get<double>(), s.at("dipole").get<double>(), s.at("overall").get<double>(),
                     s.at("fallback_count").get<std::size_t>()};
        r.grids = {grid_of(j.at("grids").at("hamiltonian")), grid_of(j.at("grids").at("dipole"))};
        r.uncertainty = j.at("uncertainty").get<double>();
        r.control_cost = j.at("control_cost").get<double>();
        r.alpha = j.at("alpha").get<double>();
        r.beta = j.at("beta").get<double>();
        r.best_trial = j.at("best_trial").get<std::uint64_t>();
        for (const auto& g : j.at("trace"))
            r.trace.push_back({g.at("generation").get<std::size_t>(), g.at("best_fitness").get<double>(),
                               g.at("mean_fitness").get<double>(), g.at("evals").get<std::uint64_t>()});
        const json& a = j.at("accounting");
        r.accounting.trial_fields = a.at("trial_fields").get<std::uint64_t>();
        r.accounting.map_builds = a.at("map_builds").get<std::uint64_t>();
        r.accounting.map_solves = a.at("map_solves").get<std::uint64_t>();
        r.accounting.validation_solves = a.at("validation_solves").get<std::uint64_t>();
        r.accounting.lab_propagations = a.at("lab_propagations").get<std::uint64_t>();
        r.accounting.map_evaluations = a.at("map_evaluations").get<std::uint64_t>();
        const json& t = j.at("timing");
        r.accounting.seconds_lab = t.at("seconds_lab").get<double>();
        r.accounting.seconds_map_build = t.at("seconds_map_build").get<double>();
        r.accounting.seconds_inversion = t.at("seconds_inversion").get<double>();
        r.accounting.seconds_total = t.at("seconds_total").get<double>();
        if (!j.at("map_diagnostics").is_null()) r.map_diagnostics = diagnostics_of(j.at("map_diagnostics"));
        return r;
    });
}

std::string grid_to_csv(const Eigen::MatrixXd& grid) {
    std::ostringstream out;
    for (Eigen::Index r = 0; r < grid.rows(); ++r) {
        for (Eigen::Index c = 0; c < grid.cols(); ++c) out << (c ? "," : "") << format_double(grid(r, c));
        out << '\n';
    }
    return out.str();
}

Eigen::MatrixXd grid_from_csv(const std::string& text) {
    const auto rows = split_csv(text, false);
    if (rows.empty()) return {};
    Eigen::MatrixXd g(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size()) throw ConfigError("ragged grid CSV");
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            g(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = to_double(rows[r][c]);
    }
    return g;
}

std::string spectrum_to_csv(const std::vector<SpectrumPoint>& spectrum) {
    std::ostringstream out;
    out << "freq_rad_per_ps,power\n";
    for (const auto& p : spectrum) out << format_double(p.frequency) << ',' << format_double(p.power) << '\n';
    return out.str();
}

std::vector<SpectrumPoint> spectrum_from_csv(const std::string& text) {
    std::vector<SpectrumPoint> out;
    for (const auto& row : split_csv(text, true)) {
        if (row.size() != 2) throw ConfigError("spectrum CSV rows need 2 columns");
        out.push_back({to_double(row[0]), to_double(row[1])});
    }
    return out;
}

std::string trace_to_csv(const std::vector<GenerationStats>& trace) {
    std::ostringstream out;
    out << "generation,best_fitness,mean_fitness,evals\n";
    for (const auto& g : trace)
        out << g.generation << ',' << format_double(g.best_fitness) << ',' << format_double(g.mean_fitness) << ','
            << g.evaluations << '\n';
    return out.str();
}

std::vector<GenerationStats> trace_from_csv(const std::string& text) {
    std::vector<GenerationStats> out;
    for (const auto& row : split_csv(text, true)) {
        if (row.size() != 4) throw ConfigError("trace CSV rows need 4 columns");
        out.push_back({static_cast<std::size_t>(to_double(row[0])), to_double(row[1]), to_double(row[2]),
                       static_cast<std::uint64_t>(to_double(row[3]))});
    }
    return out;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

}  // namespace mapoi

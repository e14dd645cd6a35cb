#include "relsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "relsim/rng.hpp"

#include <json.hpp>

#include "relsim/harness.hpp"
#include "relsim/quantum.hpp"
#include "relsim/spacetime.hpp"

namespace relsim::scenario {

using nlohmann::json;

const char* to_string(Kind k) {
    switch (k) {
        case Kind::Bell: return "bell";
        case Kind::DoubleBell: return "double-bell";
        case Kind::Foliation: return "foliation";
        case Kind::Dilation: return "dilation";
        case Kind::FrameScan: return "frame-scan";
    }
    return "?";
}

namespace {

Kind parse_kind(const std::string& s) {
    if (s == "bell") return Kind::Bell;
    if (s == "double-bell") return Kind::DoubleBell;
    if (s == "foliation") return Kind::Foliation;
    if (s == "dilation") return Kind::Dilation;
    if (s == "frame-scan") return Kind::FrameScan;
    throw ConfigError("config: unknown scenario '" + s + "'");
}

void reject_unknown(const json& obj, const char* where,
                    const std::set<std::string>& known) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!known.count(key)) {
            throw ConfigError(std::string("config: unknown key '") + key + "' in " +
                              where);
        }
    }
}

double get_number(const json& obj, const char* field, double fallback) {
    if (!obj.contains(field)) return fallback;
    if (!obj[field].is_number()) {
        throw ConfigError(std::string("config: field '") + field + "' must be a number");
    }
    return obj[field].get<double>();
}

std::size_t get_size(const json& obj, const char* field, std::size_t fallback) {
    if (!obj.contains(field)) return fallback;
    if (!obj[field].is_number_unsigned()) {
        throw ConfigError(std::string("config: field '") + field +
                          "' must be a non-negative integer");
    }
    return obj[field].get<std::size_t>();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: document must be a JSON object");
    reject_unknown(doc, "top level",
                   {"schema", "scenario", "seed", "trials", "geometry", "field",
                    "angles", "dilation", "velocities", "levels", "force_dual_ni"});
    ScenarioConfig c;
    c.schema = static_cast<int>(get_size(doc, "schema", 1));
    if (c.schema != 1) throw ConfigError("config: unsupported schema version");
    if (!doc.contains("scenario")) {
        throw ConfigError("config: missing required field 'scenario'");
    }
    if (!doc["scenario"].is_string()) {
        throw ConfigError("config: field 'scenario' must be a string");
    }
    c.kind = parse_kind(doc["scenario"].get<std::string>());
    c.seed = get_size(doc, "seed", c.seed);
    c.trials = get_size(doc, "trials", c.trials);
    if (c.trials == 0) throw ConfigError("config: field 'trials' must be >= 1");

    if (doc.contains("geometry")) {
        const auto& g = doc["geometry"];
        reject_unknown(g, "geometry", {"L", "d", "offset"});
        c.geometry.L = get_number(g, "L", c.geometry.L);
        c.geometry.d = get_number(g, "d", c.geometry.d);
        c.geometry.offset = get_number(g, "offset", c.geometry.offset);
    }
    if (doc.contains("field")) {
        const auto& f = doc["field"];
        reject_unknown(f, "field",
                       {"a", "t0", "epsilon", "k", "grid", "length", "dt", "steps"});
        c.field.a = get_number(f, "a", c.field.a);
        c.field.t0 = get_number(f, "t0", c.field.t0);
        c.field.epsilon = get_number(f, "epsilon", c.field.epsilon);
        c.field.k = get_number(f, "k", c.field.k);
        c.field.grid = get_size(f, "grid", c.field.grid);
        c.field.length = get_number(f, "length", c.field.length);
        c.field.dt = get_number(f, "dt", c.field.dt);
        c.field.steps = get_size(f, "steps", c.field.steps);
        if (!(c.field.a > 0.0)) throw ConfigError("config: field.a must be > 0");
    }
    if (doc.contains("angles")) {
        const auto& a = doc["angles"];
        reject_unknown(a, "angles",
                       {"a", "a_prime", "b", "b_prime", "theta_base", "delta"});
        c.angles.a = get_number(a, "a", c.angles.a);
        c.angles.a_prime = get_number(a, "a_prime", c.angles.a_prime);
        c.angles.b = get_number(a, "b", c.angles.b);
        c.angles.b_prime = get_number(a, "b_prime", c.angles.b_prime);
        c.angles.theta_base = get_number(a, "theta_base", c.angles.theta_base);
        c.angles.delta = get_number(a, "delta", c.angles.delta);
    }
    if (doc.contains("dilation")) {
        const auto& d = doc["dilation"];
        reject_unknown(d, "dilation", {"g", "h", "t"});
        c.dilation.g = get_number(d, "g", c.dilation.g);
        c.dilation.h = get_number(d, "h", c.dilation.h);
        c.dilation.t = get_number(d, "t", c.dilation.t);
        if (!(c.dilation.g > 0.0)) throw ConfigError("config: dilation.g must be > 0");
        if (c.dilation.h < 0.0) throw ConfigError("config: dilation.h must be >= 0");
        if (c.dilation.t < 0.0) throw ConfigError("config: dilation.t must be >= 0");
    }
    if (doc.contains("velocities")) {
        c.velocities.clear();
        for (const auto& v : doc["velocities"]) {
            if (!v.is_number()) throw ConfigError("config: velocities must be numbers");
            const double vel = v.get<double>();
            if (!(std::abs(vel) < 1.0)) {
                throw ConfigError("config: velocities must satisfy |v| < 1");
            }
            c.velocities.push_back(vel);
        }
    }
    if (doc.contains("levels")) {
        c.levels.clear();
        for (const auto& v : doc["levels"]) {
            if (!v.is_number()) throw ConfigError("config: levels must be numbers");
            c.levels.push_back(v.get<double>());
        }
    }
    if (doc.contains("force_dual_ni")) {
        if (!doc["force_dual_ni"].is_boolean()) {
            throw ConfigError("config: force_dual_ni must be a boolean");
        }
        c.force_dual_ni = doc["force_dual_ni"].get<bool>();
    }
    return c;
}

std::string config_json(const ScenarioConfig& c) {
    json doc;
    doc["schema"] = c.schema;
    doc["scenario"] = to_string(c.kind);
    doc["seed"] = c.seed;
    doc["trials"] = c.trials;
    doc["geometry"] = {{"L", c.geometry.L}, {"d", c.geometry.d},
                       {"offset", c.geometry.offset}};
    doc["field"] = {{"a", c.field.a},       {"t0", c.field.t0},
                    {"epsilon", c.field.epsilon}, {"k", c.field.k},
                    {"grid", c.field.grid}, {"length", c.field.length},
                    {"dt", c.field.dt},     {"steps", c.field.steps}};
    doc["angles"] = {{"a", c.angles.a},
                     {"a_prime", c.angles.a_prime},
                     {"b", c.angles.b},
                     {"b_prime", c.angles.b_prime},
                     {"theta_base", c.angles.theta_base},
                     {"delta", c.angles.delta}};
    doc["dilation"] = {{"g", c.dilation.g}, {"h", c.dilation.h}, {"t", c.dilation.t}};
    doc["velocities"] = c.velocities;
    doc["levels"] = c.levels;
    doc["force_dual_ni"] = c.force_dual_ni;
    return doc.dump(2) + "\n";
}

namespace {

// Field history whose window covers every event of the layout.
field::History layout_history(const ScenarioConfig& c,
                              const harness::ExperimentLayout& layout) {
    double t_max = 0.0;
    for (const auto& e : layout.events) t_max = std::max(t_max, e.t);
    const double length =
        c.field.length > 0.0 ? c.field.length : 4.0 * layout.arm_length;
    const double dx = length / static_cast<double>(c.field.grid);
    double dt = c.field.dt > 0.0 ? c.field.dt : 0.5 * dx;
    std::size_t steps = c.field.steps;
    if (steps == 0) steps = static_cast<std::size_t>(std::ceil(t_max / dt)) + 2;
    field::InitialData data;
    data.a = c.field.a;
    data.t0 = c.field.t0;
    if (c.field.epsilon != 0.0) {
        field::Perturbation p;
        p.amplitude = c.field.epsilon;
        p.wavenumber = c.field.k != 0.0 ? c.field.k : 2.0 * M_PI / length;
        data.perturbation = p;
    }
    return field::evolve(field::init(data, {c.field.grid, 1, dx}), dt, steps);
}

json pair_stats_json(const harness::ExperimentStats& ex) {
    json pairs = json::array();
    for (const auto& p : ex.pairs) {
        pairs.push_back({{"a_angle", p.a_angle},
                         {"b_angle", p.b_angle},
                         {"E", p.correlation()},
                         {"stderr", p.standard_error()},
                         {"n", p.n}});
    }
    json marginals = json::array();
    for (const auto& [b_angle, counts] : ex.a_plus_minus_by_b) {
        marginals.push_back({{"b_angle", b_angle},
                             {"a_plus", counts.first},
                             {"a_minus", counts.second}});
    }
    json out = {{"pairs", pairs}, {"a_marginals_by_b_setting", marginals}};
    if (ex.chsh) out["chsh"] = *ex.chsh;
    return out;
}

json run_dilation(const ScenarioConfig& c, const std::filesystem::path& out_dir) {
    spacetime::DilationScenario s{c.dilation.g, c.dilation.h, c.dilation.t};
    const double offset = spacetime::dilation_offset(s);
    const double crossover = spacetime::timelike_crossover(c.dilation.g);
    json summary = {{"dilation_offset_seconds", offset},
                    {"crossover_seconds", crossover},
                    {"crossover_years", crossover / 3.156e7}};
    std::ostringstream csv;
    csv.precision(17);
    csv << "g,h,t,dilation_offset_seconds,crossover_seconds\n"
        << c.dilation.g << ',' << c.dilation.h << ',' << c.dilation.t << ',' << offset
        << ',' << crossover << '\n';
    write_file(out_dir / "dilation.csv", csv.str());
    return summary;
}

json run_bell(const ScenarioConfig& c, const std::filesystem::path& out_dir) {
    const auto& a = c.angles;
    harness::ExperimentLayout layout = harness::build_bell(c.geometry.L, c.geometry.d);
    const double S =
        quantum::chsh(a.a, a.a_prime, a.b, a.b_prime, c.trials, c.seed);
    std::ostringstream csv;
    csv.precision(17);
    csv << "a_angle,b_angle,E,n\n";
    json pairs = json::array();
    // Pair seeds mirror chsh(), so the table matches S exactly.
    int k = 0;
    for (double aa : {a.a, a.a_prime}) {
        for (double bb : {a.b, a.b_prime}) {
            ++k;
            const double e = quantum::correlation(aa, bb, c.trials, splitmix64(c.seed ^ k));
            csv << aa << ',' << bb << ',' << e << ',' << c.trials << '\n';
            pairs.push_back({{"a_angle", aa}, {"b_angle", bb}, {"E", e}});
        }
    }
    write_file(out_dir / "correlations.csv", csv.str());
    write_file(out_dir / "layout.txt", harness::layout_text(layout));
    return {{"chsh", S}, {"pairs", pairs}, {"n_trials_per_pair", c.trials}};
}

json run_double_bell_scenario(const ScenarioConfig& c,
                              const std::filesystem::path& out_dir) {
    auto [layout, graph] = harness::build_double_bell(c.geometry.L, c.geometry.d,
                                                      c.geometry.offset);
    const auto history = layout_history(c, layout);
    const auto timelike = field::check_timelike(history);
    json summary;
    summary["timelike_check"] = {{"all_timelike", timelike.all_timelike},
                                 {"worst_margin", timelike.worst_margin}};
    const auto ordering = harness::order_by_field(layout, history);
    summary["mu_ordering"] = ordering;

    if (c.force_dual_ni) {
        harness::CausalGraph forced = graph;
        forced.edges.push_back({harness::EdgeKind::NI, "A1", "B2"});
        forced.edges.push_back({harness::EdgeKind::NI, "B1'", "A2'"});
        const auto cycle = harness::detect_loop(forced);
        json finding;
        finding["loop_found"] = cycle.has_value();
        if (cycle) {
            json ids = json::array();
            for (const auto& e : *cycle) ids.push_back(e.from);
            ids.push_back(cycle->front().from);
            finding["cycle"] = ids;
        }
        summary["forced_dual_ni"] = finding;
        write_file(out_dir / "graph.txt", harness::graph_text(forced));
        return summary;
    }

    const auto oriented = harness::assert_ni_direction(graph, ordering);
    const auto cycle = harness::detect_loop(oriented);
    summary["loop_found"] = cycle.has_value();

    harness::SettingsPolicy policy;
    policy.free_choices_b1 = {c.angles.b, c.angles.b_prime};
    policy.free_choices_a1p = {c.angles.a, c.angles.a_prime};
    policy.theta_base = c.angles.theta_base;
    policy.delta = c.angles.delta;
    const auto stats =
        harness::run_double_bell(layout, oriented, history, policy, c.seed, c.trials);
    summary["unprimed"] = pair_stats_json(stats.unprimed);
    summary["primed"] = pair_stats_json(stats.primed);
    write_file(out_dir / "correlations.csv", harness::stats_csv(stats));
    write_file(out_dir / "layout.txt", harness::layout_text(layout));
    write_file(out_dir / "graph.txt", harness::graph_text(oriented));
    return summary;
}

json run_foliation(const ScenarioConfig& c, const std::filesystem::path& out_dir) {
    const double length = c.field.length > 0.0 ? c.field.length : 1.0;
    const double dx = length / static_cast<double>(c.field.grid);
    const double dt = c.field.dt > 0.0 ? c.field.dt : 0.5 * dx;
    const std::size_t steps = c.field.steps > 0 ? c.field.steps : 4 * c.field.grid;
    field::InitialData data;
    data.a = c.field.a;
    data.t0 = c.field.t0;
    if (c.field.epsilon != 0.0) {
        field::Perturbation p;
        p.amplitude = c.field.epsilon;
        p.wavenumber = c.field.k != 0.0 ? c.field.k : 2.0 * M_PI / length;
        data.perturbation = p;
    }
    const auto history = field::evolve(field::init(data, {c.field.grid, 1, dx}), dt, steps);
    const auto report = field::check_timelike(history);
    json summary;
    summary["timelike_check"] = {{"all_timelike", report.all_timelike},
                                 {"worst_margin", report.worst_margin},
                                 {"at_t", report.t},
                                 {"at_x", report.x}};
    write_file(out_dir / "field_first.csv", field::snapshot_csv(history.front()));
    write_file(out_dir / "field_last.csv", field::snapshot_csv(history.back()));

    std::vector<double> levels = c.levels;
    if (levels.empty()) {
        // Five levels spread across the middle of the simulated range.
        const double lo = data.t0 + 0.15 * c.field.a * history.back().time;
        const double hi = data.t0 + 0.85 * c.field.a * history.back().time;
        for (int i = 0; i < 5; ++i) {
            levels.push_back(lo + (hi - lo) * static_cast<double>(i) / 4.0);
        }
    }
    json level_report = json::array();
    int index = 0;
    for (double mu0 : levels) {
        const auto surface = field::extract_foliation(history, mu0);
        write_file(out_dir / ("foliation_" + std::to_string(index++) + ".csv"),
                   field::foliation_csv(surface));
        level_report.push_back({{"mu0", mu0}, {"points", surface.points.size()}});
    }
    summary["levels"] = level_report;
    return summary;
}

json run_frame_scan(const ScenarioConfig& c, const std::filesystem::path& out_dir) {
    harness::ExperimentLayout layout = harness::build_bell(c.geometry.L, c.geometry.d);
    const auto scan = harness::frame_scan(layout, c.velocities);
    std::ostringstream csv;
    csv.precision(17);
    csv << "velocity,order,spacelike_flips,causal_flips\n";
    json table = json::array();
    for (const auto& fo : scan) {
        std::string order;
        for (const auto& id : fo.order) {
            if (!order.empty()) order += ' ';
            order += id;
        }
        csv << fo.velocity << ',' << order << ',' << fo.flipped_spacelike_pairs.size()
            << ',' << fo.flipped_causal_pairs.size() << '\n';
        table.push_back({{"velocity", fo.velocity},
                         {"order", fo.order},
                         {"spacelike_flips", fo.flipped_spacelike_pairs.size()},
                         {"causal_flips", fo.flipped_causal_pairs.size()}});
    }
    write_file(out_dir / "orderings.csv", csv.str());
    write_file(out_dir / "layout.txt", harness::layout_text(layout));
    return {{"frames", table}};
}

}  // namespace

std::string run(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                Format) {
    std::filesystem::create_directories(out_dir);
    json summary;
    summary["scenario"] = to_string(config.kind);
    summary["seed"] = config.seed;
    summary["trials"] = config.trials;
    switch (config.kind) {
        case Kind::Dilation: summary["results"] = run_dilation(config, out_dir); break;
        case Kind::Bell: summary["results"] = run_bell(config, out_dir); break;
        case Kind::DoubleBell:
            summary["results"] = run_double_bell_scenario(config, out_dir);
            break;
        case Kind::Foliation: summary["results"] = run_foliation(config, out_dir); break;
        case Kind::FrameScan:
            summary["results"] = run_frame_scan(config, out_dir);
            break;
    }
    const std::string text = summary.dump(2) + "\n";
    write_file(out_dir / "summary.json", text);
    write_file(out_dir / "config_echo.json", config_json(config));
    return text;
}

}  // namespace relsim::scenario

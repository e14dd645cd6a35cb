#include "relsim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "relsim/quantum.hpp"
#include "relsim/rng.hpp"

namespace relsim::harness {

using spacetime::Role;
using spacetime::Separation;

const char* to_string(EdgeKind k) { return k == EdgeKind::CL ? "CL" : "NI"; }

const FourEvent& ExperimentLayout::event(const std::string& id) const {
    for (const auto& e : events) {
        if (e.id == id) return e;
    }
    throw std::invalid_argument("layout: unknown event id " + id);
}

bool ExperimentLayout::has_event(const std::string& id) const {
    return std::any_of(events.begin(), events.end(),
                       [&](const FourEvent& e) { return e.id == id; });
}

std::vector<std::string> ExperimentLayout::measurement_event_ids() const {
    std::vector<std::string> ids;
    for (const auto& e : events) {
        if (e.role == Role::Input || e.role == Role::Output) ids.push_back(e.id);
    }
    return ids;
}

double PairStats::correlation() const {
    return n ? sum_products / static_cast<double>(n) : 0.0;
}

double PairStats::standard_error() const {
    if (n == 0) return 0.0;
    const double e = correlation();
    const double var = std::max(0.0, 1.0 - e * e);
    return std::sqrt(var / static_cast<double>(n));
}

ExperimentLayout build_bell(double L, double d) {
    if (!(L > 0.0)) throw std::invalid_argument("build_bell: L must be > 0");
    if (d < 0.0) throw std::invalid_argument("build_bell: d must be >= 0");
    if (!(d < 2.0 * L)) {
        throw std::invalid_argument(
            "build_bell: d must be < 2L to keep cross-arm events spacelike");
    }
    ExperimentLayout layout;
    layout.arm_length = L;
    layout.delay = d;
    layout.events = {
        {"S", Role::Source, 0.0, 0.0, 0.0, 0.0},
        {"A1", Role::Input, L, -L, 0.0, 0.0},
        {"B1", Role::Input, L, L, 0.0, 0.0},
        {"A2", Role::Output, L + d, -L, 0.0, 0.0},
        {"B2", Role::Output, L + d, L, 0.0, 0.0},
    };
    validate_layout(layout);
    return layout;
}

std::pair<ExperimentLayout, CausalGraph> build_double_bell(double L, double d,
                                                           double offset) {
    if (!(L > 0.0)) throw std::invalid_argument("build_double_bell: L must be > 0");
    if (!(d > 0.0)) throw std::invalid_argument("build_double_bell: d must be > 0");
    if (!(offset > 0.0)) {
        throw std::invalid_argument(
            "build_double_bell: offset must be > 0 (overlapping sites leave the "
            "classical links without a future-directed path)");
    }
    if (!(offset + 2.0 * d < 2.0 * L)) {
        throw std::invalid_argument(
            "build_double_bell: need offset + 2d < 2L for cross-arm spacelike "
            "separation");
    }
    // Each experiment has one prompt arm and one delay-coil arm; the skew
    // between them makes both classical links exactly lightlike.
    const double skew = d + offset;
    ExperimentLayout layout;
    layout.arm_length = L;
    layout.delay = d;
    layout.offset = offset;
    layout.doubled = true;
    layout.events = {
        {"S", Role::Source, 0.0, 0.0, 0.0, 0.0},
        {"B1", Role::Input, L, L, 0.0, 0.0},
        {"B2", Role::Output, L + d, L, 0.0, 0.0},
        {"A1", Role::Input, L + skew, -L, 0.0, 0.0},
        {"A2", Role::Output, L + skew + d, -L, 0.0, 0.0},
        {"S'", Role::Source, 0.0, offset, 0.0, 0.0},
        {"A1'", Role::Input, L, offset - L, 0.0, 0.0},
        {"A2'", Role::Output, L + d, offset - L, 0.0, 0.0},
        {"B1'", Role::Input, L + skew, offset + L, 0.0, 0.0},
        {"B2'", Role::Output, L + skew + d, offset + L, 0.0, 0.0},
    };
    validate_layout(layout);
    CausalGraph g;
    g.events = layout.events;
    g.edges = {{EdgeKind::CL, "A2'", "A1"}, {EdgeKind::CL, "B2", "B1'"}};
    for (const auto& e : g.edges) {
        if (!spacetime::in_future_lightcone(layout.event(e.from), layout.event(e.to))) {
            throw std::invalid_argument("build_double_bell: CL edge " + e.from +
                                        " -> " + e.to + " is not future-directed causal");
        }
    }
    return {layout, g};
}

std::vector<CausalEdge> ni_candidates(const ExperimentLayout& layout) {
    std::vector<CausalEdge> edges = {{EdgeKind::NI, "A1", "B2"},
                                     {EdgeKind::NI, "B1", "A2"}};
    if (layout.doubled) {
        edges.push_back({EdgeKind::NI, "A1'", "B2'"});
        edges.push_back({EdgeKind::NI, "B1'", "A2'"});
    }
    return edges;
}

namespace {

struct DfsState {
    const CausalGraph& g;
    std::map<std::string, std::vector<std::size_t>> adjacency;
    std::map<std::string, int> color;  // 0 white, 1 gray, 2 black
    std::vector<std::size_t> edge_stack;
    std::optional<std::vector<CausalEdge>> cycle;

    explicit DfsState(const CausalGraph& graph) : g(graph) {
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            adjacency[g.edges[i].from].push_back(i);
        }
    }

    void visit(const std::string& node) {
        color[node] = 1;
        auto it = adjacency.find(node);
        if (it != adjacency.end()) {
            for (std::size_t ei : it->second) {
                if (cycle) return;
                const std::string& next = g.edges[ei].to;
                const int c = color[next];
                if (c == 1) {
                    // Back edge: unwind the stack to the start of the cycle.
                    edge_stack.push_back(ei);
                    std::vector<CausalEdge> loop;
                    bool in_cycle = false;
                    for (std::size_t si : edge_stack) {
                        if (g.edges[si].from == next) in_cycle = true;
                        if (in_cycle) loop.push_back(g.edges[si]);
                    }
                    cycle = canonical(loop);
                    return;
                }
                if (c == 0) {
                    edge_stack.push_back(ei);
                    visit(next);
                    if (cycle) return;
                    edge_stack.pop_back();
                }
            }
        }
        color[node] = 2;
    }

    // Rotates the cycle to start at its lexicographically smallest event.
    static std::vector<CausalEdge> canonical(std::vector<CausalEdge> loop) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < loop.size(); ++i) {
            if (loop[i].from < loop[best].from) best = i;
        }
        std::rotate(loop.begin(), loop.begin() + static_cast<std::ptrdiff_t>(best),
                    loop.end());
        return loop;
    }
};

}  // namespace

std::optional<std::vector<CausalEdge>> detect_loop(const CausalGraph& g) {
    for (const auto& e : g.edges) {
        if (e.from == e.to) return std::vector<CausalEdge>{e};
    }
    DfsState dfs(g);
    for (const auto& ev : g.events) {
        if (dfs.color[ev.id] == 0) {
            dfs.visit(ev.id);
            if (dfs.cycle) return dfs.cycle;
        }
    }
    // Edges may reference nodes absent from the event list.
    for (const auto& e : g.edges) {
        if (dfs.color[e.from] == 0) {
            dfs.visit(e.from);
            if (dfs.cycle) return dfs.cycle;
        }
    }
    return std::nullopt;
}

namespace {

std::vector<std::string> sort_by_time(const ExperimentLayout& layout,
                                      const std::map<std::string, double>& key) {
    auto ids = layout.measurement_event_ids();
    std::sort(ids.begin(), ids.end(), [&](const std::string& a, const std::string& b) {
        const double ka = key.at(a);
        const double kb = key.at(b);
        if (ka != kb) return ka < kb;
        return a < b;
    });
    return ids;
}

}  // namespace

std::vector<FrameOrdering> frame_scan(const ExperimentLayout& layout,
                                      const std::vector<double>& velocities) {
    const auto ids = layout.measurement_event_ids();
    std::map<std::string, double> rest_time;
    for (const auto& id : ids) rest_time[id] = layout.event(id).t;

    std::vector<FrameOrdering> result;
    for (double v : velocities) {
        FrameOrdering fo;
        fo.velocity = v;
        std::map<std::string, double> boosted_time;
        for (const auto& id : ids) {
            boosted_time[id] = spacetime::boost(layout.event(id), {v}).t;
        }
        fo.order = sort_by_time(layout, boosted_time);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t j = i + 1; j < ids.size(); ++j) {
                const double d0 = rest_time.at(ids[i]) - rest_time.at(ids[j]);
                const double dv = boosted_time.at(ids[i]) - boosted_time.at(ids[j]);
                if (d0 * dv < 0.0) {
                    const auto sep =
                        spacetime::classify(layout.event(ids[i]), layout.event(ids[j]));
                    auto& bucket = sep == Separation::Spacelike
                                       ? fo.flipped_spacelike_pairs
                                       : fo.flipped_causal_pairs;
                    bucket.emplace_back(ids[i], ids[j]);
                }
            }
        }
        result.push_back(std::move(fo));
    }
    return result;
}

std::vector<std::string> order_by_field(const ExperimentLayout& layout,
                                        const field::History& history) {
    std::map<std::string, double> mu;
    for (const auto& id : layout.measurement_event_ids()) {
        mu[id] = field::sample(history, layout.event(id));
    }
    return sort_by_time(layout, mu);
}

CausalGraph assert_ni_direction(const CausalGraph& g,
                                const std::vector<std::string>& ordering) {
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < ordering.size(); ++i) pos[ordering[i]] = i;
    auto position = [&](const std::string& id) {
        auto it = pos.find(id);
        if (it == pos.end()) {
            throw std::invalid_argument("assert_ni_direction: ordering misses event " + id);
        }
        return it->second;
    };
    auto has = [&](const std::string& id) {
        return std::any_of(g.events.begin(), g.events.end(),
                           [&](const FourEvent& e) { return e.id == id; });
    };
    CausalGraph out = g;
    for (const char* suffix : {"", "'"}) {
        const std::string a1 = std::string("A1") + suffix;
        const std::string b1 = std::string("B1") + suffix;
        if (!has(a1) || !has(b1)) continue;
        if (position(a1) < position(b1)) {
            out.edges.push_back({EdgeKind::NI, a1, std::string("B2") + suffix});
        } else {
            out.edges.push_back({EdgeKind::NI, b1, std::string("A2") + suffix});
        }
    }
    return out;
}

void validate_layout(const ExperimentLayout& layout) {
    std::set<std::string> seen;
    for (const auto& e : layout.events) {
        if (!std::isfinite(e.t) || !std::isfinite(e.x) || !std::isfinite(e.y) ||
            !std::isfinite(e.z)) {
            throw std::invalid_argument("layout: non-finite coordinates at " + e.id);
        }
        if (!seen.insert(e.id).second) {
            throw std::invalid_argument("layout: duplicate event id " + e.id);
        }
    }
    const std::vector<const char*> suffixes =
        layout.doubled ? std::vector<const char*>{"", "'"}
                       : std::vector<const char*>{""};
    for (const char* sfx : suffixes) {
        const auto& a1 = layout.event(std::string("A1") + sfx);
        const auto& a2 = layout.event(std::string("A2") + sfx);
        const auto& b1 = layout.event(std::string("B1") + sfx);
        const auto& b2 = layout.event(std::string("B2") + sfx);
        const auto& src = layout.event(std::string("S") + sfx);
        // Arm order: input strictly before (or with, when d = 0) its output.
        for (const auto* pair : {&a1, &b1}) {
            const auto& out = pair == &a1 ? a2 : b2;
            if (out.t < pair->t) {
                throw std::invalid_argument("layout: output precedes input on arm " +
                                            pair->id);
            }
            if (layout.delay > 0.0 &&
                spacetime::classify(*pair, out) != Separation::Timelike) {
                throw std::invalid_argument("layout: arm " + pair->id +
                                            " input/output pair is not timelike");
            }
        }
        // Cross-arm pairs must be spacelike.
        for (const auto* ea : {&a1, &a2}) {
            for (const auto* eb : {&b1, &b2}) {
                if (spacetime::classify(*ea, *eb) != Separation::Spacelike) {
                    throw std::invalid_argument("layout: events " + ea->id + " and " +
                                                eb->id + " are not spacelike");
                }
            }
        }
        // Photons leave the source on null rays; inputs sit on or after
        // arrival (delay coils hold the photon at the arm).
        for (const auto* in : {&a1, &b1}) {
            const double flight = std::abs(in->x - src.x);
            if (in->t < src.t + flight - 1e-12) {
                throw std::invalid_argument("layout: input " + in->id +
                                            " precedes photon arrival from " + src.id);
            }
        }
    }
}

namespace {

quantum::Subsystem subsystem_of(const std::string& id) {
    return id.front() == 'A' ? quantum::Subsystem::A : quantum::Subsystem::B;
}

bool is_primed(const std::string& id) { return id.find('\'') != std::string::npos; }

void accumulate_pair(std::vector<PairStats>& pairs, double a_angle, double b_angle,
                     int product) {
    for (auto& p : pairs) {
        if (p.a_angle == a_angle && p.b_angle == b_angle) {
            ++p.n;
            p.sum_products += product;
            return;
        }
    }
    PairStats p;
    p.a_angle = a_angle;
    p.b_angle = b_angle;
    p.n = 1;
    p.sum_products = product;
    pairs.push_back(p);
}

void finalize_experiment(ExperimentStats& ex) {
    std::sort(ex.pairs.begin(), ex.pairs.end(), [](const PairStats& u, const PairStats& v) {
        if (u.a_angle != v.a_angle) return u.a_angle < v.a_angle;
        return u.b_angle < v.b_angle;
    });
    std::set<double> as, bs;
    for (const auto& p : ex.pairs) {
        as.insert(p.a_angle);
        bs.insert(p.b_angle);
    }
    if (as.size() == 2 && bs.size() == 2 && ex.pairs.size() == 4) {
        auto e = [&](double a, double b) {
            for (const auto& p : ex.pairs) {
                if (p.a_angle == a && p.b_angle == b) return p.correlation();
            }
            return 0.0;
        };
        const double a0 = *as.begin(), a1 = *std::next(as.begin());
        const double b0 = *bs.begin(), b1 = *std::next(bs.begin());
        ex.chsh = std::abs(e(a0, b0) - e(a0, b1) + e(a1, b0) + e(a1, b1));
    }
}

}  // namespace

DoubleBellStats run_double_bell(const ExperimentLayout& layout,
                                const CausalGraph& graph,
                                const field::History& history,
                                const SettingsPolicy& policy,
                                std::uint64_t seed, std::uint64_t n_trials) {
    if (!layout.doubled) {
        throw std::invalid_argument("run_double_bell: layout is not doubled");
    }
    if (policy.free_choices_b1.empty() || policy.free_choices_a1p.empty()) {
        throw std::invalid_argument("run_double_bell: empty free-choice list");
    }
    const auto ordering = order_by_field(layout, history);
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < ordering.size(); ++i) pos[ordering[i]] = i;

    // Classical links: controlled input -> controlling output.
    std::map<std::string, std::string> controller;
    for (const auto& e : graph.edges) {
        if (e.kind != EdgeKind::CL) continue;
        if (pos.count(e.from) && pos.count(e.to) && pos[e.from] >= pos[e.to]) {
            throw std::invalid_argument("run_double_bell: CL edge " + e.from + " -> " +
                                        e.to + " runs against the field ordering");
        }
        controller[e.to] = e.from;
    }
    if (detect_loop(assert_ni_direction(graph, ordering))) {
        throw std::invalid_argument(
            "run_double_bell: graph is cyclic under the field ordering");
    }

    std::map<std::string, std::vector<double>> free_choices = {
        {"B1", policy.free_choices_b1}, {"A1'", policy.free_choices_a1p}};

    DoubleBellStats stats;
    stats.order = ordering;
    stats.n_trials = n_trials;
    for (std::uint64_t trial = 0; trial < n_trials; ++trial) {
        const std::uint64_t tseed = trial_seed(seed, trial);
        std::mt19937_64 gen(tseed);
        quantum::PureState state_unprimed = quantum::singlet();
        quantum::PureState state_primed = quantum::singlet();
        std::map<std::string, double> settings;
        std::map<std::string, int> outcomes;

        for (const auto& id : ordering) {
            const bool input = layout.event(id).role == Role::Input;
            if (input) {
                double angle = 0.0;
                auto ctl = controller.find(id);
                if (ctl != controller.end()) {
                    auto out = outcomes.find(ctl->second);
                    if (out == outcomes.end()) {
                        throw std::logic_error("run_double_bell: controlling outcome of " +
                                               id + " not yet available");
                    }
                    angle = policy.theta_base +
                            policy.delta * static_cast<double>(out->second + 1) / 2.0;
                } else {
                    const auto& choices = free_choices.at(id);
                    std::uniform_int_distribution<std::size_t> pick(0, choices.size() - 1);
                    angle = choices[pick(gen)];
                }
                settings[id] = angle;
            } else {
                const std::string input_id = std::string(1, id.front()) + "1" +
                                             (is_primed(id) ? "'" : "");
                auto st = settings.find(input_id);
                if (st == settings.end()) {
                    throw std::logic_error("run_double_bell: output " + id +
                                           " processed before its input");
                }
                quantum::PureState& state = is_primed(id) ? state_primed : state_unprimed;
                const auto result = quantum::measure_lueders(
                    state, {subsystem_of(id), st->second}, uniform01(gen));
                state = result.post_state;
                outcomes[id] = result.outcome.value;
            }
        }

        accumulate_pair(stats.unprimed.pairs, settings.at("A1"), settings.at("B1"),
                        outcomes.at("A2") * outcomes.at("B2"));
        accumulate_pair(stats.primed.pairs, settings.at("A1'"), settings.at("B1'"),
                        outcomes.at("A2'") * outcomes.at("B2'"));
        auto& nm = stats.unprimed.a_plus_minus_by_b[settings.at("B1")];
        (outcomes.at("A2") > 0 ? nm.first : nm.second)++;
        auto& nmp = stats.primed.a_plus_minus_by_b[settings.at("B1'")];
        (outcomes.at("A2'") > 0 ? nmp.first : nmp.second)++;

        if (policy.keep_records) {
            RunRecord rec;
            rec.trial = trial;
            rec.seed = tseed;
            rec.settings = settings;
            rec.outcomes = outcomes;
            rec.order = ordering;
            for (const auto& id : ordering) {
                rec.mu_values[id] = field::sample(history, layout.event(id));
            }
            stats.records.push_back(std::move(rec));
        }
    }
    finalize_experiment(stats.unprimed);
    finalize_experiment(stats.primed);
    return stats;
}

std::string layout_text(const ExperimentLayout& layout) {
    std::ostringstream out;
    out.precision(17);
    out << "layout" << (layout.doubled ? " double-bell" : " bell")
        << " L=" << layout.arm_length << " d=" << layout.delay;
    if (layout.doubled) out << " offset=" << layout.offset;
    out << "\n";
    for (const auto& e : layout.events) {
        out << "  " << e.id << " role=" << spacetime::to_string(e.role) << " t=" << e.t
            << " x=" << e.x << " y=" << e.y << " z=" << e.z << "\n";
    }
    return out.str();
}

std::string graph_text(const CausalGraph& g) {
    std::ostringstream out;
    out << "graph events=" << g.events.size() << " edges=" << g.edges.size() << "\n";
    for (const auto& e : g.edges) {
        out << "  " << to_string(e.kind) << " " << e.from << " -> " << e.to << "\n";
    }
    return out.str();
}

std::string stats_csv(const DoubleBellStats& stats) {
    std::ostringstream out;
    out.precision(17);
    out << "experiment,a_angle,b_angle,E,stderr,n\n";
    auto dump = [&](const char* name, const ExperimentStats& ex) {
        for (const auto& p : ex.pairs) {
            out << name << ',' << p.a_angle << ',' << p.b_angle << ','
                << p.correlation() << ',' << p.standard_error() << ',' << p.n << '\n';
        }
    };
    dump("unprimed", stats.unprimed);
    dump("primed", stats.primed);
    return out.str();
}

}  // namespace relsim::harness

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relsim/field.hpp"
#include "relsim/spacetime.hpp"

namespace relsim::harness {

using spacetime::FourEvent;

// Bell layout (single or doubled). Events are named S, A1, B1, A2, B2, with
// an apostrophe suffix for the second experiment of the double layout.
struct ExperimentLayout {
    std::vector<FourEvent> events;
    double arm_length = 0.0;   // L
    double delay = 0.0;        // d, input-to-output
    double offset = 0.0;       // spatial separation of the two experiments
    bool doubled = false;

    const FourEvent& event(const std::string& id) const;
    bool has_event(const std::string& id) const;
    // Inputs and outputs, in construction order.
    std::vector<std::string> measurement_event_ids() const;
};

enum class EdgeKind { CL, NI };

const char* to_string(EdgeKind k);

struct CausalEdge {
    EdgeKind kind;
    std::string from;
    std::string to;
};

struct CausalGraph {
    std::vector<FourEvent> events;
    std::vector<CausalEdge> edges;
};

// Per-trial record of a double-Bell run.
struct RunRecord {
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;
    std::map<std::string, double> settings;     // input event -> angle
    std::map<std::string, int> outcomes;        // output event -> +/-1
    std::vector<std::string> order;             // processing order used
    std::map<std::string, double> mu_values;    // event -> sampled mu
};

struct PairStats {
    double a_angle = 0.0;
    double b_angle = 0.0;
    std::uint64_t n = 0;
    double sum_products = 0.0;

    double correlation() const;
    double standard_error() const;
};

struct ExperimentStats {
    std::vector<PairStats> pairs;               // sorted by (a_angle, b_angle)
    std::optional<double> chsh;                 // set when settings form a 2x2 grid
    // No-signalling bookkeeping: A-outcome counts keyed by the B setting.
    std::map<double, std::pair<std::uint64_t, std::uint64_t>> a_plus_minus_by_b;
};

struct DoubleBellStats {
    ExperimentStats unprimed;
    ExperimentStats primed;
    std::uint64_t n_trials = 0;
    std::vector<std::string> order;             // mu-order used for every trial
    std::vector<RunRecord> records;             // filled when requested
};

// How input angles are fixed during a run. B1 and A1' are free and drawn
// uniformly from the choice lists; A1 and B1' are classically controlled:
// angle = theta_base + delta * (controlling outcome + 1) / 2.
struct SettingsPolicy {
    std::vector<double> free_choices_b1{0.0};
    std::vector<double> free_choices_a1p{0.0};
    double theta_base = 0.0;
    double delta = 0.0;
    bool keep_records = false;
};

// Single Bell layout: source at the origin, photons reach both arms at t = L,
// outputs d later. Requires L > 0, 0 <= d < 2L.
ExperimentLayout build_bell(double L, double d);

// Double Bell layout plus its CL edges (A2' -> A1 and B2 -> B1', both exactly
// lightlike). The four candidate NI edges are not yet asserted.
// Requires L > 0, d > 0, offset > 0, offset + 2d < 2L.
std::pair<ExperimentLayout, CausalGraph> build_double_bell(double L, double d,
                                                           double offset);

// The four candidate NI edges of a double layout (two for a single layout).
std::vector<CausalEdge> ni_candidates(const ExperimentLayout& layout);

// First directed cycle found by depth-first search in deterministic edge
// order, or nullopt if the graph is acyclic.
std::optional<std::vector<CausalEdge>> detect_loop(const CausalGraph& g);

struct FrameOrdering {
    double velocity = 0.0;
    std::vector<std::string> order;  // measurement events by boosted time
    // Spacelike pairs whose coordinate-time order differs from the v = 0 frame.
    std::vector<std::pair<std::string, std::string>> flipped_spacelike_pairs;
    // Timelike/lightlike pairs that flipped (must stay empty).
    std::vector<std::pair<std::string, std::string>> flipped_causal_pairs;
};

std::vector<FrameOrdering> frame_scan(const ExperimentLayout& layout,
                                      const std::vector<double>& velocities);

// Measurement events sorted by sampled mu, ties broken by event id.
std::vector<std::string> order_by_field(const ExperimentLayout& layout,
                                        const field::History& history);

// Keeps, per experiment, the NI candidate whose source input comes earlier in
// `ordering`; discards the reverse candidate.
CausalGraph assert_ni_direction(const CausalGraph& g,
                                const std::vector<std::string>& ordering);

// Full mu-ordered double-Bell run with Lueders jumps and CL-coupled settings.
DoubleBellStats run_double_bell(const ExperimentLayout& layout,
                                const CausalGraph& graph,
                                const field::History& history,
                                const SettingsPolicy& policy,
                                std::uint64_t seed, std::uint64_t n_trials);

// Validates the layout's role invariants (arm timelike order, cross-arm
// spacelike separation, null photon paths). Throws on violation.
void validate_layout(const ExperimentLayout& layout);

std::string layout_text(const ExperimentLayout& layout);
std::string graph_text(const CausalGraph& g);
std::string stats_csv(const DoubleBellStats& stats);

}  // namespace relsim::harness

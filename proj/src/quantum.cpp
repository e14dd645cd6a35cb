#include "relsim/quantum.hpp"

#include <cmath>
#include <stdexcept>

#include "relsim/rng.hpp"

namespace relsim::quantum {

namespace {

constexpr double kNormTol = 1e-12;

// Spin-up eigenvector along the in-plane axis at `angle` from z:
// |n+> = (cos(a/2), sin(a/2)), |n-> = (-sin(a/2), cos(a/2)).
struct Axis {
    double c;
    double s;
};

Axis half_angle(double angle) { return {std::cos(0.5 * angle), std::sin(0.5 * angle)}; }

// Applies the rank-1 projector |n(outcome)><n(outcome)| on one subsystem.
PureState project(const PureState& in, const Observable& o, int outcome) {
    const Axis ax = half_angle(o.angle);
    // Eigenvector components (e0, e1) in the z basis.
    const double e0 = outcome > 0 ? ax.c : -ax.s;
    const double e1 = outcome > 0 ? ax.s : ax.c;
    PureState out;
    const auto& a = in.amplitudes;
    if (o.subsystem == Subsystem::A) {
        // Pairs (|u?>, |d?>) for each B label.
        for (int b = 0; b < 2; ++b) {
            const std::complex<double> overlap = e0 * a[b] + e1 * a[2 + b];
            out.amplitudes[b] = overlap * e0;
            out.amplitudes[2 + b] = overlap * e1;
        }
    } else {
        for (int s = 0; s < 2; ++s) {
            const std::complex<double> overlap = e0 * a[2 * s] + e1 * a[2 * s + 1];
            out.amplitudes[2 * s] = overlap * e0;
            out.amplitudes[2 * s + 1] = overlap * e1;
        }
    }
    return out;
}

double norm_squared(const PureState& s) {
    double n = 0.0;
    for (const auto& amp : s.amplitudes) n += std::norm(amp);
    return n;
}

void require_normalized(const PureState& s) {
    if (std::abs(norm_squared(s) - 1.0) > kNormTol) {
        throw std::invalid_argument("quantum: state is not normalized");
    }
}

}  // namespace

double PureState::norm() const { return std::sqrt(norm_squared(*this)); }

PureState singlet() {
    PureState s;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    s.amplitudes[1] = inv_sqrt2;
    s.amplitudes[2] = -inv_sqrt2;
    return s;
}

PureState product_up_up() {
    PureState s;
    s.amplitudes[0] = 1.0;
    return s;
}

Probabilities outcome_probabilities(const PureState& s, const Observable& o) {
    require_normalized(s);
    const double p_plus = norm_squared(project(s, o, +1));
    const double p_minus = norm_squared(project(s, o, -1));
    return {p_plus, p_minus};
}

MeasurementResult measure_lueders(const PureState& s, const Observable& o,
                                  double u) {
    require_normalized(s);
    if (u < 0.0 || u >= 1.0) {
        throw std::invalid_argument("quantum: u must lie in [0, 1)");
    }
    const double p_plus = norm_squared(project(s, o, +1));
    const int outcome = u < p_plus ? +1 : -1;
    PureState post = project(s, o, outcome);
    const double n = std::sqrt(norm_squared(post));
    for (auto& amp : post.amplitudes) amp /= n;
    return {Outcome{outcome}, post};
}

double correlation(double a_angle, double b_angle, std::uint64_t n_trials,
                   std::uint64_t seed) {
    if (n_trials == 0) throw std::invalid_argument("quantum: n_trials must be >= 1");
    const Observable oa{Subsystem::A, a_angle};
    const Observable ob{Subsystem::B, b_angle};
    double sum = 0.0;
    for (std::uint64_t i = 0; i < n_trials; ++i) {
        std::mt19937_64 gen(trial_seed(seed, i));
        const auto ra = measure_lueders(singlet(), oa, uniform01(gen));
        const auto rb = measure_lueders(ra.post_state, ob, uniform01(gen));
        sum += static_cast<double>(ra.outcome.value * rb.outcome.value);
    }
    return sum / static_cast<double>(n_trials);
}

double chsh(double a, double a_prime, double b, double b_prime,
            std::uint64_t n_trials_per_pair, std::uint64_t seed) {
    const double e_ab = correlation(a, b, n_trials_per_pair, splitmix64(seed ^ 1));
    const double e_abp = correlation(a, b_prime, n_trials_per_pair, splitmix64(seed ^ 2));
    const double e_apb = correlation(a_prime, b, n_trials_per_pair, splitmix64(seed ^ 3));
    const double e_apbp =
        correlation(a_prime, b_prime, n_trials_per_pair, splitmix64(seed ^ 4));
    return std::abs(e_ab - e_abp + e_apb + e_apbp);
}

}  // namespace relsim::quantum

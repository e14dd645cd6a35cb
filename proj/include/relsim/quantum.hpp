#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace relsim::quantum {

// Basis order: |uu>, |ud>, |du>, |dd>; first label is subsystem A.
struct PureState {
    std::array<std::complex<double>, 4> amplitudes{};

    double norm() const;
};

enum class Subsystem { A, B };

// Spin component along an axis in the measurement (x-z) plane; angle 0 is
// the z axis.
struct Observable {
    Subsystem subsystem;
    double angle;
};

struct Outcome {
    int value;  // +1 or -1
};

struct Probabilities {
    double plus;
    double minus;
};

struct MeasurementResult {
    Outcome outcome;
    PureState post_state;
};

// (|ud> - |du>) / sqrt(2)
PureState singlet();

PureState product_up_up();

// Born probabilities of the two outcomes. Throws if s is not normalized.
Probabilities outcome_probabilities(const PureState& s, const Observable& o);

// One stochastic jump: outcome +1 iff u < P(+), post-state the normalized
// projection onto the selected eigenspace. Deterministic given (s, o, u).
MeasurementResult measure_lueders(const PureState& s, const Observable& o,
                                  double u);

// Monte Carlo estimate of E(a, b) = <outcome_A * outcome_B> over fresh
// singlets, measuring A then B.
double correlation(double a_angle, double b_angle, std::uint64_t n_trials,
                   std::uint64_t seed);

// S = |E(a,b) - E(a,b') + E(a',b) + E(a',b')|
double chsh(double a, double a_prime, double b, double b_prime,
            std::uint64_t n_trials_per_pair, std::uint64_t seed);

}  // namespace relsim::quantum

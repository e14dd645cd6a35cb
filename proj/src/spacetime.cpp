#include "relsim/spacetime.hpp"

#include <cmath>
#include <stdexcept>

namespace relsim::spacetime {

const char* to_string(Role r) {
    switch (r) {
        case Role::Input: return "input";
        case Role::Output: return "output";
        case Role::Source: return "source";
        case Role::None: return "none";
    }
    return "?";
}

const char* to_string(Separation s) {
    switch (s) {
        case Separation::Timelike: return "timelike";
        case Separation::Spacelike: return "spacelike";
        case Separation::Lightlike: return "lightlike";
    }
    return "?";
}

double interval_squared(const FourEvent& a, const FourEvent& b) {
    const double dt = b.t - a.t;
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double dz = b.z - a.z;
    return -dt * dt + dx * dx + dy * dy + dz * dz;
}

Separation classify_interval(double s2, double tol) {
    if (tol < 0.0) throw std::invalid_argument("classify: tol must be >= 0");
    if (std::abs(s2) <= tol) return Separation::Lightlike;
    return s2 < 0.0 ? Separation::Timelike : Separation::Spacelike;
}

Separation classify(const FourEvent& a, const FourEvent& b, double tol) {
    return classify_interval(interval_squared(a, b), tol);
}

FourEvent boost(const FourEvent& e, const Boost& b) {
    const double v = b.velocity;
    if (!(std::abs(v) < 1.0)) {
        throw std::invalid_argument("boost: |velocity| must be < 1");
    }
    const double gamma = 1.0 / std::sqrt(1.0 - v * v);
    FourEvent out = e;
    out.t = gamma * (e.t - v * e.x);
    out.x = gamma * (e.x - v * e.t);
    return out;
}

bool in_future_lightcone(const FourEvent& src, const FourEvent& dst, double tol) {
    return interval_squared(src, dst) <= tol && dst.t > src.t;
}

double dilation_offset(const DilationScenario& s) {
    if (!(s.g > 0.0)) throw std::invalid_argument("dilation: g must be > 0");
    if (s.h < 0.0) throw std::invalid_argument("dilation: h must be >= 0");
    if (s.t < 0.0) throw std::invalid_argument("dilation: t must be >= 0");
    return s.g * s.h * s.t / (kSpeedOfLight * kSpeedOfLight);
}

double timelike_crossover(double g) {
    if (!(g > 0.0)) throw std::invalid_argument("crossover: g must be > 0");
    return kSpeedOfLight / g;
}

}  // namespace relsim::spacetime

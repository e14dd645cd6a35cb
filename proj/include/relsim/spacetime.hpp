#pragma once

#include <array>
#include <string>

namespace relsim::spacetime {

// Speed of light, SI. Used only when converting laboratory numbers at the
// boundary; everything internal works in natural units c = 1.
inline constexpr double kSpeedOfLight = 299792458.0;

enum class Role { Input, Output, Source, None };

const char* to_string(Role r);

// A labeled spacetime point, coords (t, x, y, z) with c = 1, signature -+++.
struct FourEvent {
    std::string id;
    Role role = Role::None;
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

enum class Separation { Timelike, Spacelike, Lightlike };

const char* to_string(Separation s);

// Boost along the shared x-axis of all layouts.
struct Boost {
    double velocity;  // |v| < 1
};

// Laboratory clock scenario, SI units.
struct DilationScenario {
    double g;  // m/s^2, > 0
    double h;  // m, > 0
    double t;  // s, >= 0
};

inline constexpr double kDefaultTol = 1e-12;

// s^2 = -(dt)^2 + (dx)^2 + (dy)^2 + (dz)^2
double interval_squared(const FourEvent& a, const FourEvent& b);

Separation classify(const FourEvent& a, const FourEvent& b, double tol = kDefaultTol);
Separation classify_interval(double s2, double tol = kDefaultTol);

// Lorentz boost of the event coordinates; id and role are preserved.
// Throws std::invalid_argument for |v| >= 1.
FourEvent boost(const FourEvent& e, const Boost& b);

// True iff dst lies in (or on) the future light cone of src.
bool in_future_lightcone(const FourEvent& src, const FourEvent& dst,
                         double tol = kDefaultTol);

// Clock offset after coordinate time t at height separation h: dt = g*h*t/c^2.
double dilation_offset(const DilationScenario& s);

// Elapsed time after which the "simultaneous" clock ticks become timelike
// separated: t = c/g, independent of h. Throws for g <= 0.
double timelike_crossover(double g);

}  // namespace relsim::spacetime

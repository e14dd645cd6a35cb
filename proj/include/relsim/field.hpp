#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "relsim/spacetime.hpp"

namespace relsim::field {

// Uniform Cartesian grid, periodic boundary. ny == 1 selects one spatial
// dimension.
struct GridSpec {
    std::size_t nx;
    std::size_t ny = 1;
    double dx;
};

// Cosine perturbation stacked on the uniform growth solution mu = a t + t0.
struct Perturbation {
    double amplitude = 0.0;
    double wavenumber = 0.0;
    bool on_mu = true;
    bool on_mu_dot = false;
};

struct InitialData {
    double a;        // uniform growth rate, > 0
    double t0 = 0.0;
    std::optional<Perturbation> perturbation;
    // Bound on |amplitude| relative to a; keeps the field safely timelike.
    double max_perturbation_fraction = 0.1;
};

struct FieldState {
    std::vector<double> mu;
    std::vector<double> mu_dot;
    std::size_t nx = 0;
    std::size_t ny = 1;
    double dx = 0.0;
    double time = 0.0;

    std::size_t size() const { return nx * ny; }
    std::size_t dim() const { return ny > 1 ? 2 : 1; }
    double length_x() const { return static_cast<double>(nx) * dx; }
    double length_y() const { return static_cast<double>(ny) * dx; }
    double& at(std::size_t i, std::size_t j = 0) { return mu[j * nx + i]; }
    double at(std::size_t i, std::size_t j = 0) const { return mu[j * nx + i]; }
};

using History = std::vector<FieldState>;

struct TimelikeReport {
    bool all_timelike = false;
    double worst_margin = 0.0;
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
};

struct FoliationSurface {
    double mu0 = 0.0;
    struct Point {
        std::size_t ix = 0;
        std::size_t iy = 0;
        double x = 0.0;
        double y = 0.0;
        double crossing_time = 0.0;
    };
    std::vector<Point> points;
};

// Throws std::invalid_argument for a <= 0, undersized grids, or a
// perturbation exceeding the configured bound.
FieldState init(const InitialData& data, const GridSpec& grid);

// Maximum stable step for the leapfrog scheme: dx / sqrt(d).
double cfl_limit(const FieldState& s);

// One explicit second-order (velocity-Verlet) step of the zero-mass wave
// equation. Throws for dt violating the CFL condition.
FieldState step(const FieldState& s, double dt);

// step() applied n times, returning every snapshot including the initial one.
History evolve(FieldState initial, double dt, std::size_t n_steps);

// mu at an arbitrary event: linear interpolation in time, linear/bilinear in
// space (periodic wrap). Throws if e.t falls outside the simulated window.
double sample(const History& history, const spacetime::FourEvent& e);

// Minimum of (d mu/dt)^2 - |grad mu|^2 over all interior snapshots, by
// central differences. all_timelike iff the minimum exceeds `margin`.
TimelikeReport check_timelike(const History& history, double margin = 0.0);

// Per-point first crossing times of the level mu = mu0.
// Throws if mu0 is outside the simulated range.
FoliationSurface extract_foliation(const History& history, double mu0);

// Discrete field energy of the zero-mean-velocity component; conserved by the
// scheme up to round-off.
double energy(const FieldState& s);

std::string snapshot_csv(const FieldState& s);
std::string foliation_csv(const FoliationSurface& surface);

}  // namespace relsim::field

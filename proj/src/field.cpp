#include "relsim/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "relsim/kernels.hpp"

namespace relsim::field {

namespace {

void apply_laplacian(const FieldState& s, std::vector<double>& out) {
    const auto& k = kernels::active_kernels();
    out.resize(s.size());
    const double inv_dx2 = 1.0 / (s.dx * s.dx);
    if (s.dim() == 1) {
        k.laplacian_1d(s.mu.data(), out.data(), s.nx, inv_dx2);
    } else {
        k.laplacian_2d(s.mu.data(), out.data(), s.nx, s.ny, inv_dx2);
    }
}

double perturbation_value(const Perturbation& p, double x, double y, bool two_d) {
    double v = p.amplitude * std::cos(p.wavenumber * x);
    if (two_d) v *= std::cos(p.wavenumber * y);
    return v;
}

// Value at continuous position by periodic (bi)linear interpolation.
double interp_space(const FieldState& s, double x, double y) {
    const double lx = s.length_x();
    double fx = std::fmod(x, lx);
    if (fx < 0.0) fx += lx;
    const double gx = fx / s.dx;
    const std::size_t i0 = std::min(static_cast<std::size_t>(gx), s.nx - 1);
    const std::size_t i1 = (i0 + 1) % s.nx;
    const double wx = gx - static_cast<double>(i0);
    if (s.dim() == 1) {
        return (1.0 - wx) * s.mu[i0] + wx * s.mu[i1];
    }
    const double ly = s.length_y();
    double fy = std::fmod(y, ly);
    if (fy < 0.0) fy += ly;
    const double gy = fy / s.dx;
    const std::size_t j0 = std::min(static_cast<std::size_t>(gy), s.ny - 1);
    const std::size_t j1 = (j0 + 1) % s.ny;
    const double wy = gy - static_cast<double>(j0);
    const double a = (1.0 - wx) * s.mu[j0 * s.nx + i0] + wx * s.mu[j0 * s.nx + i1];
    const double b = (1.0 - wx) * s.mu[j1 * s.nx + i0] + wx * s.mu[j1 * s.nx + i1];
    return (1.0 - wy) * a + wy * b;
}

}  // namespace

FieldState init(const InitialData& data, const GridSpec& grid) {
    if (!(data.a > 0.0)) {
        throw std::invalid_argument("field::init: growth rate a must be > 0");
    }
    if (grid.nx < 8 || (grid.ny != 1 && grid.ny < 8)) {
        throw std::invalid_argument("field::init: grid needs >= 8 points per dimension");
    }
    if (!(grid.dx > 0.0)) {
        throw std::invalid_argument("field::init: dx must be > 0");
    }
    if (data.perturbation) {
        const double bound = data.max_perturbation_fraction * data.a;
        if (std::abs(data.perturbation->amplitude) > bound) {
            throw std::invalid_argument(
                "field::init: perturbation amplitude exceeds the configured bound");
        }
    }
    FieldState s;
    s.nx = grid.nx;
    s.ny = grid.ny;
    s.dx = grid.dx;
    s.time = 0.0;
    s.mu.assign(s.size(), data.t0);
    s.mu_dot.assign(s.size(), data.a);
    if (data.perturbation) {
        const auto& p = *data.perturbation;
        const bool two_d = s.dim() == 2;
        for (std::size_t j = 0; j < s.ny; ++j) {
            for (std::size_t i = 0; i < s.nx; ++i) {
                const double x = static_cast<double>(i) * s.dx;
                const double y = static_cast<double>(j) * s.dx;
                const double v = perturbation_value(p, x, y, two_d);
                if (p.on_mu) s.mu[j * s.nx + i] += v;
                if (p.on_mu_dot) s.mu_dot[j * s.nx + i] += v;
            }
        }
    }
    return s;
}

double cfl_limit(const FieldState& s) {
    return s.dx / std::sqrt(static_cast<double>(s.dim()));
}

FieldState step(const FieldState& s, double dt) {
    if (!(dt > 0.0) || dt > cfl_limit(s) * (1.0 + 1e-12)) {
        throw std::invalid_argument("field::step: dt violates the CFL condition");
    }
    const auto& k = kernels::active_kernels();
    FieldState next = s;
    std::vector<double> lap;
    apply_laplacian(next, lap);
    k.axpy(0.5 * dt, lap.data(), next.mu_dot.data(), next.size());
    k.axpy(dt, next.mu_dot.data(), next.mu.data(), next.size());
    apply_laplacian(next, lap);
    k.axpy(0.5 * dt, lap.data(), next.mu_dot.data(), next.size());
    next.time = s.time + dt;
    return next;
}

History evolve(FieldState initial, double dt, std::size_t n_steps) {
    History h;
    h.reserve(n_steps + 1);
    h.push_back(std::move(initial));
    for (std::size_t n = 0; n < n_steps; ++n) {
        h.push_back(step(h.back(), dt));
    }
    return h;
}

double sample(const History& history, const spacetime::FourEvent& e) {
    if (history.empty()) {
        throw std::invalid_argument("field::sample: empty history");
    }
    const double t0 = history.front().time;
    const double t1 = history.back().time;
    const double tol = 1e-12 * (1.0 + std::abs(t1));
    if (e.t < t0 - tol || e.t > t1 + tol) {
        throw std::out_of_range("field::sample: event time outside the simulated window");
    }
    const double t = std::clamp(e.t, t0, t1);
    auto it = std::upper_bound(history.begin(), history.end(), t,
                               [](double v, const FieldState& s) { return v < s.time; });
    const std::size_t hi = std::min<std::size_t>(
        static_cast<std::size_t>(it - history.begin()), history.size() - 1);
    const std::size_t lo = hi > 0 ? hi - 1 : 0;
    const FieldState& a = history[lo];
    const FieldState& b = history[hi];
    const double va = interp_space(a, e.x, e.y);
    if (hi == lo || b.time == a.time) return va;
    const double vb = interp_space(b, e.x, e.y);
    const double w = (t - a.time) / (b.time - a.time);
    return (1.0 - w) * va + w * vb;
}

TimelikeReport check_timelike(const History& history, double margin) {
    if (history.size() < 3) {
        throw std::invalid_argument("field::check_timelike: need >= 3 snapshots");
    }
    const auto& k = kernels::active_kernels();
    TimelikeReport report;
    report.worst_margin = std::numeric_limits<double>::infinity();
    std::vector<double> m;
    for (std::size_t n = 1; n + 1 < history.size(); ++n) {
        const FieldState& s = history[n];
        const double inv_2dt = 1.0 / (history[n + 1].time - history[n - 1].time);
        const double inv_2dx = 1.0 / (2.0 * s.dx);
        m.resize(s.size());
        if (s.dim() == 1) {
            k.margin_1d(s.mu.data(), history[n - 1].mu.data(),
                        history[n + 1].mu.data(), m.data(), s.nx, inv_2dt, inv_2dx);
        } else {
            k.margin_2d(s.mu.data(), history[n - 1].mu.data(),
                        history[n + 1].mu.data(), m.data(), s.nx, s.ny, inv_2dt,
                        inv_2dx);
        }
        const auto min_it = std::min_element(m.begin(), m.end());
        if (*min_it < report.worst_margin) {
            const std::size_t idx = static_cast<std::size_t>(min_it - m.begin());
            report.worst_margin = *min_it;
            report.t = s.time;
            report.x = static_cast<double>(idx % s.nx) * s.dx;
            report.y = static_cast<double>(idx / s.nx) * s.dx;
        }
    }
    report.all_timelike = report.worst_margin > margin;
    return report;
}

FoliationSurface extract_foliation(const History& history, double mu0) {
    if (history.size() < 2) {
        throw std::invalid_argument("field::extract_foliation: need >= 2 snapshots");
    }
    const FieldState& first = history.front();
    double lo = *std::min_element(first.mu.begin(), first.mu.end());
    double hi = *std::max_element(history.back().mu.begin(), history.back().mu.end());
    if (mu0 < lo || mu0 > hi) {
        throw std::out_of_range("field::extract_foliation: level outside the simulated range");
    }
    FoliationSurface surface;
    surface.mu0 = mu0;
    const std::size_t npts = first.size();
    for (std::size_t idx = 0; idx < npts; ++idx) {
        for (std::size_t n = 0; n + 1 < history.size(); ++n) {
            const double va = history[n].mu[idx];
            const double vb = history[n + 1].mu[idx];
            if ((va <= mu0 && mu0 <= vb) || (vb <= mu0 && mu0 <= va)) {
                const double w = (vb == va) ? 0.0 : (mu0 - va) / (vb - va);
                FoliationSurface::Point p;
                p.ix = idx % first.nx;
                p.iy = idx / first.nx;
                p.x = static_cast<double>(p.ix) * first.dx;
                p.y = static_cast<double>(p.iy) * first.dx;
                p.crossing_time =
                    history[n].time + w * (history[n + 1].time - history[n].time);
                surface.points.push_back(p);
                break;
            }
        }
    }
    if (surface.points.empty()) {
        throw std::out_of_range("field::extract_foliation: level never crossed");
    }
    return surface;
}

double energy(const FieldState& s) {
    const double mean_mu_dot =
        std::accumulate(s.mu_dot.begin(), s.mu_dot.end(), 0.0) /
        static_cast<double>(s.size());
    double e = 0.0;
    for (std::size_t j = 0; j < s.ny; ++j) {
        for (std::size_t i = 0; i < s.nx; ++i) {
            const std::size_t idx = j * s.nx + i;
            const double v = s.mu_dot[idx] - mean_mu_dot;
            e += 0.5 * v * v;
            const double gx = (s.mu[j * s.nx + (i + 1) % s.nx] - s.mu[idx]) / s.dx;
            e += 0.5 * gx * gx;
            if (s.dim() == 2) {
                const double gy = (s.mu[((j + 1) % s.ny) * s.nx + i] - s.mu[idx]) / s.dx;
                e += 0.5 * gy * gy;
            }
        }
    }
    const double cell = s.dim() == 2 ? s.dx * s.dx : s.dx;
    return e * cell;
}

std::string snapshot_csv(const FieldState& s) {
    std::ostringstream out;
    out.precision(17);
    out << (s.dim() == 2 ? "ix,iy,x,y,mu,mu_dot\n" : "index,x,mu,mu_dot\n");
    for (std::size_t j = 0; j < s.ny; ++j) {
        for (std::size_t i = 0; i < s.nx; ++i) {
            const std::size_t idx = j * s.nx + i;
            if (s.dim() == 2) {
                out << i << ',' << j << ',' << static_cast<double>(i) * s.dx << ','
                    << static_cast<double>(j) * s.dx << ',' << s.mu[idx] << ','
                    << s.mu_dot[idx] << '\n';
            } else {
                out << i << ',' << static_cast<double>(i) * s.dx << ',' << s.mu[idx]
                    << ',' << s.mu_dot[idx] << '\n';
            }
        }
    }
    return out.str();
}

std::string foliation_csv(const FoliationSurface& surface) {
    std::ostringstream out;
    out.precision(17);
    out << "x,y,crossing_time\n";
    for (const auto& p : surface.points) {
        out << p.x << ',' << p.y << ',' << p.crossing_time << '\n';
    }
    return out.str();
}

}  // namespace relsim::field

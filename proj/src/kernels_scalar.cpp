#include "relsim/kernels.hpp"

#include <cstdlib>

namespace relsim::kernels {

namespace {

void laplacian_1d_scalar(const double* u, double* out, std::size_t n,
                         double inv_dx2) {
    if (n == 0) return;
    out[0] = (u[n - 1] + u[1 % n] - 2.0 * u[0]) * inv_dx2;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = (u[i - 1] + u[i + 1] - 2.0 * u[i]) * inv_dx2;
    }
    if (n > 1) out[n - 1] = (u[n - 2] + u[0] - 2.0 * u[n - 1]) * inv_dx2;
}

void laplacian_2d_scalar(const double* u, double* out, std::size_t nx,
                         std::size_t ny, double inv_dx2) {
    for (std::size_t j = 0; j < ny; ++j) {
        const double* row = u + j * nx;
        const double* rm = u + ((j + ny - 1) % ny) * nx;
        const double* rp = u + ((j + 1) % ny) * nx;
        double* o = out + j * nx;
        for (std::size_t i = 0; i < nx; ++i) {
            const double l = row[(i + nx - 1) % nx];
            const double r = row[(i + 1) % nx];
            o[i] = (l + r + rm[i] + rp[i] - 4.0 * row[i]) * inv_dx2;
        }
    }
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void margin_1d_scalar(const double* u, const double* tprev, const double* tnext,
                      double* out, std::size_t n, double inv_2dt,
                      double inv_2dx) {
    for (std::size_t i = 0; i < n; ++i) {
        const double mt = (tnext[i] - tprev[i]) * inv_2dt;
        const double mx = (u[(i + 1) % n] - u[(i + n - 1) % n]) * inv_2dx;
        out[i] = mt * mt - mx * mx;
    }
}

void margin_2d_scalar(const double* u, const double* tprev, const double* tnext,
                      double* out, std::size_t nx, std::size_t ny,
                      double inv_2dt, double inv_2dx) {
    for (std::size_t j = 0; j < ny; ++j) {
        const double* row = u + j * nx;
        const double* rm = u + ((j + ny - 1) % ny) * nx;
        const double* rp = u + ((j + 1) % ny) * nx;
        const double* tp = tprev + j * nx;
        const double* tn = tnext + j * nx;
        double* o = out + j * nx;
        for (std::size_t i = 0; i < nx; ++i) {
            const double mt = (tn[i] - tp[i]) * inv_2dt;
            const double mx = (row[(i + 1) % nx] - row[(i + nx - 1) % nx]) * inv_2dx;
            const double my = (rp[i] - rm[i]) * inv_2dx;
            o[i] = mt * mt - mx * mx - my * my;
        }
    }
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k{laplacian_1d_scalar, laplacian_2d_scalar, axpy_scalar,
                           margin_1d_scalar, margin_2d_scalar};
    return k;
}

const char* to_string(Isa isa) {
    return isa == Isa::Scalar ? "scalar" : "avx2";
}

namespace {
Isa g_isa = [] {
    const char* env = std::getenv("RELSIM_ISA");
    if (env && std::string(env) == "scalar") return Isa::Scalar;
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}();
}  // namespace

Isa active_isa() { return g_isa; }
void set_isa(Isa isa) { g_isa = isa; }

const Kernels& active_kernels() {
    return g_isa == Isa::Avx2 ? avx2_kernels() : scalar_kernels();
}

}  // namespace relsim::kernels

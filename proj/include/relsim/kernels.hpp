#pragma once

#include <cstddef>
#include <string>

namespace relsim::kernels {

// Grid inner loops come in a scalar reference flavor and an AVX2 flavor.
// Both perform the identical per-element arithmetic in the identical order,
// so results are bit-equal; the equivalence suite asserts this.
enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);

// ISA chosen at startup: AVX2 when the CPU has it, unless RELSIM_ISA=scalar.
Isa active_isa();
void set_isa(Isa isa);          // test hook
bool cpu_has_avx2();

struct Kernels {
    // out[i] = (u[i-1] + u[i+1] - 2 u[i]) / dx^2, periodic in i.
    void (*laplacian_1d)(const double* u, double* out, std::size_t n,
                         double inv_dx2);
    // 5-point periodic Laplacian on an nx-by-ny row-major grid.
    void (*laplacian_2d)(const double* u, double* out, std::size_t nx,
                         std::size_t ny, double inv_dx2);
    // y[i] += a * x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // out[i] = ((tnext[i]-tprev[i]) * inv_2dt)^2 - |grad u|^2 by periodic
    // central differences; the timelike margin of the field at each point.
    void (*margin_1d)(const double* u, const double* tprev, const double* tnext,
                      double* out, std::size_t n, double inv_2dt, double inv_2dx);
    void (*margin_2d)(const double* u, const double* tprev, const double* tnext,
                      double* out, std::size_t nx, std::size_t ny,
                      double inv_2dt, double inv_2dx);
};

const Kernels& scalar_kernels();
const Kernels& avx2_kernels();   // valid only when cpu_has_avx2()
const Kernels& active_kernels();

}  // namespace relsim::kernels

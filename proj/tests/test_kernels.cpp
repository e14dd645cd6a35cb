#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "relsim/kernels.hpp"

using namespace relsim::kernels;

namespace {

std::vector<double> random_grid(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(gen);
    return v;
}

}  // namespace

TEST_CASE("scalar laplacian of a constant grid is zero") {
    const auto& k = scalar_kernels();
    std::vector<double> u(33, 4.2), out(33);
    k.laplacian_1d(u.data(), out.data(), u.size(), 7.0);
    for (double v : out) CHECK(v == 0.0);
    std::vector<double> u2(12 * 9, -1.5), out2(12 * 9);
    k.laplacian_2d(u2.data(), out2.data(), 12, 9, 3.0);
    for (double v : out2) CHECK(v == 0.0);
}

TEST_CASE("scalar laplacian wraps periodically") {
    const auto& k = scalar_kernels();
    // Delta spike at index 0 on an 8-point ring.
    std::vector<double> u(8, 0.0), out(8);
    u[0] = 1.0;
    k.laplacian_1d(u.data(), out.data(), 8, 1.0);
    CHECK(out[0] == -2.0);
    CHECK(out[1] == 1.0);
    CHECK(out[7] == 1.0);
    CHECK(out[4] == 0.0);
}

TEST_CASE("AVX2 kernels are bit-identical to the scalar reference") {
    if (!cpu_has_avx2()) return;
    const auto& s = scalar_kernels();
    const auto& a = avx2_kernels();
    for (std::size_t n : {1u, 2u, 3u, 7u, 8u, 16u, 33u, 127u, 512u}) {
        const auto u = random_grid(n, 100 + n);
        const auto tp = random_grid(n, 200 + n);
        const auto tn = random_grid(n, 300 + n);
        std::vector<double> o1(n), o2(n);
        s.laplacian_1d(u.data(), o1.data(), n, 3.7);
        a.laplacian_1d(u.data(), o2.data(), n, 3.7);
        CHECK(o1 == o2);
        s.margin_1d(u.data(), tp.data(), tn.data(), o1.data(), n, 1.3, 0.9);
        a.margin_1d(u.data(), tp.data(), tn.data(), o2.data(), n, 1.3, 0.9);
        CHECK(o1 == o2);
        auto y1 = random_grid(n, 400 + n);
        auto y2 = y1;
        s.axpy(0.37, u.data(), y1.data(), n);
        a.axpy(0.37, u.data(), y2.data(), n);
        CHECK(y1 == y2);
    }
    const std::vector<std::pair<std::size_t, std::size_t>> shapes = {
        {8, 8}, {9, 11}, {31, 5}, {64, 64}, {3, 3}};
    for (auto [nx, ny] : shapes) {
        const std::size_t n = nx * ny;
        const auto u = random_grid(n, 500 + n);
        const auto tp = random_grid(n, 600 + n);
        const auto tn = random_grid(n, 700 + n);
        std::vector<double> o1(n), o2(n);
        s.laplacian_2d(u.data(), o1.data(), nx, ny, 2.1);
        a.laplacian_2d(u.data(), o2.data(), nx, ny, 2.1);
        CHECK(o1 == o2);
        s.margin_2d(u.data(), tp.data(), tn.data(), o1.data(), nx, ny, 0.8, 1.1);
        a.margin_2d(u.data(), tp.data(), tn.data(), o2.data(), nx, ny, 0.8, 1.1);
        CHECK(o1 == o2);
    }
}

TEST_CASE("runtime ISA selection") {
    const Isa before = active_isa();
    set_isa(Isa::Scalar);
    CHECK(active_isa() == Isa::Scalar);
    CHECK(&active_kernels() == &scalar_kernels());
    if (cpu_has_avx2()) {
        set_isa(Isa::Avx2);
        CHECK(&active_kernels() == &avx2_kernels());
    }
    set_isa(before);
}

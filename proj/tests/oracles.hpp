// Test-only brute-force oracles, independent of the library's measurement
// path: explicit 2x2 projectors, dense Kronecker products, and branch
// enumeration over the four outcome pairs.
#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace oracle {

using cd = std::complex<double>;
using Vec4 = std::array<cd, 4>;
using Mat2 = std::array<cd, 4>;   // row-major
using Mat4 = std::array<cd, 16>;  // row-major

inline Mat2 projector2(double angle, int sign) {
    // Eigenvectors of cos(a) sigma_z + sin(a) sigma_x.
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    const double e0 = sign > 0 ? c : -s;
    const double e1 = sign > 0 ? s : c;
    return {e0 * e0, e0 * e1, e1 * e0, e1 * e1};
}

inline Mat2 identity2() { return {1.0, 0.0, 0.0, 1.0}; }

inline Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 out{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    out[(2 * i + k) * 4 + (2 * j + l)] = a[i * 2 + j] * b[k * 2 + l];
    return out;
}

inline Vec4 mat_vec(const Mat4& m, const Vec4& v) {
    Vec4 out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i] += m[i * 4 + j] * v[j];
    return out;
}

inline double norm_sq(const Vec4& v) {
    double n = 0.0;
    for (const auto& x : v) n += std::norm(x);
    return n;
}

inline Vec4 normalized(Vec4 v) {
    const double n = std::sqrt(norm_sq(v));
    for (auto& x : v) x /= n;
    return v;
}

inline Vec4 singlet() {
    const double r = 1.0 / std::sqrt(2.0);
    return {0.0, r, -r, 0.0};
}

// Joint outcome probabilities p[sa][sb] for spin measurements at angles
// (a_angle on A, b_angle on B); local projectors commute, so one product
// matrix covers both measurement orders.
inline std::array<std::array<double, 2>, 2> branch_probs(const Vec4& state,
                                                         double a_angle,
                                                         double b_angle) {
    std::array<std::array<double, 2>, 2> p{};
    for (int ia = 0; ia < 2; ++ia) {
        for (int ib = 0; ib < 2; ++ib) {
            const Mat4 pa = kron(projector2(a_angle, ia == 0 ? +1 : -1), identity2());
            const Mat4 pb = kron(identity2(), projector2(b_angle, ib == 0 ? +1 : -1));
            p[ia][ib] = norm_sq(mat_vec(pb, mat_vec(pa, state)));
        }
    }
    return p;
}

// Sequential branch enumeration: measure `first` then the other subsystem,
// renormalizing between jumps. Used to check order independence.
inline std::array<std::array<double, 2>, 2> branch_probs_sequential(
    const Vec4& state, double a_angle, double b_angle, bool a_first) {
    std::array<std::array<double, 2>, 2> p{};
    const double first_angle = a_first ? a_angle : b_angle;
    const double second_angle = a_first ? b_angle : a_angle;
    for (int i1 = 0; i1 < 2; ++i1) {
        const Mat2 p1 = projector2(first_angle, i1 == 0 ? +1 : -1);
        const Mat4 m1 = a_first ? kron(p1, identity2()) : kron(identity2(), p1);
        const Vec4 after1 = mat_vec(m1, state);
        const double prob1 = norm_sq(after1);
        if (prob1 == 0.0) continue;
        const Vec4 mid = normalized(after1);
        for (int i2 = 0; i2 < 2; ++i2) {
            const Mat2 p2 = projector2(second_angle, i2 == 0 ? +1 : -1);
            const Mat4 m2 = a_first ? kron(identity2(), p2) : kron(p2, identity2());
            const double prob2 = norm_sq(mat_vec(m2, mid));
            const int ia = a_first ? i1 : i2;
            const int ib = a_first ? i2 : i1;
            p[ia][ib] = prob1 * prob2;
        }
    }
    return p;
}

inline double expected_correlation(const Vec4& state, double a_angle,
                                   double b_angle) {
    const auto p = branch_probs(state, a_angle, b_angle);
    return p[0][0] - p[0][1] - p[1][0] + p[1][1];
}

inline double singlet_correlation(double a_angle, double b_angle) {
    return expected_correlation(singlet(), a_angle, b_angle);
}

}  // namespace oracle

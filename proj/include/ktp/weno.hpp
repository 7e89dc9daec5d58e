#pragma once

#include <cmath>

#include "ktp/grid.hpp"

namespace ktp {

// Third-order-biased two-point/three-point blend.  Candidate values at the
// downwind face of the center cell, linear weights 1/3 and 2/3, smoothness
// indicators from one-sided differences, regularized by 1e-6.  Both
// candidates reproduce the exact face value on linear data, so the scheme is
// exact there independent of the weights.
inline constexpr double weno_eps = 1e-6;

inline double weno23(double fm, double f0, double fp) {
    const double p0 = 1.5 * f0 - 0.5 * fm;
    const double p1 = 0.5 * f0 + 0.5 * fp;
    const double b0 = (f0 - fm) * (f0 - fm);
    const double b1 = (fp - f0) * (fp - f0);
    const double a0 = (1.0 / 3.0) / ((b0 + weno_eps) * (b0 + weno_eps));
    const double a1 = (2.0 / 3.0) / ((b1 + weno_eps) * (b1 + weno_eps));
    return (a0 * p0 + a1 * p1) / (a0 + a1);
}

// Fill a padded row p[0 .. nx+3] with p[k] = f[k-2] inside and two ghost
// cells per side: copy of the nearest interior value for free-flow, wrap for
// periodic.
inline void pad_row(const double* f, int nx, Bc bc, double* p) {
    for (int i = 0; i < nx; ++i) p[i + 2] = f[i];
    if (bc == Bc::periodic) {
        p[0] = f[nx - 2];
        p[1] = f[nx - 1];
        p[nx + 2] = f[0];
        p[nx + 3] = f[1];
    } else {
        p[0] = p[1] = f[0];
        p[nx + 2] = p[nx + 3] = f[nx - 1];
    }
}

// Face values from a padded row; face e sits between cells e-1 and e
// (unpadded indexing), e = 0..nx.
inline void weno_faces_from_left(const double* p, int nx, double* face) {
    for (int e = 0; e <= nx; ++e) face[e] = weno23(p[e], p[e + 1], p[e + 2]);
}

inline void weno_faces_from_right(const double* p, int nx, double* face) {
    for (int e = 0; e <= nx; ++e) face[e] = weno23(p[e + 3], p[e + 2], p[e + 1]);
}

// One velocity row of the transport operator: out = -v d/dx f in
// conservative face-difference form, upwinded by the sign of v.
// scratch must hold (nx + 4) + (nx + 1) doubles.
inline void transport_row(const double* f, int nx, double v, double dx, Bc bc, double* out,
                          double* scratch) {
    double* p = scratch;
    double* face = scratch + nx + 4;
    pad_row(f, nx, bc, p);
    if (v >= 0.0)
        weno_faces_from_left(p, nx, face);
    else
        weno_faces_from_right(p, nx, face);
    const double s = v / dx;
    for (int i = 0; i < nx; ++i) out[i] = -s * (face[i + 1] - face[i]);
}

}  // namespace ktp

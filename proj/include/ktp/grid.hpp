#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ktp/util.hpp"

namespace ktp {

enum class Bc { free_flow, periodic };

inline std::string bc_name(Bc bc) { return bc == Bc::periodic ? "periodic" : "free-flow"; }

inline Bc bc_from_name(const std::string& s) {
    if (s == "periodic") return Bc::periodic;
    if (s == "free-flow") return Bc::free_flow;
    throw ConfigError("grid.bc: expected \"free-flow\" or \"periodic\", got \"" + s + "\"");
}

// Cell-centered in x, node-based in v.  Velocity integrals are the plain
// node sum times dv; the trapezoid end-corrections vanish anyway because the
// equilibria are compactly supported inside the domain.
struct PhaseGrid {
    double x_lo = -1.0, x_hi = 1.0;
    int nx = 100;
    double v_lo = -3.0, v_hi = 3.0;
    int nv = 600;  // number of velocity intervals; nodes = nv + 1
    Bc bc = Bc::free_flow;

    double dx() const { return (x_hi - x_lo) / nx; }
    double dv() const { return (v_hi - v_lo) / nv; }
    int nvn() const { return nv + 1; }
    double x_center(int i) const { return x_lo + (i + 0.5) * dx(); }
    double v_node(int j) const { return v_lo + j * dv(); }
    double vmax() const { return std::max(std::abs(v_lo), std::abs(v_hi)); }

    void validate() const {
        if (!(x_hi > x_lo)) throw ConfigError("grid: x_hi must exceed x_lo");
        if (!(v_hi > v_lo)) throw ConfigError("grid: v_hi must exceed v_lo");
        if (nx < 3) throw ConfigError("grid.nx: need at least 3 cells, got " + std::to_string(nx));
        if (nv < 4) throw ConfigError("grid.nv: need at least 4 intervals, got " + std::to_string(nv));
    }
};

// Distribution values for both species, laid out row-major in velocity:
// entry (s, j, i) lives at data[s][j*nx + i], so each velocity row is
// contiguous in x for the reconstruction sweeps.
struct DistributionField {
    int nx = 0, nvn = 0;
    std::array<std::vector<double>, 2> data;

    DistributionField() = default;
    DistributionField(int nx_, int nvn_) : nx(nx_), nvn(nvn_) {
        data[0].assign(static_cast<size_t>(nx) * nvn, 0.0);
        data[1].assign(static_cast<size_t>(nx) * nvn, 0.0);
    }

    double& at(int s, int j, int i) { return data[s][static_cast<size_t>(j) * nx + i]; }
    double at(int s, int j, int i) const { return data[s][static_cast<size_t>(j) * nx + i]; }
    double* row(int s, int j) { return data[s].data() + static_cast<size_t>(j) * nx; }
    const double* row(int s, int j) const { return data[s].data() + static_cast<size_t>(j) * nx; }
};

// Per-cell macroscopic observables of a two-species field.
struct MacroState {
    std::array<std::vector<double>, 2> n;  // number densities
    std::array<std::vector<double>, 2> u;  // species bulk velocities

    void resize(int nx) {
        for (int s = 0; s < 2; ++s) {
            n[s].assign(nx, 0.0);
            u[s].assign(nx, 0.0);
        }
    }
    int size() const { return static_cast<int>(n[0].size()); }
};

}  // namespace ktp

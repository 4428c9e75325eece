#pragma once

#include <stdexcept>

namespace schrod {

/// Particle mass and reduced Planck constant, shared by every phase formula.
struct PhysicalConstants {
    double m = 1.0;
    double hbar = 1.0;

    PhysicalConstants() = default;
    PhysicalConstants(double mass, double hbar_) : m(mass), hbar(hbar_) {
        if (!(m > 0.0)) throw std::invalid_argument("PhysicalConstants: m must be > 0");
        if (!(hbar > 0.0)) throw std::invalid_argument("PhysicalConstants: hbar must be > 0");
    }
};

} // namespace schrod

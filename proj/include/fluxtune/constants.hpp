#pragma once

#include <cmath>
#include <numbers>

#include "fluxtune/errors.hpp"

namespace fluxtune {

namespace si {

// 2019 SI exact values.
inline constexpr double planck_h = 6.62607015e-34;            // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double hbar = planck_h / (2.0 * std::numbers::pi);
inline constexpr double flux_quantum = planck_h / (2.0 * elementary_charge);  // Wb
inline constexpr double mu0 = 1.25663706212e-6;               // H/m

}  // namespace si

// Constant set used by the closed-form model. Defaults to the SI values;
// a custom set must stay internally consistent.
struct PhysicalConstants {
    double h = si::planck_h;       // J s
    double hbar = si::hbar;        // J s
    double e = si::elementary_charge;  // C
    double phi0 = si::flux_quantum;    // Wb, h/2e

    void validate() const {
        if (!(h > 0.0) || !(hbar > 0.0) || !(e > 0.0) || !(phi0 > 0.0)) {
            throw InvalidArgument("physical constants must be strictly positive");
        }
        const double phi0_ref = h / (2.0 * e);
        if (std::abs(phi0 - phi0_ref) > 1e-12 * phi0_ref) {
            throw InvalidArgument("phi0 inconsistent with h/2e beyond 1e-12 relative");
        }
        const double hbar_ref = h / (2.0 * std::numbers::pi);
        if (std::abs(hbar - hbar_ref) > 1e-12 * hbar_ref) {
            throw InvalidArgument("hbar inconsistent with h/2pi beyond 1e-12 relative");
        }
    }
};

}  // namespace fluxtune

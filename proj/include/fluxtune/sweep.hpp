#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fluxtune/model.hpp"
#include "fluxtune/photon.hpp"

namespace fluxtune {

namespace axis_kind {
inline constexpr const char* flux_squid = "flux_squid";        // Wb
inline constexpr const char* flux_qubit = "flux_qubit";        // Wb
inline constexpr const char* pump_frequency = "pump_frequency";  // Hz
inline constexpr const char* power = "power";                  // W
inline constexpr const char* frequency = "frequency";          // Hz
}  // namespace axis_kind

struct AxisSpec {
    std::string kind;
    std::string unit;
};

struct SweepGrid {
    std::vector<double> x_axis;
    std::vector<double> y_axis;
    AxisSpec x_meta;
    AxisSpec y_meta;

    void validate() const;
};

// Simulated signal contrast over a sweep grid; values[ix*ny + iy] in [0, 1].
struct SpectrumMap {
    SweepGrid grid;
    std::vector<double> values;  // row-major, x outer
    std::uint64_t seed = 0;

    std::size_t nx() const { return grid.x_axis.size(); }
    std::size_t ny() const { return grid.y_axis.size(); }
    double at(std::size_t ix, std::size_t iy) const { return values[ix * ny() + iy]; }
    double& at(std::size_t ix, std::size_t iy) { return values[ix * ny() + iy]; }

    void validate() const;
};

// Additive Gaussian noise plus a multiplicative ripple along the frequency
// axis. Draws are keyed by (seed, ix, iy), never by evaluation order.
struct NoiseSpec {
    double amplitude_sigma = 0.0;
    double ripple_amplitude = 0.0;
    double ripple_period = 0.0;  // Hz; must be > 0 when ripple_amplitude > 0
    std::uint64_t seed = 0;

    void validate() const;
};

// Fig-2(a)-style map: resonator dip vs Phi_SQ. Columns inside the
// frustration cutoff band are masked to the baseline.
SpectrumMap simulate_resonator_sweep(const DeviceParams& device, const SweepGrid& grid,
                                     const NoiseSpec& noise);

// Fig-2(b)-style map: hyperbolic qubit line vs Phi_FQ, optionally with the
// flat resonator line at the operating point superimposed.
SpectrumMap simulate_qubit_sweep(const DeviceParams& device, const SweepGrid& grid,
                                 const NoiseSpec& noise, bool include_resonator_line);

// Fig-3-style two-tone map: pump frequency on x, qubit probe on y. The mean
// photon number per column follows the Lorentzian drive response around
// resonance_center (pass <= 0 to use the bare resonator frequency at the
// operating point).
SpectrumMap simulate_two_tone(const DeviceParams& device, const SweepGrid& grid,
                              double resonance_center, double pump_power,
                              const DriveMapping& mapping, const NoiseSpec& noise);

// Fig-4(a)-style map: qubit spectrum vs drive power with the pump fixed on
// resonance, so mean photons = alpha * P.
SpectrumMap simulate_power_sweep(const DeviceParams& device, std::span<const double> powers,
                                 std::span<const double> probe_grid, const DriveMapping& mapping,
                                 const NoiseSpec& noise);

}  // namespace fluxtune

#include "fluxtune/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fluxtune/parallel.hpp"
#include "fluxtune/rng.hpp"

namespace fluxtune {

namespace {

bool strictly_monotone(const std::vector<double>& v) {
    if (v.empty()) return false;
    bool increasing = true, decreasing = true;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) increasing = false;
        if (!(v[i] < v[i - 1])) decreasing = false;
    }
    return increasing || decreasing;
}

// Peak-normalized Lorentzian (1 at the center), FWHM = width.
double lorentzian_peak(double f, double center, double width) {
    const double hw = 0.5 * width;
    const double df = f - center;
    return hw * hw / (df * df + hw * hw);
}

void require_axis(const AxisSpec& meta, const char* expected_kind, const char* where) {
    if (meta.kind != expected_kind) {
        throw InvalidArgument(std::string(where) + " expects x axis kind '" + expected_kind +
                              "', got '" + meta.kind + "'");
    }
}

// raw contrast -> noisy clipped signal; pure function of (noise.seed, ix, iy).
double apply_noise(double raw, double y, const NoiseSpec& noise, std::uint64_t ix,
                   std::uint64_t iy) {
    double value = raw;
    if (noise.ripple_amplitude > 0.0) {
        value *= 1.0 + noise.ripple_amplitude *
                           std::sin(2.0 * std::numbers::pi * y / noise.ripple_period);
    }
    if (noise.amplitude_sigma > 0.0) {
        value += noise.amplitude_sigma * standard_normal(pixel_key(noise.seed, ix, iy));
    }
    return std::clamp(value, 0.0, 1.0);
}

SpectrumMap make_map(const SweepGrid& grid, std::uint64_t seed) {
    SpectrumMap map;
    map.grid = grid;
    map.seed = seed;
    map.values.assign(grid.x_axis.size() * grid.y_axis.size(), 0.0);
    return map;
}

// Fills one column from per-photon-component line centers. Component weights
// sum to one, so the pre-noise contrast stays within [baseline, baseline+depth].
void fill_lineshape_column(SpectrumMap& map, std::size_t ix, const DeviceParams& device,
                           const PhotonDistribution& dist, const NoiseSpec& noise) {
    const auto& y = map.grid.y_axis;
    std::vector<double> shape =
        photon_weighted_lineshape(device, dist, std::span<const double>(y.data(), y.size()),
                                  device.qubit_linewidth);
    // unit-area components -> peak-normalized contrast
    const double to_contrast = std::numbers::pi * 0.5 * device.qubit_linewidth;
    for (std::size_t iy = 0; iy < y.size(); ++iy) {
        const double raw = device.baseline + device.contrast_depth * to_contrast * shape[iy];
        map.at(ix, iy) = apply_noise(raw, y[iy], noise, ix, iy);
    }
}

}  // namespace

void SweepGrid::validate() const {
    if (!strictly_monotone(x_axis)) {
        throw InvalidArgument("x axis must be nonempty and strictly monotone");
    }
    if (!strictly_monotone(y_axis)) {
        throw InvalidArgument("y axis must be nonempty and strictly monotone");
    }
}

void SpectrumMap::validate() const {
    grid.validate();
    if (values.size() != nx() * ny()) {
        throw InvalidArgument("values size does not match grid shape");
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidArgument("map contains non-finite values");
    }
}

void NoiseSpec::validate() const {
    if (!(amplitude_sigma >= 0.0)) {
        throw InvalidArgument("amplitude_sigma must be >= 0");
    }
    if (!(ripple_amplitude >= 0.0)) {
        throw InvalidArgument("ripple_amplitude must be >= 0");
    }
    if (ripple_amplitude > 0.0 && !(ripple_period > 0.0)) {
        throw InvalidArgument("ripple_period must be > 0 when ripple is enabled");
    }
}

SpectrumMap simulate_resonator_sweep(const DeviceParams& device, const SweepGrid& grid,
                                     const NoiseSpec& noise) {
    grid.validate();
    noise.validate();
    require_axis(grid.x_meta, axis_kind::flux_squid, "simulate_resonator_sweep");
    if (!(device.resonator_linewidth > 0.0)) {
        throw InvalidArgument("resonator_linewidth must be > 0");
    }

    SpectrumMap map = make_map(grid, noise.seed);
    parallel_for(grid.x_axis.size(), [&](std::size_t ix) {
        double center = 0.0;
        bool masked = false;
        try {
            center = resonator_frequency(grid.x_axis[ix], device.resonator) /
                     (2.0 * std::numbers::pi);
        } catch (const FluxTooCloseToFrustration&) {
            masked = true;  // mirror the missing data near frustration
        }
        for (std::size_t iy = 0; iy < grid.y_axis.size(); ++iy) {
            const double f = grid.y_axis[iy];
            const double raw =
                masked ? device.baseline
                       : device.baseline + device.contrast_depth *
                                               lorentzian_peak(f, center,
                                                               device.resonator_linewidth);
            map.at(ix, iy) = apply_noise(raw, f, noise, ix, iy);
        }
    });
    return map;
}

SpectrumMap simulate_qubit_sweep(const DeviceParams& device, const SweepGrid& grid,
                                 const NoiseSpec& noise, bool include_resonator_line) {
    grid.validate();
    noise.validate();
    require_axis(grid.x_meta, axis_kind::flux_qubit, "simulate_qubit_sweep");
    if (!(device.qubit_linewidth > 0.0)) {
        throw InvalidArgument("qubit_linewidth must be > 0");
    }

    // The resonator barely moves over the narrow qubit flux window; draw it
    // at the fixed operating point.
    double resonator_line = 0.0;
    if (include_resonator_line) {
        resonator_line = device_omega_r0(device) / (2.0 * std::numbers::pi);
        if (!(device.resonator_linewidth > 0.0)) {
            throw InvalidArgument("resonator_linewidth must be > 0");
        }
    }

    SpectrumMap map = make_map(grid, noise.seed);
    parallel_for(grid.x_axis.size(), [&](std::size_t ix) {
        const double eps = energy_detuning(grid.x_axis[ix], device.qubit);
        const double f_qubit = qubit_transition_frequency(eps, device.qubit);
        for (std::size_t iy = 0; iy < grid.y_axis.size(); ++iy) {
            const double f = grid.y_axis[iy];
            double peak = lorentzian_peak(f, f_qubit, device.qubit_linewidth);
            if (include_resonator_line) {
                peak = std::max(peak,
                                lorentzian_peak(f, resonator_line, device.resonator_linewidth));
            }
            const double raw = device.baseline + device.contrast_depth * peak;
            map.at(ix, iy) = apply_noise(raw, f, noise, ix, iy);
        }
    });
    return map;
}

SpectrumMap simulate_two_tone(const DeviceParams& device, const SweepGrid& grid,
                              double resonance_center, double pump_power,
                              const DriveMapping& mapping, const NoiseSpec& noise) {
    grid.validate();
    noise.validate();
    require_axis(grid.x_meta, axis_kind::pump_frequency, "simulate_two_tone");
    if (!(device.resonator_linewidth > 0.0)) {
        throw InvalidArgument("resonator_linewidth must be > 0");
    }
    if (resonance_center <= 0.0) {
        resonance_center = device_omega_r0(device) / (2.0 * std::numbers::pi);
    }

    SpectrumMap map = make_map(grid, noise.seed);
    const double center = resonance_center;
    parallel_for(grid.x_axis.size(), [&](std::size_t ix) {
        const double detuning = grid.x_axis[ix] - center;
        const double mean_n =
            power_to_mean_photons(pump_power, mapping, detuning, device.resonator_linewidth);
        const PhotonDistribution dist = poisson_weights(mean_n, default_truncation(mean_n));
        fill_lineshape_column(map, ix, device, dist, noise);
    });
    return map;
}

SpectrumMap simulate_power_sweep(const DeviceParams& device, std::span<const double> powers,
                                 std::span<const double> probe_grid, const DriveMapping& mapping,
                                 const NoiseSpec& noise) {
    SweepGrid grid;
    grid.x_axis.assign(powers.begin(), powers.end());
    grid.y_axis.assign(probe_grid.begin(), probe_grid.end());
    grid.x_meta = {axis_kind::power, "W"};
    grid.y_meta = {axis_kind::frequency, "Hz"};
    grid.validate();
    noise.validate();
    for (double p : powers) {
        if (!(p >= 0.0)) throw InvalidArgument("powers must be >= 0");
    }

    SpectrumMap map = make_map(grid, noise.seed);
    parallel_for(grid.x_axis.size(), [&](std::size_t ix) {
        // pump fixed on resonance
        const double mean_n = power_to_mean_photons(grid.x_axis[ix], mapping, 0.0,
                                                    device.resonator_linewidth);
        const PhotonDistribution dist = poisson_weights(mean_n, default_truncation(mean_n));
        fill_lineshape_column(map, ix, device, dist, noise);
    });
    return map;
}

}  // namespace fluxtune

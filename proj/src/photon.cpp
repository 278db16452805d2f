#include "fluxtune/photon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fluxtune/parallel.hpp"

namespace fluxtune {

int default_truncation(double mean_n) {
    if (!(mean_n >= 0.0)) {
        throw InvalidArgument("mean_n must be >= 0");
    }
    return static_cast<int>(std::ceil(mean_n + 10.0 * std::sqrt(mean_n) + 20.0));
}

PhotonDistribution poisson_weights(double mean_n, int nmax) {
    if (!(mean_n >= 0.0) || !std::isfinite(mean_n)) {
        throw InvalidArgument("mean_n must be finite and >= 0");
    }
    if (nmax < 0) {
        throw InvalidArgument("nmax must be >= 0");
    }

    PhotonDistribution dist;
    dist.mean_n = mean_n;
    dist.truncation_nmax = nmax;
    dist.weights.assign(static_cast<std::size_t>(nmax) + 1, 0.0);

    if (mean_n == 0.0) {
        dist.weights[0] = 1.0;
        return dist;
    }

    const double log_mean = std::log(mean_n);
    double total = 0.0;
    for (int n = 0; n <= nmax; ++n) {
        const double lw = -mean_n + n * log_mean - std::lgamma(static_cast<double>(n) + 1.0);
        const double w = std::exp(lw);
        dist.weights[static_cast<std::size_t>(n)] = w;
        total += w;
    }

    const double tail = std::max(0.0, 1.0 - total);
    if (tail > 1e-6) {
        std::ostringstream msg;
        msg << "tail mass " << tail << " beyond nmax=" << nmax << " exceeds 1e-6 for mean "
            << mean_n;
        throw TruncationTooSmall(msg.str());
    }

    for (double& w : dist.weights) w /= total;
    return dist;
}

TransitionCatalog joint_spectrum(const DeviceParams& device, int nmax) {
    if (nmax < 1) {
        throw InvalidArgument("nmax must be >= 1");
    }
    const double eps = device_epsilon(device);
    const double g = device_g(device);
    const double delta = device.qubit.gap_delta;
    const double omega0 = device_omega_r0(device);

    TransitionCatalog catalog;
    catalog.levels.reserve(2 * static_cast<std::size_t>(nmax));

    for (int n = 0; n < nmax; ++n) {
        const double occupancy = static_cast<double>(n) + 0.5;
        const double photon_energy = si::hbar * omega0 * occupancy;
        const double half_split = 0.5 * std::hypot(eps - g * occupancy, delta);
        catalog.levels.push_back({n, Branch::lower, photon_energy - half_split});
        catalog.levels.push_back({n, Branch::upper, photon_energy + half_split});
    }

    auto level_energy = [&](int n, Branch b) {
        return catalog.levels[2 * static_cast<std::size_t>(n) + (b == Branch::upper ? 1 : 0)]
            .energy;
    };

    for (int n = 0; n < nmax; ++n) {
        catalog.transitions.push_back(
            {n, Branch::lower, n, Branch::upper,
             (level_energy(n, Branch::upper) - level_energy(n, Branch::lower)) / si::planck_h,
             TransitionKind::qubit_like});
    }
    for (int n = 0; n + 1 < nmax; ++n) {
        for (Branch b : {Branch::lower, Branch::upper}) {
            catalog.transitions.push_back(
                {n, b, n + 1, b,
                 (level_energy(n + 1, b) - level_energy(n, b)) / si::planck_h,
                 TransitionKind::resonator_like});
        }
    }
    return catalog;
}

std::vector<double> photon_weighted_lineshape(const DeviceParams& device,
                                              const PhotonDistribution& dist,
                                              std::span<const double> probe_grid,
                                              double linewidth) {
    if (!(linewidth > 0.0)) {
        throw InvalidArgument("linewidth must be > 0");
    }
    const double eps = device_epsilon(device);
    const double g = device_g(device);
    const double delta = device.qubit.gap_delta;
    const double half_width = 0.5 * linewidth;
    const double hw2 = half_width * half_width;

    // Components below 1e-16 weight are dropped up front; the cut is a fixed
    // function of the distribution, so results stay schedule independent.
    struct Component {
        double center;
        double weight;
    };
    std::vector<Component> components;
    components.reserve(dist.weights.size());
    for (std::size_t n = 0; n < dist.weights.size(); ++n) {
        const double w = dist.weights[n];
        if (w <= 1e-16) continue;
        components.push_back(
            {shifted_qubit_frequency(eps, static_cast<double>(n), g, delta), w});
    }

    std::vector<double> amplitude(probe_grid.size(), 0.0);
    parallel_for(probe_grid.size(), [&](std::size_t i) {
        const double f = probe_grid[i];
        double acc = 0.0;
        for (const Component& c : components) {
            const double df = f - c.center;
            acc += c.weight * (half_width / std::numbers::pi) / (df * df + hw2);
        }
        amplitude[i] = acc;
    });
    return amplitude;
}

double power_to_mean_photons(double power, const DriveMapping& mapping, double drive_detuning,
                             double linewidth_kappa) {
    mapping.validate();
    if (!(power >= 0.0)) {
        throw InvalidArgument("power must be >= 0");
    }
    if (!(linewidth_kappa > 0.0)) {
        throw InvalidArgument("linewidth_kappa must be > 0");
    }
    const double half_kappa = 0.5 * linewidth_kappa;
    const double response =
        half_kappa * half_kappa / (half_kappa * half_kappa + drive_detuning * drive_detuning);
    return mapping.power_to_photons * power * response;
}

}  // namespace fluxtune

#pragma once

#include <span>
#include <vector>

#include "fluxtune/model.hpp"

namespace fluxtune {

// Generator power to intracavity photon conversion. The absolute scale is a
// calibration constant; power_reference only documents what one watt means.
struct DriveMapping {
    double power_to_photons = 0.0;  // photons per W on resonance
    double power_reference = 1.0;   // W

    void validate() const {
        if (!(power_to_photons >= 0.0)) {
            throw InvalidArgument("power_to_photons must be >= 0");
        }
        if (!(power_reference > 0.0)) {
            throw InvalidArgument("power_reference must be > 0");
        }
    }
};

// Truncated photon-number distribution, renormalized over [0, nmax].
struct PhotonDistribution {
    double mean_n = 0.0;
    std::vector<double> weights;  // w_0 .. w_nmax
    int truncation_nmax = 0;
};

// Truncation rule that keeps the Poisson tail below 1e-6 for any mean of
// interest: ceil(mean + 10 sqrt(mean) + 20).
int default_truncation(double mean_n);

// Coherent-state (Poisson) weights, computed in log space and renormalized.
// Throws TruncationTooSmall if the pre-normalization tail exceeds 1e-6.
PhotonDistribution poisson_weights(double mean_n, int nmax);

enum class Branch { lower, upper };
enum class TransitionKind { qubit_like, resonator_like };

struct EnergyLevel {
    int photon_index;
    Branch branch;
    double energy;  // J
};

struct Transition {
    int from_photon;
    Branch from_branch;
    int to_photon;
    Branch to_branch;
    double frequency;  // Hz
    TransitionKind kind;
};

// Eigenvalues and allowed transitions of the joint Hamiltonian, which is
// block diagonal in the photon number. Per block n:
//   E±(n) = hbar omega_r0 (n + 1/2) ± (1/2) sqrt([eps - g(n+1/2)]^2 + Delta^2)
struct TransitionCatalog {
    std::vector<EnergyLevel> levels;
    std::vector<Transition> transitions;
};

// Analytic spectrum of photon blocks 0 .. nmax-1 at the device operating point.
TransitionCatalog joint_spectrum(const DeviceParams& device, int nmax);

// Poisson-weighted sum of unit-area Lorentzians centered at the
// photon-number-shifted qubit frequencies. Output is in 1/Hz.
std::vector<double> photon_weighted_lineshape(const DeviceParams& device,
                                              const PhotonDistribution& dist,
                                              std::span<const double> probe_grid,
                                              double linewidth);

// Steady-state mean occupation of the driven resonator:
//   n = alpha P (kappa/2)^2 / [(kappa/2)^2 + detuning^2]
double power_to_mean_photons(double power, const DriveMapping& mapping, double drive_detuning,
                             double linewidth_kappa);

}  // namespace fluxtune

#pragma once

#include "fluxtune/constants.hpp"
#include "fluxtune/errors.hpp"

namespace fluxtune {

// Lumped-element resonator: line inductance L and capacitance C in series
// with a symmetric dc-SQUID that acts as a flux-tunable inductance.
struct ResonatorParams {
    double omega_lc;                // bare LC angular frequency, rad/s
    double inductance_l;            // H
    double capacitance_c;           // F
    double squid_critical_current;  // per-junction critical current, A
    double frustration_cutoff;      // lower bound on |cos(pi Phi/Phi0)|

    ResonatorParams(double omega_lc, double inductance_l, double capacitance_c,
                    double squid_critical_current, double frustration_cutoff = 1e-3);

    // Derives omega_lc = (LC)^{-1/2}.
    static ResonatorParams from_lc(double inductance_l, double capacitance_c,
                                   double squid_critical_current,
                                   double frustration_cutoff = 1e-3);
};

// Two-level flux qubit biased near the lobe picked by an odd lobe index.
struct FluxQubitParams {
    double gap_delta;           // energy gap, J
    double persistent_current;  // A
    int lobe_index;             // odd integer

    FluxQubitParams(double gap_delta, double persistent_current, int lobe_index);

    // Flux where the detuning vanishes: (lobe_index/2) Phi0.
    double sweet_spot_flux() const;
};

// Magnetic link between the qubit loop and the dc-SQUID.
struct CouplingParams {
    double mutual_inductance;  // H
    double slope_at_bias;      // d(omega_r)/d(Phi_SQ) at the operating point, rad/s per Wb

    CouplingParams(double mutual_inductance, double slope_at_bias);
};

// Direction of the qubit's circulating persistent current.
enum class QubitStateSign : int { positive = +1, negative = -1 };

constexpr int sign_value(QubitStateSign s) { return static_cast<int>(s); }

// One device: every parameter the sweep engine and fitters need.
struct DeviceParams {
    PhysicalConstants constants{};
    ResonatorParams resonator;
    FluxQubitParams qubit;
    CouplingParams coupling;
    double squid_bias = 0.0;            // operating Phi_SQ, Wb
    double qubit_bias = 0.0;            // operating Phi_FQ, Wb (absolute)
    double resonator_linewidth = 0.0;   // FWHM, Hz
    double qubit_linewidth = 0.0;       // FWHM, Hz
    double contrast_depth = 0.9;        // peak signal contrast
    double baseline = 0.05;             // background signal level
};

// Effective Josephson inductance of the symmetric dc-SQUID,
// Phi0 / (4 pi I_c |cos(pi Phi/Phi0)|). Periodic and even in the flux.
double squid_inductance(double phi_sq, const ResonatorParams& params);

// omega_LC / sqrt(1 + L_SQ/L), rad/s.
double resonator_frequency(double phi_sq, const ResonatorParams& params);

// Closed-form d(omega_r)/d(Phi_SQ), rad/s per Wb.
double resonator_slope(double phi_sq, const ResonatorParams& params);

// 2 I_p [Phi_FQ - (n/2) Phi0], J.
double energy_detuning(double phi_fq, const FluxQubitParams& params);

// sqrt(eps^2 + Delta^2)/h, Hz.
double qubit_transition_frequency(double epsilon, const FluxQubitParams& params);

// g = 2 hbar (d omega_r/d Phi_SQ) M I_p, J.
double coupling_strength(const CouplingParams& coupling, const FluxQubitParams& qubit);

// Resonator frequency pulled by the qubit state: omega_r0 - slope * M * I_p * sign,
// with the slope evaluated locally at phi_sq. rad/s.
double dressed_resonator_frequency(double phi_sq, QubitStateSign qubit_state,
                                   const ResonatorParams& params,
                                   const CouplingParams& coupling,
                                   const FluxQubitParams& qubit);

// Photon-number-shifted qubit frequency sqrt([eps - g(N+1/2)]^2 + Delta^2)/h, Hz.
// N may be a non-integer mean occupation.
double shifted_qubit_frequency(double epsilon, double photon_number, double g, double delta);

struct LinearizedQubitFrequency {
    double frequency;       // |eps - g(N+1/2)|/h, Hz
    double validity_ratio;  // |eps - g(N+1/2)|/Delta; +inf when Delta == 0
};

// Linearized shifted frequency, valid when validity_ratio >> 1.
LinearizedQubitFrequency linearized_qubit_frequency(double epsilon, double photon_number,
                                                    double g, double delta);

struct DispersiveShift {
    double total_shift;  // (g_c^2/delta)/h * N, Hz
    double per_photon;   // (g_c^2/delta)/h, Hz
    bool dispersive;     // |g_c/delta| < 1
};

// Per-photon pull a transversally coupled system would produce, for
// side-by-side comparison with shifted_qubit_frequency.
DispersiveShift dispersive_shift_comparator(double g_c, double delta_detuning,
                                            double photon_number);

// Convenience accessors for the device operating point.
double device_epsilon(const DeviceParams& device);
double device_omega_r0(const DeviceParams& device);
double device_g(const DeviceParams& device);

}  // namespace fluxtune

#include "fluxtune/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fluxtune {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw InvalidArgument(std::string(name) + " must be strictly positive and finite");
    }
}

}  // namespace

ResonatorParams::ResonatorParams(double omega_lc_, double inductance_l_, double capacitance_c_,
                                 double squid_critical_current_, double frustration_cutoff_)
    : omega_lc(omega_lc_),
      inductance_l(inductance_l_),
      capacitance_c(capacitance_c_),
      squid_critical_current(squid_critical_current_),
      frustration_cutoff(frustration_cutoff_) {
    require_positive(omega_lc, "omega_lc");
    require_positive(inductance_l, "inductance_l");
    require_positive(capacitance_c, "capacitance_c");
    require_positive(squid_critical_current, "squid_critical_current");
    if (!(frustration_cutoff > 0.0) || !(frustration_cutoff < 1.0)) {
        throw InvalidArgument("frustration_cutoff must lie in (0, 1)");
    }
    const double omega_ref = 1.0 / std::sqrt(inductance_l * capacitance_c);
    if (std::abs(omega_lc - omega_ref) > 1e-9 * omega_ref) {
        throw InvalidArgument("omega_lc inconsistent with (LC)^{-1/2} beyond 1e-9 relative");
    }
}

ResonatorParams ResonatorParams::from_lc(double inductance_l, double capacitance_c,
                                         double squid_critical_current,
                                         double frustration_cutoff) {
    require_positive(inductance_l, "inductance_l");
    require_positive(capacitance_c, "capacitance_c");
    const double omega = 1.0 / std::sqrt(inductance_l * capacitance_c);
    return ResonatorParams(omega, inductance_l, capacitance_c, squid_critical_current,
                           frustration_cutoff);
}

FluxQubitParams::FluxQubitParams(double gap_delta_, double persistent_current_, int lobe_index_)
    : gap_delta(gap_delta_), persistent_current(persistent_current_), lobe_index(lobe_index_) {
    require_positive(gap_delta, "gap_delta");
    require_positive(persistent_current, "persistent_current");
    if (lobe_index % 2 == 0) {
        throw InvalidArgument("lobe_index must be an odd integer");
    }
}

double FluxQubitParams::sweet_spot_flux() const {
    return 0.5 * static_cast<double>(lobe_index) * si::flux_quantum;
}

CouplingParams::CouplingParams(double mutual_inductance_, double slope_at_bias_)
    : mutual_inductance(mutual_inductance_), slope_at_bias(slope_at_bias_) {
    require_positive(mutual_inductance, "mutual_inductance");
    if (!std::isfinite(slope_at_bias)) {
        throw InvalidArgument("slope_at_bias must be finite");
    }
}

double squid_inductance(double phi_sq, const ResonatorParams& params) {
    const double c = std::cos(kPi * phi_sq / si::flux_quantum);
    if (std::abs(c) <= params.frustration_cutoff) {
        std::ostringstream msg;
        msg << "flux " << phi_sq / si::flux_quantum
            << " Phi0 is within the frustration cutoff band (|cos| <= "
            << params.frustration_cutoff << ")";
        throw FluxTooCloseToFrustration(msg.str());
    }
    return si::flux_quantum / (4.0 * kPi * params.squid_critical_current * std::abs(c));
}

double resonator_frequency(double phi_sq, const ResonatorParams& params) {
    const double l_sq = squid_inductance(phi_sq, params);
    return params.omega_lc / std::sqrt(1.0 + l_sq / params.inductance_l);
}

double resonator_slope(double phi_sq, const ResonatorParams& params) {
    const double l_sq = squid_inductance(phi_sq, params);
    const double omega = params.omega_lc / std::sqrt(1.0 + l_sq / params.inductance_l);
    // dL_SQ/dPhi = L_SQ (pi/Phi0) tan(pi Phi/Phi0)
    const double dl_dphi =
        l_sq * (kPi / si::flux_quantum) * std::tan(kPi * phi_sq / si::flux_quantum);
    return -0.5 * omega * dl_dphi / (params.inductance_l + l_sq);
}

double energy_detuning(double phi_fq, const FluxQubitParams& params) {
    return 2.0 * params.persistent_current * (phi_fq - params.sweet_spot_flux());
}

double qubit_transition_frequency(double epsilon, const FluxQubitParams& params) {
    return std::hypot(epsilon, params.gap_delta) / si::planck_h;
}

double coupling_strength(const CouplingParams& coupling, const FluxQubitParams& qubit) {
    return 2.0 * si::hbar * coupling.slope_at_bias * coupling.mutual_inductance *
           qubit.persistent_current;
}

double dressed_resonator_frequency(double phi_sq, QubitStateSign qubit_state,
                                   const ResonatorParams& params,
                                   const CouplingParams& coupling,
                                   const FluxQubitParams& qubit) {
    const double omega0 = resonator_frequency(phi_sq, params);
    const double slope = resonator_slope(phi_sq, params);
    return omega0 - static_cast<double>(sign_value(qubit_state)) * slope *
                        coupling.mutual_inductance * qubit.persistent_current;
}

double shifted_qubit_frequency(double epsilon, double photon_number, double g, double delta) {
    if (photon_number < 0.0) {
        throw InvalidArgument("photon_number must be >= 0");
    }
    return std::hypot(epsilon - g * (photon_number + 0.5), delta) / si::planck_h;
}

LinearizedQubitFrequency linearized_qubit_frequency(double epsilon, double photon_number,
                                                    double g, double delta) {
    const double x = std::abs(epsilon - g * (photon_number + 0.5));
    const double ratio =
        delta != 0.0 ? x / std::abs(delta) : std::numeric_limits<double>::infinity();
    return {x / si::planck_h, ratio};
}

DispersiveShift dispersive_shift_comparator(double g_c, double delta_detuning,
                                            double photon_number) {
    if (delta_detuning == 0.0) {
        throw ZeroDetuning("dispersive shift undefined at zero detuning");
    }
    const double per_photon = (g_c * g_c / delta_detuning) / si::planck_h;
    return {per_photon * photon_number, per_photon,
            std::abs(g_c / delta_detuning) < 1.0};
}

double device_epsilon(const DeviceParams& device) {
    return energy_detuning(device.qubit_bias, device.qubit);
}

double device_omega_r0(const DeviceParams& device) {
    return resonator_frequency(device.squid_bias, device.resonator);
}

double device_g(const DeviceParams& device) {
    return coupling_strength(device.coupling, device.qubit);
}

}  // namespace fluxtune

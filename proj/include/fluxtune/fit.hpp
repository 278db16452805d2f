#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fluxtune/model.hpp"
#include "fluxtune/sweep.hpp"

namespace fluxtune {

// Per-column peak positions pulled out of a SpectrumMap.
struct DroppedColumn {
    int index;
    double x;
    std::string reason;
};

struct RidgeTrace {
    std::vector<double> x;
    std::vector<double> peak_frequency;    // Hz
    std::vector<double> peak_uncertainty;  // Hz, strictly positive
    std::vector<DroppedColumn> dropped;
};

struct FitResult {
    std::vector<std::string> parameter_names;
    Eigen::VectorXd parameters;
    Eigen::MatrixXd covariance;
    double residual_norm = 0.0;  // ||weighted residuals||_2 at the optimum
    int iterations = 0;
    bool converged = false;
    std::vector<double> cost_history;  // accepted-step costs, monotone non-increasing

    double parameter(const std::string& name) const;
    double uncertainty(const std::string& name) const;
};

// ---- generic damped least squares ----------------------------------------

struct LeastSquaresProblem {
    int residual_count = 0;
    // r(theta) into a preallocated vector of residual_count entries
    std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> residuals;
    // optional analytic Jacobian; forward differences otherwise
    std::function<void(const Eigen::VectorXd&, Eigen::MatrixXd&)> jacobian;
};

struct LevenbergMarquardtOptions {
    double initial_lambda = 1e-3;
    double lambda_up = 10.0;
    double lambda_down = 0.1;
    int max_iterations = 200;
    double gradient_tolerance = 1e-8;   // on the column-scaled gradient
    double fd_relative_step = 1e-7;
    bool throw_on_max_iterations = false;
};

// Levenberg-Marquardt with Marquardt diagonal scaling. Accepted steps never
// increase the cost. Throws SingularJacobian on rank-deficient problems.
FitResult levenberg_marquardt(const LeastSquaresProblem& problem,
                              const Eigen::VectorXd& initial,
                              const std::vector<std::string>& names,
                              const LevenbergMarquardtOptions& options = {});

// ---- ridge extraction ------------------------------------------------------

struct RidgeOptions {
    double window_low;   // Hz
    double window_high;  // Hz
    double min_contrast = 0.02;  // columns below this peak-to-floor contrast are dropped
};

// Per column: local Lorentzian fit around the in-window argmax. Equal maxima
// break toward the lower frequency. Columns without a usable peak are
// reported in `dropped`.
RidgeTrace extract_ridge(const SpectrumMap& map, const RidgeOptions& options);

// ---- physics fits ----------------------------------------------------------

// Fits (gap_delta, persistent_current, flux_offset) of the two-level qubit
// dispersion to a ridge over qubit flux. Frequencies in Hz, flux in Wb.
FitResult fit_qubit_spectrum(const RidgeTrace& trace, const FluxQubitParams& initial);

enum class PhotonConvention { n_plus_half, n };

struct PowerFitSettings {
    double power_cutoff = 0.8e-3;  // W; points above never enter the residual
    PhotonConvention convention = PhotonConvention::n_plus_half;
    bool fit_offset = true;        // free constant inside the bracket
    double initial_g_alpha = 0.0;  // J per W; 0 = estimate from the trace
    double initial_offset = 0.0;   // J
};

// Fits the product g*alpha (and optionally the zero-point offset) of
//   h f = sqrt([eps - (G P + B)]^2 + Delta^2)
// to a ridge over power. Under the n_plus_half convention the fitted offset
// estimates g/2; under n it reports any residual offset.
FitResult fit_power_dependence(const RidgeTrace& trace, double gap_delta, double epsilon,
                               const PowerFitSettings& settings = {});

struct ResonatorFitSettings {
    bool fit_period_scale = false;          // extra flux-axis scale parameter
    std::optional<double> report_slope_at;  // Wb; adds slope (+ sigma) to the result
};

// Fits (omega_lc, squid_critical_current, flux_offset[, period_scale]) of the
// tunable-resonator dispersion to a ridge over Phi_SQ. The line inductance is
// held at its initial value (only the ratio L_SQ/L is identifiable).
FitResult fit_resonator_spectrum(const RidgeTrace& trace, const ResonatorParams& initial,
                                 const ResonatorFitSettings& settings = {});

}  // namespace fluxtune

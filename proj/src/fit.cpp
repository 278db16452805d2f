#include "fluxtune/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fluxtune/parallel.hpp"

namespace fluxtune {

namespace {

constexpr double kPi = std::numbers::pi;

void check_trace(const RidgeTrace& trace, std::size_t minimum_points) {
    if (trace.x.size() != trace.peak_frequency.size() ||
        trace.x.size() != trace.peak_uncertainty.size()) {
        throw InvalidArgument("ridge trace arrays must have equal length");
    }
    if (trace.x.size() < minimum_points) {
        throw InvalidArgument("ridge trace has too few points for this fit");
    }
    for (double s : trace.peak_uncertainty) {
        if (!(s > 0.0)) throw InvalidArgument("ridge uncertainties must be positive");
    }
}

}  // namespace

double FitResult::parameter(const std::string& name) const {
    for (std::size_t i = 0; i < parameter_names.size(); ++i) {
        if (parameter_names[i] == name) return parameters[static_cast<Eigen::Index>(i)];
    }
    throw InvalidArgument("no fitted parameter named '" + name + "'");
}

double FitResult::uncertainty(const std::string& name) const {
    for (std::size_t i = 0; i < parameter_names.size(); ++i) {
        if (parameter_names[i] == name) {
            const auto k = static_cast<Eigen::Index>(i);
            return std::sqrt(std::max(0.0, covariance(k, k)));
        }
    }
    throw InvalidArgument("no fitted parameter named '" + name + "'");
}

FitResult levenberg_marquardt(const LeastSquaresProblem& problem, const Eigen::VectorXd& initial,
                              const std::vector<std::string>& names,
                              const LevenbergMarquardtOptions& options) {
    const int p = static_cast<int>(initial.size());
    const int m = problem.residual_count;
    if (p < 1 || m < 1) throw InvalidArgument("need at least one parameter and one residual");
    if (m < p) throw InvalidArgument("fewer residuals than parameters");
    if (static_cast<int>(names.size()) != p) {
        throw InvalidArgument("parameter name count does not match");
    }

    Eigen::VectorXd theta = initial;
    Eigen::VectorXd r(m), r_trial(m);

    auto try_eval = [&](const Eigen::VectorXd& th, Eigen::VectorXd& out) -> bool {
        try {
            problem.residuals(th, out);
        } catch (const Error&) {
            return false;
        }
        return out.allFinite();
    };

    if (!try_eval(theta, r)) {
        throw InvalidArgument("residuals undefined at the initial parameters");
    }
    double cost = r.squaredNorm();

    Eigen::MatrixXd jac(m, p);
    auto eval_jacobian = [&](const Eigen::VectorXd& th, const Eigen::VectorXd& r_at) {
        if (problem.jacobian) {
            problem.jacobian(th, jac);
            return;
        }
        // forward differences, backward when the forward point is infeasible
        Eigen::VectorXd shifted = th, rp(m);
        for (int j = 0; j < p; ++j) {
            const double step = options.fd_relative_step * std::max(std::abs(th[j]), 1.0);
            shifted[j] = th[j] + step;
            if (try_eval(shifted, rp)) {
                jac.col(j) = (rp - r_at) / step;
            } else {
                shifted[j] = th[j] - step;
                if (!try_eval(shifted, rp)) {
                    throw SingularJacobian("finite differences failed on both sides");
                }
                jac.col(j) = (r_at - rp) / step;
            }
            shifted[j] = th[j];
        }
    };

    FitResult result;
    result.parameter_names = names;
    result.cost_history.push_back(cost);

    Eigen::VectorXd scale = Eigen::VectorXd::Ones(p);
    bool scale_initialized = false;
    double lambda = options.initial_lambda;
    Eigen::MatrixXd a(p, p);
    Eigen::VectorXd gradient(p);

    auto build_scaled_system = [&]() {
        for (int j = 0; j < p; ++j) {
            const double norm = jac.col(j).norm();
            if (!scale_initialized) {
                scale[j] = norm > 0.0 ? norm : 1.0;
            } else if (norm > scale[j]) {
                scale[j] = norm;
            }
        }
        scale_initialized = true;
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < p; ++j) a(i, j) = jtj(i, j) / (scale[i] * scale[j]);
        }
        gradient = (jac.transpose() * r).cwiseQuotient(scale);
    };

    auto check_rank = [&]() {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
        const double max_eig = eig.eigenvalues().maxCoeff();
        const double min_eig = eig.eigenvalues().minCoeff();
        if (!(max_eig > 0.0) || min_eig <= 1e-14 * max_eig) {
            throw SingularJacobian("scaled normal equations are rank deficient");
        }
    };

    int iterations = 0;
    bool converged = false;
    for (; iterations < options.max_iterations; ++iterations) {
        eval_jacobian(theta, r);
        build_scaled_system();
        check_rank();

        if (gradient.lpNorm<Eigen::Infinity>() <=
            options.gradient_tolerance * std::max(1.0, cost)) {
            converged = true;
            break;
        }

        bool stepped = false;
        while (true) {
            Eigen::MatrixXd damped = a;
            damped.diagonal() += lambda * a.diagonal();
            const Eigen::VectorXd delta_scaled = damped.ldlt().solve(-gradient);
            if (!delta_scaled.allFinite()) {
                throw SingularJacobian("damped normal equations produced a non-finite step");
            }
            const Eigen::VectorXd trial = theta + delta_scaled.cwiseQuotient(scale);
            if (try_eval(trial, r_trial)) {
                const double trial_cost = r_trial.squaredNorm();
                if (trial_cost < cost) {
                    theta = trial;
                    r = r_trial;
                    cost = trial_cost;
                    result.cost_history.push_back(cost);
                    lambda = std::max(lambda * options.lambda_down, 1e-15);
                    stepped = true;
                    break;
                }
            }
            lambda *= options.lambda_up;
            if (lambda > 1e15) break;
        }
        if (!stepped) {
            converged = gradient.lpNorm<Eigen::Infinity>() <=
                        options.gradient_tolerance * std::max(1.0, cost);
            break;
        }
    }

    if (!converged && iterations >= options.max_iterations &&
        options.throw_on_max_iterations) {
        throw MaxIterationsExceeded("no convergence within the iteration cap");
    }

    // covariance from J^T J at the final point, scaled by reduced chi-square
    eval_jacobian(theta, r);
    build_scaled_system();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    const double max_eig = eig.eigenvalues().maxCoeff();
    Eigen::VectorXd inv_eigs(p);
    for (int i = 0; i < p; ++i) {
        const double value = eig.eigenvalues()[i];
        inv_eigs[i] = value > 1e-14 * max_eig ? 1.0 / value : 0.0;
    }
    const Eigen::MatrixXd a_inverse =
        eig.eigenvectors() * inv_eigs.asDiagonal() * eig.eigenvectors().transpose();
    const double variance_scale = m > p ? cost / static_cast<double>(m - p) : 1.0;
    Eigen::MatrixXd covariance(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            covariance(i, j) = variance_scale * a_inverse(i, j) / (scale[i] * scale[j]);
        }
    }
    covariance = 0.5 * (covariance + covariance.transpose()).eval();

    result.parameters = theta;
    result.covariance = covariance;
    result.residual_norm = std::sqrt(cost);
    result.iterations = iterations;
    result.converged = converged;
    return result;
}

// ---- ridge extraction ------------------------------------------------------

namespace {

struct ColumnPeak {
    bool ok = false;
    double frequency = 0.0;
    double sigma = 0.0;
    std::string reason;
};

// One column: argmax in the window, then a local 4-parameter Lorentzian fit.
ColumnPeak fit_column_peak(const std::vector<double>& freq, const std::vector<double>& value,
                           const RidgeOptions& options) {
    ColumnPeak out;
    const std::size_t n = freq.size();

    std::size_t peak = 0;
    double floor_value = value[0];
    for (std::size_t i = 0; i < n; ++i) {
        if (value[i] > value[peak]) peak = i;  // strict: ties keep the lower frequency
        floor_value = std::min(floor_value, value[i]);
    }
    const double contrast = value[peak] - floor_value;
    if (contrast < options.min_contrast) {
        out.reason = "no peak above contrast threshold";
        return out;
    }

    // points around the peak down to 20% of the contrast, with margin
    const double keep_level = floor_value + 0.2 * contrast;
    std::size_t lo = peak, hi = peak;
    while (lo > 0 && value[lo - 1] >= keep_level) --lo;
    while (hi + 1 < n && value[hi + 1] >= keep_level) ++hi;
    for (int extra = 0; extra < 3; ++extra) {
        if (lo > 0) --lo;
        if (hi + 1 < n) ++hi;
    }
    while (hi - lo + 1 < 7 && (lo > 0 || hi + 1 < n)) {
        if (lo > 0) --lo;
        if (hi + 1 < n) ++hi;
    }
    const std::size_t points = hi - lo + 1;
    if (points < 5) {
        out.reason = "too few samples around the peak";
        return out;
    }

    double step = (freq[hi] - freq[lo]) / static_cast<double>(points - 1);
    // initial width from the half-maximum crossings
    const double half_level = floor_value + 0.5 * contrast;
    double left = freq[peak], right = freq[peak];
    for (std::size_t i = peak; i > lo; --i) {
        if (value[i - 1] < half_level) break;
        left = freq[i - 1];
    }
    for (std::size_t i = peak; i < hi; ++i) {
        if (value[i + 1] < half_level) break;
        right = freq[i + 1];
    }
    double width = std::max(right - left, step);

    LeastSquaresProblem problem;
    problem.residual_count = static_cast<int>(points);
    auto model = [&](const Eigen::VectorXd& th, std::size_t i) {
        const double hw = 0.5 * th[1];
        const double df = freq[lo + i] - th[0];
        return th[3] + th[2] * hw * hw / (df * df + hw * hw);
    };
    problem.residuals = [&](const Eigen::VectorXd& th, Eigen::VectorXd& res) {
        for (std::size_t i = 0; i < points; ++i) res[static_cast<Eigen::Index>(i)] =
            model(th, i) - value[lo + i];
    };
    problem.jacobian = [&](const Eigen::VectorXd& th, Eigen::MatrixXd& jac) {
        const double hw = 0.5 * th[1];
        for (std::size_t i = 0; i < points; ++i) {
            const double df = freq[lo + i] - th[0];
            const double den = df * df + hw * hw;
            const auto row = static_cast<Eigen::Index>(i);
            jac(row, 0) = th[2] * hw * hw * 2.0 * df / (den * den);
            jac(row, 1) = th[2] * hw * df * df / (den * den);
            jac(row, 2) = hw * hw / den;
            jac(row, 3) = 1.0;
        }
    };

    Eigen::VectorXd initial(4);
    initial << freq[peak], width, contrast, floor_value;
    FitResult fit;
    try {
        fit = levenberg_marquardt(problem, initial, {"center", "width", "amplitude", "offset"});
    } catch (const Error& err) {
        out.reason = std::string("peak fit failed: ") + err.what();
        return out;
    }
    const double center = fit.parameters[0];
    if (!fit.converged || !std::isfinite(center) || center < options.window_low ||
        center > options.window_high) {
        out.reason = "peak fit did not converge inside the window";
        return out;
    }
    out.ok = true;
    out.frequency = center;
    out.sigma = std::max(fit.uncertainty("center"), 1e-6 * step);
    return out;
}

}  // namespace

RidgeTrace extract_ridge(const SpectrumMap& map, const RidgeOptions& options) {
    map.validate();
    if (!(options.window_low < options.window_high)) {
        throw InvalidArgument("ridge window must satisfy low < high");
    }

    // window samples in ascending frequency order
    std::vector<std::size_t> window_index;
    for (std::size_t iy = 0; iy < map.ny(); ++iy) {
        const double f = map.grid.y_axis[iy];
        if (f >= options.window_low && f <= options.window_high) window_index.push_back(iy);
    }
    if (window_index.empty()) {
        throw InvalidArgument("ridge window does not intersect the frequency axis");
    }
    std::sort(window_index.begin(), window_index.end(), [&](std::size_t a, std::size_t b) {
        return map.grid.y_axis[a] < map.grid.y_axis[b];
    });

    std::vector<double> freq(window_index.size());
    for (std::size_t i = 0; i < window_index.size(); ++i) {
        freq[i] = map.grid.y_axis[window_index[i]];
    }

    std::vector<ColumnPeak> peaks(map.nx());
    parallel_for(map.nx(), [&](std::size_t ix) {
        std::vector<double> column(window_index.size());
        for (std::size_t i = 0; i < window_index.size(); ++i) {
            column[i] = map.at(ix, window_index[i]);
        }
        peaks[ix] = fit_column_peak(freq, column, options);
    });

    RidgeTrace trace;
    for (std::size_t ix = 0; ix < map.nx(); ++ix) {
        if (peaks[ix].ok) {
            trace.x.push_back(map.grid.x_axis[ix]);
            trace.peak_frequency.push_back(peaks[ix].frequency);
            trace.peak_uncertainty.push_back(peaks[ix].sigma);
        } else {
            trace.dropped.push_back(
                {static_cast<int>(ix), map.grid.x_axis[ix], peaks[ix].reason});
        }
    }
    return trace;
}

// ---- physics fits ----------------------------------------------------------

FitResult fit_qubit_spectrum(const RidgeTrace& trace, const FluxQubitParams& initial) {
    check_trace(trace, 3);
    const double sweet_spot = initial.sweet_spot_flux();
    bool below = false, above = false;
    for (double x : trace.x) {
        below = below || x < sweet_spot;
        above = above || x > sweet_spot;
    }
    if (!below || !above) {
        throw InvalidArgument("trace must span both sides of the sweet spot");
    }

    const std::size_t m = trace.x.size();
    LeastSquaresProblem problem;
    problem.residual_count = static_cast<int>(m);
    problem.residuals = [&](const Eigen::VectorXd& th, Eigen::VectorXd& res) {
        for (std::size_t i = 0; i < m; ++i) {
            const double eps = 2.0 * th[1] * (trace.x[i] - sweet_spot - th[2]);
            const double f = std::hypot(eps, th[0]) / si::planck_h;
            res[static_cast<Eigen::Index>(i)] =
                (f - trace.peak_frequency[i]) / trace.peak_uncertainty[i];
        }
    };
    problem.jacobian = [&](const Eigen::VectorXd& th, Eigen::MatrixXd& jac) {
        for (std::size_t i = 0; i < m; ++i) {
            const double dx = trace.x[i] - sweet_spot - th[2];
            const double eps = 2.0 * th[1] * dx;
            const double hyp = std::hypot(eps, th[0]);
            const double w = 1.0 / trace.peak_uncertainty[i];
            const auto row = static_cast<Eigen::Index>(i);
            jac(row, 0) = w * th[0] / (si::planck_h * hyp);
            jac(row, 1) = w * eps * 2.0 * dx / (si::planck_h * hyp);
            jac(row, 2) = w * eps * (-2.0 * th[1]) / (si::planck_h * hyp);
        }
    };

    Eigen::VectorXd start(3);
    start << initial.gap_delta, initial.persistent_current, 0.0;
    FitResult result = levenberg_marquardt(
        problem, start, {"gap_delta", "persistent_current", "flux_offset"});
    // the dispersion is even in both; report the physical sign
    result.parameters[0] = std::abs(result.parameters[0]);
    result.parameters[1] = std::abs(result.parameters[1]);
    return result;
}

FitResult fit_power_dependence(const RidgeTrace& trace, double gap_delta, double epsilon,
                               const PowerFitSettings& settings) {
    check_trace(trace, 2);
    std::vector<double> power, freq, sigma;
    for (std::size_t i = 0; i < trace.x.size(); ++i) {
        if (trace.x[i] <= settings.power_cutoff) {
            power.push_back(trace.x[i]);
            freq.push_back(trace.peak_frequency[i]);
            sigma.push_back(trace.peak_uncertainty[i]);
        }
    }
    const std::size_t m = power.size();
    const int p = settings.fit_offset ? 2 : 1;
    if (static_cast<int>(m) <= p) {
        throw InvalidArgument("too few points below the power cutoff");
    }

    double g_alpha0 = settings.initial_g_alpha;
    if (g_alpha0 == 0.0) {
        const auto [pmin, pmax] = std::minmax_element(power.begin(), power.end());
        const double span = *pmax - *pmin;
        if (span > 0.0) {
            const double f_lo = freq[static_cast<std::size_t>(pmin - power.begin())];
            const double f_hi = freq[static_cast<std::size_t>(pmax - power.begin())];
            g_alpha0 = std::abs(si::planck_h * (f_hi - f_lo) / span);
        }
        if (g_alpha0 == 0.0) g_alpha0 = gap_delta;  // flat trace; any finite scale
    }

    const double fixed_offset = settings.initial_offset;
    auto bracket = [&](const Eigen::VectorXd& th, double pw) {
        const double offset = settings.fit_offset ? th[1] : fixed_offset;
        return epsilon - (th[0] * pw + offset);
    };

    LeastSquaresProblem problem;
    problem.residual_count = static_cast<int>(m);
    problem.residuals = [&](const Eigen::VectorXd& th, Eigen::VectorXd& res) {
        for (std::size_t i = 0; i < m; ++i) {
            const double f = std::hypot(bracket(th, power[i]), gap_delta) / si::planck_h;
            res[static_cast<Eigen::Index>(i)] = (f - freq[i]) / sigma[i];
        }
    };
    problem.jacobian = [&](const Eigen::VectorXd& th, Eigen::MatrixXd& jac) {
        for (std::size_t i = 0; i < m; ++i) {
            const double u = bracket(th, power[i]);
            const double hyp = std::hypot(u, gap_delta);
            const double w = 1.0 / sigma[i];
            const auto row = static_cast<Eigen::Index>(i);
            jac(row, 0) = w * u * (-power[i]) / (si::planck_h * hyp);
            if (settings.fit_offset) jac(row, 1) = w * u * (-1.0) / (si::planck_h * hyp);
        }
    };

    Eigen::VectorXd start(p);
    std::vector<std::string> names{"g_alpha"};
    start[0] = g_alpha0;
    if (settings.fit_offset) {
        start[1] = settings.initial_offset;
        names.push_back(settings.convention == PhotonConvention::n_plus_half
                            ? "zero_point_offset"
                            : "residual_offset");
    }
    return levenberg_marquardt(problem, start, names);
}

namespace {

// Tunable-resonator dispersion and its flux derivatives at one effective flux.
struct ResonatorModelPoint {
    double omega;        // rad/s
    double omega_prime;  // rad/s per Wb
    double omega_second; // rad/s per Wb^2
    double ratio;        // L_SQ / L
};

ResonatorModelPoint resonator_model_point(double phi_eff, double omega_lc, double critical_current,
                                          double inductance_l, double cutoff) {
    const double u = kPi * phi_eff / si::flux_quantum;
    const double c = std::cos(u);
    if (std::abs(c) <= cutoff) {
        throw FluxTooCloseToFrustration("fit point inside the frustration cutoff band");
    }
    if (!(critical_current > 0.0) || !(omega_lc > 0.0)) {
        throw FluxTooCloseToFrustration("unphysical trial parameters");
    }
    const double l_sq = si::flux_quantum / (4.0 * kPi * critical_current * std::abs(c));
    const double ratio = l_sq / inductance_l;
    const double k = kPi / si::flux_quantum;
    const double t = std::tan(u);
    const double ratio_prime = ratio * k * t;
    const double ratio_second = k * k * ratio * (1.0 + 2.0 * t * t);
    const double root = std::sqrt(1.0 + ratio);
    ResonatorModelPoint out;
    out.omega = omega_lc / root;
    out.omega_prime = -0.5 * omega_lc * ratio_prime / (root * root * root);
    out.omega_second = -0.5 * omega_lc *
                       (ratio_second / (root * root * root) -
                        1.5 * ratio_prime * ratio_prime / (root * root * root * root * root));
    out.ratio = ratio;
    return out;
}

}  // namespace

FitResult fit_resonator_spectrum(const RidgeTrace& trace, const ResonatorParams& initial,
                                 const ResonatorFitSettings& settings) {
    check_trace(trace, 5);
    const std::size_t m = trace.x.size();
    const double inductance_l = initial.inductance_l;
    const double cutoff = initial.frustration_cutoff;
    const int p = settings.fit_period_scale ? 4 : 3;

    auto effective_flux = [&](const Eigen::VectorXd& th, double x) {
        const double scale = settings.fit_period_scale ? th[3] : 1.0;
        return scale * x - th[2];
    };

    LeastSquaresProblem problem;
    problem.residual_count = static_cast<int>(m);
    problem.residuals = [&](const Eigen::VectorXd& th, Eigen::VectorXd& res) {
        for (std::size_t i = 0; i < m; ++i) {
            const auto pt = resonator_model_point(effective_flux(th, trace.x[i]), th[0], th[1],
                                                  inductance_l, cutoff);
            res[static_cast<Eigen::Index>(i)] =
                (pt.omega / (2.0 * kPi) - trace.peak_frequency[i]) / trace.peak_uncertainty[i];
        }
    };
    problem.jacobian = [&](const Eigen::VectorXd& th, Eigen::MatrixXd& jac) {
        for (std::size_t i = 0; i < m; ++i) {
            const auto pt = resonator_model_point(effective_flux(th, trace.x[i]), th[0], th[1],
                                                  inductance_l, cutoff);
            const double w = 1.0 / (2.0 * kPi * trace.peak_uncertainty[i]);
            const auto row = static_cast<Eigen::Index>(i);
            jac(row, 0) = w * pt.omega / th[0];
            jac(row, 1) = w * 0.5 * pt.omega * pt.ratio / (th[1] * (1.0 + pt.ratio));
            jac(row, 2) = w * (-pt.omega_prime);
            if (settings.fit_period_scale) jac(row, 3) = w * pt.omega_prime * trace.x[i];
        }
    };

    Eigen::VectorXd start(p);
    start[0] = initial.omega_lc;
    start[1] = initial.squid_critical_current;
    start[2] = 0.0;
    std::vector<std::string> names{"omega_lc", "squid_critical_current", "flux_offset"};
    if (settings.fit_period_scale) {
        start[3] = 1.0;
        names.push_back("period_scale");
    }

    FitResult result = levenberg_marquardt(problem, start, names);
    result.parameters[1] = std::abs(result.parameters[1]);

    if (settings.report_slope_at) {
        // derived slope d(omega_r)/d(Phi_SQ) at the requested operating point,
        // with its variance propagated through the fit covariance
        const Eigen::VectorXd& th = result.parameters;
        const double scale = settings.fit_period_scale ? th[3] : 1.0;
        const double phi_op = *settings.report_slope_at;
        const auto pt = resonator_model_point(scale * phi_op - th[2], th[0], th[1], inductance_l,
                                              cutoff);
        const double slope = scale * pt.omega_prime;

        Eigen::VectorXd grad = Eigen::VectorXd::Zero(p);
        grad[0] = slope / th[0];
        grad[1] = -(slope / th[1]) * (1.0 - 1.5 * pt.ratio / (1.0 + pt.ratio));
        grad[2] = -scale * pt.omega_second;
        if (settings.fit_period_scale) {
            grad[3] = pt.omega_prime + scale * pt.omega_second * phi_op;
        }
        const double variance = grad.dot(result.covariance * grad);

        Eigen::VectorXd extended(p + 1);
        extended.head(p) = result.parameters;
        extended[p] = slope;
        Eigen::MatrixXd extended_cov(p + 1, p + 1);
        extended_cov.topLeftCorner(p, p) = result.covariance;
        extended_cov.block(0, p, p, 1) = result.covariance * grad;
        extended_cov.block(p, 0, 1, p) = (result.covariance * grad).transpose();
        extended_cov(p, p) = variance;
        result.parameters = extended;
        result.covariance = extended_cov;
        result.parameter_names.push_back("slope_at_operating_point");
    }
    return result;
}

}  // namespace fluxtune

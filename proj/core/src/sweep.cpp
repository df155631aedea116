#include "homsim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "json.hpp"

#include "homsim/numerics.hpp"

namespace homsim::sweep {

namespace {

using closedform::InterferenceModel;

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double clamp_probability(double pc) {
    if (pc < 0.0 and pc > -1e-12)
        return 0.0;
    if (pc > 1.0 and pc < 1.0 + 1e-12)
        return 1.0;
    return pc;
}

double interp_crossing(const CurvePoint& a, const CurvePoint& b, double level) {
    return a.dtau + (level - a.pc) * (b.dtau - a.dtau) / (b.pc - a.pc);
}

CurveSummary summarize(const std::vector<CurvePoint>& points, double max_bound) {
    CurveSummary s;
    s.pc_min = std::numeric_limits<double>::infinity();
    s.pc_max = -std::numeric_limits<double>::infinity();
    for (const CurvePoint& p : points) {
        if (p.pc < s.pc_min) {
            s.pc_min = p.pc;
            s.pc_min_dtau = p.dtau;
        }
        if (p.pc > s.pc_max) {
            s.pc_max = p.pc;
            s.pc_max_dtau = p.dtau;
        }
    }
    const double level = 0.5 - 1e-12;
    bool open = false;
    double lo = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const bool below = points[i].pc < level;
        if (below and not open) {
            open = true;
            lo = i == 0 ? points[0].dtau
                        : interp_crossing(points[i - 1], points[i], level);
        } else if (not below and open) {
            open = false;
            s.bunching_windows.push_back(
                {lo, interp_crossing(points[i - 1], points[i], level)});
        }
    }
    if (open)
        s.bunching_windows.push_back({lo, points.back().dtau});
    s.max_pc_error_bound = max_bound;
    return s;
}

nlohmann::ordered_json params_json(const SourceParams& p) {
    return {{"pump_freq_radps", p.pump_freq},
            {"detuning_mu_radps", p.detuning_mu},
            {"bandwidth_xi_radps", p.bandwidth_xi},
            {"symmetry_phase_phi_rad", p.symmetry_phase_phi},
            {"bs_phase_theta_rad", p.bs_phase_theta}};
}

nlohmann::ordered_json range_json(const Range& r) {
    return {{"start", r.start}, {"end", r.end}, {"steps", r.steps}};
}

} // namespace

void validate(const Range& range) {
    if (not std::isfinite(range.start) or not std::isfinite(range.end))
        throw ParameterDomainError("range endpoints must be finite");
    if (range.steps < 2)
        throw ParameterDomainError("a range needs at least 2 steps");
    if (not(range.start < range.end))
        throw ParameterDomainError("range start must be below its end");
}

const char* to_string(EnginePath path) {
    return path == EnginePath::ClosedForm ? "closed" : "numeric";
}

double closed_visibility(InterferenceModel model, const SourceParams& params,
                         double dtau) {
    const double mu = params.detuning_mu;
    const double xi = params.bandwidth_xi;
    const double phi = params.symmetry_phase_phi;
    switch (model) {
    case InterferenceModel::EntangledFull:
        if (phi == num::pi and 2.0 * mu / xi < 1e-6)
            return closedform::mu_zero_limit(xi, phi, dtau);
        return closedform::d_full(mu, xi, phi, dtau);
    case InterferenceModel::EntangledLiterature:
        return closedform::d_literature(mu, xi, phi, dtau);
    case InterferenceModel::Detuned:
        return closedform::s_term(mu, xi, dtau);
    }
    throw ParameterDomainError("unknown interference model");
}

double closed_coincidence(InterferenceModel model, const SourceParams& params,
                          double dtau) {
    return clamp_probability(0.5 * (1.0 - closed_visibility(model, params, dtau)));
}

CoincidenceCurve sweep_delay(const SweepSpec& spec) {
    homsim::validate(spec.params);
    validate(spec.dtau);
    if (spec.path == EnginePath::Numeric and
        spec.model == InterferenceModel::EntangledLiterature)
        throw ParameterDomainError(
            "the large-separation model is a closed form only; "
            "it has no spectrum to integrate");
    if (spec.path == EnginePath::ClosedForm and spec.spectrum_override)
        throw ParameterDomainError(
            "sampled spectra have no closed form; use the numeric path");

    CoincidenceCurve curve;
    curve.spec = spec;
    curve.points.reserve(spec.dtau.steps);

    if (spec.path == EnginePath::ClosedForm) {
        for (int i = 0; i < spec.dtau.steps; ++i) {
            const double dtau = spec.dtau.value(i);
            curve.points.push_back(
                {dtau, closed_coincidence(spec.model, spec.params, dtau)});
        }
        curve.summary = summarize(curve.points, 0.0);
        return curve;
    }

    engine::validate(spec.quad);
    const ReducedSpectrum spectrum =
        spec.spectrum_override
            ? *spec.spectrum_override
            : (spec.model == InterferenceModel::Detuned
                   ? make_detuned_spectrum(spec.params)
                   : make_entangled_spectrum(spec.params));
    const JointWaveFunction wf = apply_beamsplitter(spectrum, spec.params);
    double max_bound = 0.0;
    for (int i = 0; i < spec.dtau.steps; ++i) {
        const double dtau = spec.dtau.value(i);
        const engine::JointResult res =
            engine::joint_probability_detailed(wf, {dtau, 0.0}, spec.quad);
        max_bound = std::max(max_bound, res.diagnostics.pc_error_bound);
        curve.points.push_back({dtau, res.matrix.coincidence()});
    }
    curve.summary = summarize(curve.points, max_bound);
    return curve;
}

ScanResult discrepancy_scan(const ScanSpec& spec) {
    homsim::validate(spec.params);
    validate(spec.nu);
    validate(spec.dtau);
    if (not(spec.nu.start > 0.0))
        throw ParameterDomainError("pair separations must be positive");
    if (not(spec.golden_tol > 0.0) or not std::isfinite(spec.golden_tol))
        throw ParameterDomainError("golden_tol must be positive");

    ScanResult scan;
    scan.spec = spec;
    scan.rows.reserve(spec.nu.steps);

    for (int r = 0; r < spec.nu.steps; ++r) {
        const double nu = spec.nu.value(r);
        SourceParams params = spec.params;
        params.detuning_mu = num::two_pi * nu;

        const auto discrepancy = [&](double dtau) {
            return std::abs(
                closed_coincidence(InterferenceModel::EntangledFull, params, dtau) -
                closed_coincidence(InterferenceModel::EntangledLiterature, params,
                                   dtau));
        };

        // Coarse pass. Near-equal values (relative 1e-12) count as ties and
        // resolve toward smaller |dtau|, then positive dtau.
        int best = 0;
        double best_f = discrepancy(spec.dtau.value(0));
        for (int i = 1; i < spec.dtau.steps; ++i) {
            const double x = spec.dtau.value(i);
            const double f = discrepancy(x);
            const double scale = std::max(best_f, f);
            bool take;
            if (std::abs(f - best_f) > 1e-12 * scale) {
                take = f > best_f;
            } else {
                const double bx = spec.dtau.value(best);
                if (std::abs(std::abs(x) - std::abs(bx)) > 1e-12)
                    take = std::abs(x) < std::abs(bx);
                else
                    take = x > bx;
            }
            if (take) {
                best = i;
                best_f = f;
            }
        }

        double a = spec.dtau.value(std::max(0, best - 1));
        double b = spec.dtau.value(std::min(spec.dtau.steps - 1, best + 1));
        constexpr double gr = 0.6180339887498949; // (sqrt(5) - 1) / 2
        double c = b - gr * (b - a);
        double d = a + gr * (b - a);
        double fc = discrepancy(c);
        double fd = discrepancy(d);
        while (b - a > spec.golden_tol) {
            if (fc >= fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = discrepancy(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = discrepancy(d);
            }
        }
        double x_max = 0.5 * (a + b);
        double f_max = discrepancy(x_max);
        if (best_f > f_max) { // refinement can only improve on the grid point
            x_max = spec.dtau.value(best);
            f_max = best_f;
        }
        scan.rows.push_back({nu, x_max, f_max});
    }
    return scan;
}

void write_curve_csv(std::ostream& out, const CoincidenceCurve& curve) {
    out << "dtau_ps,pc\n";
    for (const CurvePoint& p : curve.points)
        out << fmt12(p.dtau) << ',' << fmt12(p.pc) << '\n';
}

void write_scan_csv(std::ostream& out, const ScanResult& scan) {
    out << "nu_thz,dtau_max_ps,max_abs_dpc\n";
    for (const ScanRow& r : scan.rows)
        out << fmt12(r.nu_thz) << ',' << fmt12(r.dtau_max) << ','
            << fmt12(r.max_abs_dpc) << '\n';
}

void write_curve_json(std::ostream& out, const CoincidenceCurve& curve) {
    nlohmann::ordered_json j;
    j["kind"] = "coincidence_curve";
    j["model"] = closedform::to_string(curve.spec.model);
    j["path"] = to_string(curve.spec.path);
    j["spectrum"] = curve.spec.spectrum_override ? "sampled" : "analytic";
    j["params"] = params_json(curve.spec.params);
    j["dtau_range_ps"] = range_json(curve.spec.dtau);
    nlohmann::ordered_json summary;
    summary["pc_min"] = curve.summary.pc_min;
    summary["pc_min_dtau_ps"] = curve.summary.pc_min_dtau;
    summary["pc_max"] = curve.summary.pc_max;
    summary["pc_max_dtau_ps"] = curve.summary.pc_max_dtau;
    auto windows = nlohmann::ordered_json::array();
    for (const BunchingWindow& w : curve.summary.bunching_windows)
        windows.push_back({w.lo, w.hi});
    summary["bunching_windows_ps"] = std::move(windows);
    summary["max_pc_error_bound"] = curve.summary.max_pc_error_bound;
    j["summary"] = std::move(summary);
    auto points = nlohmann::ordered_json::array();
    for (const CurvePoint& p : curve.points)
        points.push_back({{"dtau_ps", p.dtau}, {"pc", p.pc}});
    j["points"] = std::move(points);
    out << j.dump(2) << '\n';
}

void write_scan_json(std::ostream& out, const ScanResult& scan) {
    nlohmann::ordered_json j;
    j["kind"] = "discrepancy_scan";
    j["params"] = params_json(scan.spec.params);
    j["nu_range_thz"] = range_json(scan.spec.nu);
    j["dtau_range_ps"] = range_json(scan.spec.dtau);
    auto rows = nlohmann::ordered_json::array();
    for (const ScanRow& r : scan.rows)
        rows.push_back({{"nu_thz", r.nu_thz},
                        {"dtau_max_ps", r.dtau_max},
                        {"max_abs_dpc", r.max_abs_dpc}});
    j["rows"] = std::move(rows);
    out << j.dump(2) << '\n';
}

} // namespace homsim::sweep

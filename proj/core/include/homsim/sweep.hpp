#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "homsim/closedform.hpp"
#include "homsim/engine.hpp"
#include "homsim/model.hpp"

namespace homsim::sweep {

/// Uniform closed grid start..end inclusive. steps >= 2, start < end.
struct Range {
    double start = 0.0;
    double end = 1.0;
    int steps = 2;

    double step() const { return (end - start) / (steps - 1); }
    double value(int i) const { return start + step() * i; }
    bool operator==(const Range&) const = default;
};

void validate(const Range& range);

enum class EnginePath { ClosedForm, Numeric };

const char* to_string(EnginePath path);

/// One coincidence-vs-delay sweep. spectrum_override replaces the analytic
/// source spectrum (sampled spectra enter here) and requires the numeric
/// path. The literature model exists only as a closed form, so it cannot be
/// paired with the numeric path either.
struct SweepSpec {
    closedform::InterferenceModel model =
        closedform::InterferenceModel::EntangledFull;
    SourceParams params;
    Range dtau{-3.0, 3.0, 601};
    EnginePath path = EnginePath::ClosedForm;
    engine::QuadratureSpec quad;
    std::optional<ReducedSpectrum> spectrum_override;
};

struct CurvePoint {
    double dtau = 0.0; ///< ps
    double pc = 0.0;   ///< coincidence probability
};

/// Half-open bookkeeping is deliberately avoided: a window is the closed
/// dtau interval on which pc stays below 1/2 (to within 1e-12), edges
/// located by linear interpolation between neighboring sweep points.
struct BunchingWindow {
    double lo = 0.0;
    double hi = 0.0;
};

struct CurveSummary {
    double pc_min = 0.0;
    double pc_min_dtau = 0.0; ///< leftmost minimizer on the grid
    double pc_max = 0.0;
    double pc_max_dtau = 0.0; ///< leftmost maximizer on the grid
    std::vector<BunchingWindow> bunching_windows;
    double max_pc_error_bound = 0.0; ///< 0 on the closed path
};

struct CoincidenceCurve {
    SweepSpec spec;
    std::vector<CurvePoint> points;
    CurveSummary summary;
};

/// Closed-form visibility with the singular-corner dispatch: exactly at
/// phi = pi with 2*mu/xi < 1e-6 the mu -> 0 limit replaces d_full, whose
/// denominator degenerates there.
double closed_visibility(closedform::InterferenceModel model,
                         const SourceParams& params, double dtau);

/// Closed-form coincidence probability under the same dispatch.
double closed_coincidence(closedform::InterferenceModel model,
                          const SourceParams& params, double dtau);

CoincidenceCurve sweep_delay(const SweepSpec& spec);

/// Discrepancy scan between the full and large-separation closed forms:
/// for each pair separation nu (THz; mu = 2*pi*nu) the maximum over delay of
/// |pc_full - pc_literature|, located on the dtau grid and then refined by
/// golden-section search to golden_tol. Near-equal maxima (relative 1e-12)
/// resolve toward smaller |dtau|, then positive dtau, so symmetric curves
/// report a deterministic positive location.
struct ScanSpec {
    Range nu{0.01, 2.0, 100}; ///< THz
    Range dtau{-3.0, 3.0, 601};
    SourceParams params;      ///< detuning_mu is overwritten per row
    double golden_tol = 1e-4; ///< ps
};

struct ScanRow {
    double nu_thz = 0.0;
    double dtau_max = 0.0; ///< ps
    double max_abs_dpc = 0.0;
};

struct ScanResult {
    ScanSpec spec;
    std::vector<ScanRow> rows;
};

ScanResult discrepancy_scan(const ScanSpec& spec);

/// CSV writers both use 12 significant digits and "\n" newlines; same input,
/// same bytes. Headers: "dtau_ps,pc" and "nu_thz,dtau_max_ps,max_abs_dpc".
void write_curve_csv(std::ostream& out, const CoincidenceCurve& curve);
void write_scan_csv(std::ostream& out, const ScanResult& scan);

/// JSON twins carry the summary block (bunching windows, extrema, error
/// bounds) that the CSV format has no room for.
void write_curve_json(std::ostream& out, const CoincidenceCurve& curve);
void write_scan_json(std::ostream& out, const ScanResult& scan);

} // namespace homsim::sweep

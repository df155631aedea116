#pragma once

#include <iosfwd>
#include <vector>

#include "homsim/closedform.hpp"
#include "homsim/engine.hpp"
#include "homsim/model.hpp"

namespace homsim::oracle {

enum class Method { TimeDomainExact, FreqDomainQuadrature };

/// Result of one brute-force overlap evaluation.
///
/// value is the ratio Re(∫ g(w) conj(g(-w)) e^{2 i w dtau} dw) / ∫ |g|^2 dw,
/// i.e. the interference visibility; the assembled coincidence probability is
/// (1 - value)/2. norm is the physical ∫ |g|^2 dw so the two methods can be
/// checked against each other Parseval-style.
struct OracleReport {
    double value = 0.0;
    double norm = 0.0;
    Method method = Method::TimeDomainExact;
    double error_bound = 0.0;
    long long evaluations = 0;
};

/// Exact overlap for the sinc family.
///
/// Works entirely in the time domain, where sinc((2w -+ mu)/xi) is a
/// phase-modulated boxcar of half-width 2/xi: every integral reduces to a
/// handful of closed-form segment integrals of complex exponentials, so no
/// quadrature is involved anywhere. Uses none of the closed-form interference
/// expressions. Internally accumulates in long double; error_bound <= 1e-12.
/// Beyond |dtau| = 2/xi the boxcar supports are disjoint and the interference
/// part is exactly zero. Throws UnsupportedSpectrumError for grid spectra.
OracleReport overlap_time_domain(const ReducedSpectrum& spec, double dtau);

/// Windowed Simpson quadrature of the same ratio for arbitrary spectra.
///
/// Independent of the engine's integration code on purpose. The reported
/// error bound combines the last refinement change with an explicit tail
/// bound C/W from the 1/w^2 decay of sinc products, with C taken from the
/// largest |integrand| * w^2 on the outer quarter of the window (zero tail
/// for grid spectra, which vanish outside their sample range). The rule
/// field of the quadrature spec is ignored: this path always uses Simpson.
OracleReport overlap_quadrature(const ReducedSpectrum& spec, double dtau,
                                engine::QuadratureSpec quad = {});

struct ComparisonPoint {
    double mu = 0.0;
    double xi = 1.0;
    double phi = 0.0;
    double dtau = 0.0;
};

struct ComparisonRow {
    ComparisonPoint point;
    double closed = 0.0;  ///< closed-form coincidence probability
    double oracle = 0.0;  ///< oracle-assembled coincidence probability
    double abs_err = 0.0;
    double bound = 0.0;   ///< oracle error bound plus fixed comparison slack
    bool pass = false;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    double max_abs_err = 0.0;
    bool all_pass = false;
};

/// Evaluates the chosen closed-form model and the time-domain oracle on every
/// grid point and reports per-point absolute differences. A row passes when
/// the difference stays within the oracle's error bound plus 1e-6 slack.
/// The entangled models run against the entangled spectrum (the literature
/// model is expected to fail visibly at small mu/xi; that gap is the point),
/// the detuned model against the detuned spectrum (phi ignored).
ComparisonReport compare_closed_forms(closedform::InterferenceModel model,
                                      const std::vector<ComparisonPoint>& grid);

/// The standard verification grid: xi = 1.356 rad/ps with mu/xi in
/// {0.01, 0.5, 1, 2.456, 10, 100}, phi in {0, pi/2, pi} and xi*dtau/2 in
/// {0, 0.322, 0.5, 1, 1.5} (90 points).
std::vector<ComparisonPoint> default_comparison_grid();

/// CSV report: header "mu,xi,phi,dtau,closed,oracle,abs_err,bound".
void write_comparison_csv(std::ostream& out, const ComparisonReport& report);

} // namespace homsim::oracle

#include "homsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "homsim/numerics.hpp"

namespace homsim::oracle {

namespace {

using CL = std::complex<long double>;

constexpr long double kPiL = 3.14159265358979323846264338327950288L;

/// sin(x)/x in long double, continued through 0.
long double sinc_ld(long double x) {
    if (std::abs(x) < 1e-8L) {
        const long double x2 = x * x;
        return 1.0L - x2 / 6.0L + x2 * x2 / 120.0L;
    }
    return std::sin(x) / x;
}

/// Exact segment integral of a complex exponential:
/// int_{t0}^{t1} e^{i w t} dt = (t1 - t0) e^{i w (t0+t1)/2} sinc(w (t1-t0)/2).
/// The sinc form has no 0/0 and no cancellation for any w.
CL cexp_integral(long double t0, long double t1, long double w) {
    const long double len = t1 - t0;
    const long double mid = (t0 + t1) / 2.0L;
    const CL phase{std::cos(w * mid), std::sin(w * mid)};
    return len * sinc_ld(w * len / 2.0L) * phase;
}

/// One phase-modulated boxcar component: amp * e^{i freq t} on |t| <= half_support.
struct Mode {
    CL amp;
    long double freq;
};

struct TimeDomainForm {
    std::array<Mode, 2> modes;
    int count = 0;
    long double half_support = 0.0L; // 2/xi
};

/// Time-domain picture of the sinc family. sinc((2w - m)/xi) maps to a boxcar
/// of half-width 2/xi carrying phase e^{-i m t / 2}, with prefactor xi*pi/2.
TimeDomainForm time_domain_form(const ReducedSpectrum& spec) {
    TimeDomainForm form;
    if (const auto* d = std::get_if<SincDetuned>(&spec)) {
        form.half_support = 2.0L / static_cast<long double>(d->xi);
        const long double pre = static_cast<long double>(d->xi) * kPiL / 2.0L;
        form.modes[0] = {CL{pre, 0.0L}, -static_cast<long double>(d->mu) / 2.0L};
        form.count = 1;
        return form;
    }
    if (const auto* e = std::get_if<SincEntangled>(&spec)) {
        form.half_support = 2.0L / static_cast<long double>(e->xi);
        const long double pre = static_cast<long double>(e->xi) * kPiL / 2.0L;
        const long double phi = static_cast<long double>(e->phi);
        form.modes[0] = {CL{pre, 0.0L}, -static_cast<long double>(e->mu) / 2.0L};
        form.modes[1] = {pre * CL{std::cos(phi), std::sin(phi)},
                         +static_cast<long double>(e->mu) / 2.0L};
        form.count = 2;
        return form;
    }
    throw UnsupportedSpectrumError(
        "overlap_time_domain handles only the analytic sinc family");
}

} // namespace

OracleReport overlap_time_domain(const ReducedSpectrum& spec, double dtau) {
    if (not std::isfinite(dtau))
        throw ParameterDomainError("overlap_time_domain: dtau must be finite");
    const TimeDomainForm form = time_domain_form(spec);
    const long double T = form.half_support;
    const long double dt = static_cast<long double>(dtau);

    // Interference part: (1/2pi) int g~(t) conj(g~(-2 dtau - t)) dt over the
    // intersection of the two boxcar supports. Each cross term contributes
    // A_j conj(A_k) e^{2 i a_k dtau} int e^{i (a_j + a_k) t} dt.
    const long double t0 = std::max(-T, -2.0L * dt - T);
    const long double t1 = std::min(T, -2.0L * dt + T);
    CL interference{};
    long long evals = 0;
    if (t0 < t1) {
        for (int j = 0; j < form.count; ++j) {
            for (int k = 0; k < form.count; ++k) {
                const long double ak = form.modes[k].freq;
                const CL rot{std::cos(2.0L * ak * dt), std::sin(2.0L * ak * dt)};
                interference += form.modes[j].amp * std::conj(form.modes[k].amp) * rot *
                                cexp_integral(t0, t1, form.modes[j].freq + ak);
                ++evals;
            }
        }
    }

    // Norm: (1/2pi) int |g~(t)|^2 dt over the full support (Parseval).
    CL norm{};
    for (int j = 0; j < form.count; ++j) {
        for (int k = 0; k < form.count; ++k) {
            norm += form.modes[j].amp * std::conj(form.modes[k].amp) *
                    cexp_integral(-T, T, form.modes[j].freq - form.modes[k].freq);
            ++evals;
        }
    }

    const long double inv2pi = 1.0L / (2.0L * kPiL);
    const long double n = std::real(norm) * inv2pi;
    const long double i1 = std::real(interference) * inv2pi;

    OracleReport report;
    report.method = Method::TimeDomainExact;
    report.norm = static_cast<double>(n);
    report.value = static_cast<double>(i1 / n);
    report.error_bound = 1e-12;
    report.evaluations = evals;
    return report;
}

namespace {

struct SimpsonSums {
    long double interference = 0.0L; // real part of g(w) conj(g(-w)) e^{2 i w dtau}
    long double norm = 0.0L;         // |g(w)|^2
};

struct NodeProbe {
    double tail_c_interference = 0.0;
    double tail_c_norm = 0.0;
};

} // namespace

OracleReport overlap_quadrature(const ReducedSpectrum& spec, double dtau,
                                engine::QuadratureSpec quad) {
    engine::validate(quad);
    if (not std::isfinite(dtau))
        throw ParameterDomainError("overlap_quadrature: dtau must be finite");

    double window = quad.window_halfwidth;
    bool clamp_tail = false;
    if (const auto* g = std::get_if<GridSpectrum>(&spec)) {
        const double extent = std::max(std::abs(g->omega_front()),
                                       std::abs(g->omega_back()));
        if (window <= 0.0 or window > extent)
            window = extent;
        clamp_tail = true; // zero outside the sample range by definition
    } else if (window <= 0.0) {
        double mu = 0.0;
        double xi = 1.0;
        if (const auto* d = std::get_if<SincDetuned>(&spec)) {
            mu = d->mu;
            xi = d->xi;
        } else {
            const auto& e = std::get<SincEntangled>(spec);
            mu = e.mu;
            xi = e.xi;
        }
        window = 50.0 * std::max(xi, mu) + 20.0 * xi;
    }

    // Composite Simpson over [-window, window]. n is the interval count.
    long long n = 512;
    if (quad.points > 0) {
        n = quad.points;
        if (n % 2 == 1)
            ++n;
    }

    long long evals = 0;
    auto pass = [&](long long intervals, NodeProbe* probe) -> SimpsonSums {
        const double h = 2.0 * window / static_cast<double>(intervals);
        SimpsonSums acc;
        for (long long i = 0; i <= intervals; ++i) {
            const double w = -window + h * static_cast<double>(i);
            const std::complex<double> gp = evaluate(spec, w);
            const std::complex<double> gm = evaluate(spec, -w);
            evals += 2;
            const double fi =
                std::real(gp * std::conj(gm) * num::cis(2.0 * w * dtau));
            const double fn = std::norm(gp);
            double coeff = (i == 0 or i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            acc.interference += static_cast<long double>(coeff * fi);
            acc.norm += static_cast<long double>(coeff * fn);
            if (probe and std::abs(w) >= 0.75 * window) {
                probe->tail_c_interference =
                    std::max(probe->tail_c_interference, std::abs(fi) * w * w);
                probe->tail_c_norm = std::max(probe->tail_c_norm, fn * w * w);
            }
        }
        const long double scale = static_cast<long double>(h) / 3.0L;
        acc.interference *= scale;
        acc.norm *= scale;
        return acc;
    };

    SimpsonSums prev = pass(n, nullptr);
    SimpsonSums cur = prev;
    double last_change = std::numeric_limits<double>::infinity();
    bool converged = false;
    int refinement = 0;
    NodeProbe probe;
    for (refinement = 1; refinement <= quad.max_refinements; ++refinement) {
        n *= 2;
        probe = NodeProbe{};
        cur = pass(n, &probe);
        const double scale = std::max({std::abs(static_cast<double>(cur.norm)),
                                       std::abs(static_cast<double>(cur.interference)),
                                       1e-300});
        last_change =
            (std::abs(static_cast<double>(cur.norm - prev.norm)) +
             std::abs(static_cast<double>(cur.interference - prev.interference))) /
            scale;
        if (last_change <= quad.rel_tol) {
            converged = true;
            break;
        }
        prev = cur;
    }
    if (not converged) {
        std::ostringstream os;
        os << "overlap_quadrature did not converge: window = " << window
           << ", intervals = " << n << ", last relative change = " << last_change
           << ", rel_tol = " << quad.rel_tol;
        throw QuadratureError(os.str());
    }

    const double norm = static_cast<double>(cur.norm);
    if (norm <= 0.0)
        throw QuadratureError("overlap_quadrature: spectrum norm vanished on the window");
    const double value = static_cast<double>(cur.interference) / norm;

    double tail_bound = 0.0;
    if (not clamp_tail) {
        // int_{W}^{inf} C/w^2 dw = C/W per side.
        const double tail_i = 2.0 * probe.tail_c_interference / window;
        const double tail_n = 2.0 * probe.tail_c_norm / window;
        tail_bound = (tail_i + std::abs(value) * tail_n) / norm;
    }

    OracleReport report;
    report.method = Method::FreqDomainQuadrature;
    report.value = value;
    report.norm = norm;
    report.error_bound = tail_bound + 2.0 * last_change * (1.0 + std::abs(value)) + 1e-14;
    report.evaluations = evals;
    return report;
}

ComparisonReport compare_closed_forms(closedform::InterferenceModel model,
                                      const std::vector<ComparisonPoint>& grid) {
    ComparisonReport report;
    report.rows.reserve(grid.size());
    report.all_pass = true;
    for (const ComparisonPoint& pt : grid) {
        ComparisonRow row;
        row.point = pt;
        ReducedSpectrum spec;
        switch (model) {
        case closedform::InterferenceModel::EntangledFull:
            row.closed = closedform::coincidence_entangled(pt.mu, pt.xi, pt.phi, pt.dtau);
            spec = SincEntangled{pt.mu, pt.xi, pt.phi};
            break;
        case closedform::InterferenceModel::EntangledLiterature:
            row.closed = closedform::coincidence_literature(pt.mu, pt.xi, pt.phi, pt.dtau);
            spec = SincEntangled{pt.mu, pt.xi, pt.phi};
            break;
        case closedform::InterferenceModel::Detuned:
            row.closed = closedform::coincidence_detuned(pt.mu, pt.xi, pt.dtau);
            spec = SincDetuned{pt.mu, pt.xi};
            break;
        }
        const OracleReport o = overlap_time_domain(spec, pt.dtau);
        row.oracle = (1.0 - o.value) / 2.0;
        row.abs_err = std::abs(row.closed - row.oracle);
        row.bound = o.error_bound + 1e-6;
        row.pass = row.abs_err <= row.bound;
        report.max_abs_err = std::max(report.max_abs_err, row.abs_err);
        report.all_pass = report.all_pass and row.pass;
        report.rows.push_back(row);
    }
    return report;
}

std::vector<ComparisonPoint> default_comparison_grid() {
    const double xi = 1.356;
    const double ratios[] = {0.01, 0.5, 1.0, 2.456, 10.0, 100.0};
    const double phis[] = {0.0, num::pi / 2.0, num::pi};
    const double xs[] = {0.0, 0.322, 0.5, 1.0, 1.5};
    std::vector<ComparisonPoint> grid;
    grid.reserve(std::size(ratios) * std::size(phis) * std::size(xs));
    for (double r : ratios)
        for (double phi : phis)
            for (double x : xs)
                grid.push_back({r * xi, xi, phi, 2.0 * x / xi});
    return grid;
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& report) {
    out << "mu,xi,phi,dtau,closed,oracle,abs_err,bound\n";
    char buf[256];
    for (const ComparisonRow& row : report.rows) {
        std::snprintf(buf, sizeof buf,
                      "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                      row.point.mu, row.point.xi, row.point.phi, row.point.dtau,
                      row.closed, row.oracle, row.abs_err, row.bound);
        out << buf;
    }
}

} // namespace homsim::oracle

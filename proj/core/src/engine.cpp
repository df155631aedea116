#include "homsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "homsim/numerics.hpp"

namespace homsim::engine {

namespace {

// Hard ceiling on integrand nodes per refinement level; hitting it means the
// request cannot converge within a sane budget.
constexpr long long kNodeCap = 400'000'000;

double spectrum_window(const ReducedSpectrum& spec) {
    if (const auto* d = std::get_if<SincDetuned>(&spec))
        return 50.0 * std::max(d->xi, d->mu) + 20.0 * d->xi;
    if (const auto* e = std::get_if<SincEntangled>(&spec))
        return 50.0 * std::max(e->xi, e->mu) + 20.0 * e->xi;
    const auto& g = std::get<GridSpectrum>(spec);
    return std::max(std::abs(g.omega_front()), std::abs(g.omega_back()));
}

// Fastest phase oscillation (radians per rad/ps) the spectrum contributes to
// the integrand; seeds the node density. Grid spectra oscillate no faster
// than their sampling allows.
double spectrum_freq_scale(const ReducedSpectrum& spec) {
    if (const auto* d = std::get_if<SincDetuned>(&spec))
        return 4.0 / d->xi;
    if (const auto* e = std::get_if<SincEntangled>(&spec))
        return 4.0 / e->xi;
    const auto& g = std::get<GridSpectrum>(spec);
    const double span = g.omega_back() - g.omega_front();
    const double mean_gap = span / static_cast<double>(g.samples().size() - 1);
    return num::pi / mean_gap;
}

bool all_grid(const JointWaveFunction& wf) {
    for (Port s1 : {Port::U, Port::L})
        for (Port s2 : {Port::U, Port::L})
            if (not std::holds_alternative<GridSpectrum>(wf.entry(s1, s2).spectrum))
                return false;
    return true;
}

/// Evaluates g(w) and g(-w) together for a single shared spectrum. The sinc
/// kernels of the analytic spectra are even, so both values come from the
/// same two kernel evaluations.
class UniformEval {
public:
    explicit UniformEval(const ReducedSpectrum& spec) {
        if (const auto* d = std::get_if<SincDetuned>(&spec)) {
            kind_ = Kind::Detuned;
            mu_ = d->mu;
            xi_ = d->xi;
        } else if (const auto* e = std::get_if<SincEntangled>(&spec)) {
            kind_ = Kind::Entangled;
            mu_ = e->mu;
            xi_ = e->xi;
            eip_ = num::cis(e->phi);
        } else {
            kind_ = Kind::Grid;
            grid_ = &std::get<GridSpectrum>(spec);
        }
    }

    void pair(double w, std::complex<double>& gp, std::complex<double>& gm) const {
        switch (kind_) {
        case Kind::Detuned: {
            gp = num::sinc((2.0 * w - mu_) / xi_);
            gm = num::sinc((2.0 * w + mu_) / xi_);
            return;
        }
        case Kind::Entangled: {
            const double lo = num::sinc((2.0 * w - mu_) / xi_);
            const double hi = num::sinc((2.0 * w + mu_) / xi_);
            gp = lo + eip_ * hi;
            gm = hi + eip_ * lo;
            return;
        }
        case Kind::Grid:
            gp = (*grid_)(w);
            gm = (*grid_)(-w);
            return;
        }
    }

private:
    enum class Kind { Detuned, Entangled, Grid } kind_ = Kind::Detuned;
    double mu_ = 0.0;
    double xi_ = 1.0;
    std::complex<double> eip_{1.0, 0.0};
    const GridSpectrum* grid_ = nullptr;
};

struct PortSums {
    long double uu = 0.0L;
    long double ul = 0.0L; // equals the LU integral: A_LU(w) = A_UL(-w)
                           // pointwise and the node set is symmetric in w
    long double ll = 0.0L;
};

struct TailProbe {
    double c_total = 0.0; // max over outer-quarter nodes of (sum integrand) * w^2
    double c_coin = 0.0;  // same for the coincidence part alone
};

class Integrand {
public:
    Integrand(const JointWaveFunction& wf, double dtau)
        : wf_(wf), dtau_(dtau) {
        if (wf.uniform_spectrum()) {
            ueval_.emplace(wf.entry(Port::U, Port::U).spectrum);
            cuu_n_ = std::norm(wf.entry(Port::U, Port::U).coeff);
            cll_n_ = std::norm(wf.entry(Port::L, Port::L).coeff);
            cul_ = wf.entry(Port::U, Port::L).coeff;
            clu_ = wf.entry(Port::L, Port::U).coeff;
        }
    }

    long long evals_per_node() const { return ueval_ ? 2 : 6; }

    void node(double w, double weight, PortSums& acc, TailProbe* probe) const {
        const std::complex<double> e = num::cis(w * dtau_);
        double suu, sul, sll;
        if (ueval_) {
            std::complex<double> gp, gm;
            ueval_->pair(w, gp, gm);
            const std::complex<double> a = gp * e;
            const std::complex<double> b = gm * std::conj(e);
            const double both = std::norm(a + b);
            suu = cuu_n_ * both;
            sll = cll_n_ * both;
            sul = std::norm(cul_ * a + clu_ * b);
        } else {
            suu = port_norm(Port::U, Port::U, w, e);
            sul = port_norm(Port::U, Port::L, w, e);
            sll = port_norm(Port::L, Port::L, w, e);
        }
        acc.uu += static_cast<long double>(weight * suu);
        acc.ul += static_cast<long double>(weight * sul);
        acc.ll += static_cast<long double>(weight * sll);
        if (probe) {
            const double w2 = w * w;
            probe->c_total = std::max(probe->c_total, (suu + sll + 2.0 * sul) * w2);
            probe->c_coin = std::max(probe->c_coin, 2.0 * sul * w2);
        }
    }

private:
    double port_norm(Port s1, Port s2, double w, std::complex<double> e) const {
        const WaveEntry& fwd = wf_.entry(s1, s2);
        const WaveEntry& rev = wf_.entry(s2, s1);
        const std::complex<double> amp = fwd.coeff * evaluate(fwd.spectrum, w) * e +
                                         rev.coeff * evaluate(rev.spectrum, -w) * std::conj(e);
        return std::norm(amp);
    }

    const JointWaveFunction& wf_;
    double dtau_;
    std::optional<UniformEval> ueval_;
    double cuu_n_ = 0.0;
    double cll_n_ = 0.0;
    std::complex<double> cul_{0.0, 0.0};
    std::complex<double> clu_{0.0, 0.0};
};

PortSums run_gl(const Integrand& f, double window, long long panels,
                TailProbe* probe) {
    const auto nodes = num::gl16_nodes();
    const auto weights = num::gl16_weights();
    const double h = 2.0 * window / static_cast<double>(panels);
    const double half = 0.5 * h;
    PortSums total;
    for (long long p = 0; p < panels; ++p) {
        const double mid = -window + (static_cast<double>(p) + 0.5) * h;
        PortSums panel;
        TailProbe* panel_probe =
            (probe and std::abs(mid) + half >= 0.75 * window) ? probe : nullptr;
        for (int j = 0; j < 16; ++j)
            f.node(mid + half * nodes[j], weights[j], panel, panel_probe);
        total.uu += panel.uu * static_cast<long double>(half);
        total.ul += panel.ul * static_cast<long double>(half);
        total.ll += panel.ll * static_cast<long double>(half);
    }
    return total;
}

PortSums run_trapezoid(const Integrand& f, double window, long long intervals,
                       TailProbe* probe) {
    const double h = 2.0 * window / static_cast<double>(intervals);
    PortSums total;
    for (long long i = 0; i <= intervals; ++i) {
        const double w = -window + h * static_cast<double>(i);
        const double weight = (i == 0 or i == intervals) ? 0.5 : 1.0;
        TailProbe* node_probe =
            (probe and std::abs(w) >= 0.75 * window) ? probe : nullptr;
        f.node(w, weight, total, node_probe);
    }
    total.uu *= static_cast<long double>(h);
    total.ul *= static_cast<long double>(h);
    total.ll *= static_cast<long double>(h);
    return total;
}

double rel_delta(const PortSums& a, const PortSums& b) {
    const long double num = std::abs(a.uu - b.uu) + 2.0L * std::abs(a.ul - b.ul) +
                            std::abs(a.ll - b.ll);
    const long double den =
        std::max(a.uu + 2.0L * a.ul + a.ll, static_cast<long double>(1e-300));
    return static_cast<double>(num / den);
}

} // namespace

void validate(const QuadratureSpec& quad) {
    if (not std::isfinite(quad.window_halfwidth) or quad.window_halfwidth < 0.0)
        throw ParameterDomainError("quadrature window_halfwidth must be >= 0 "
                                   "(0 selects the automatic window)");
    if (quad.points != 0 and quad.points < 16)
        throw ParameterDomainError("quadrature points must be 0 (auto) or >= 16");
    if (not std::isfinite(quad.rel_tol) or quad.rel_tol <= 0.0)
        throw ParameterDomainError("quadrature rel_tol must be > 0");
    if (quad.max_refinements < 0)
        throw ParameterDomainError("quadrature max_refinements must be >= 0");
}

double default_window(const JointWaveFunction& wf) {
    double window = 0.0;
    for (Port s1 : {Port::U, Port::L})
        for (Port s2 : {Port::U, Port::L})
            window = std::max(window, spectrum_window(wf.entry(s1, s2).spectrum));
    return window;
}

std::function<std::complex<double>(double)>
symmetrize(const JointWaveFunction& wf, PortPair ports, DelayPair delays) {
    if (not std::isfinite(delays.tau1) or not std::isfinite(delays.tau2))
        throw ParameterDomainError("delays must be finite");
    const double dtau = delays.dtau();
    return [fwd = wf.entry(ports.first, ports.second),
            rev = wf.entry(ports.second, ports.first), dtau](double w) {
        const std::complex<double> e = num::cis(w * dtau);
        return fwd.coeff * evaluate(fwd.spectrum, w) * e +
               rev.coeff * evaluate(rev.spectrum, -w) * std::conj(e);
    };
}

JointResult joint_probability_detailed(const JointWaveFunction& wf, DelayPair delays,
                                       QuadratureSpec quad) {
    validate(quad);
    if (not std::isfinite(delays.tau1) or not std::isfinite(delays.tau2))
        throw ParameterDomainError("delays must be finite");
    const double dtau = delays.dtau();

    const bool grid_only = all_grid(wf);
    double window = quad.window_halfwidth > 0.0 ? quad.window_halfwidth
                                                : default_window(wf);
    if (grid_only) {
        // zero outside the sample range, so a larger window only wastes nodes
        double extent = 0.0;
        for (Port s1 : {Port::U, Port::L})
            for (Port s2 : {Port::U, Port::L})
                extent = std::max(extent, spectrum_window(wf.entry(s1, s2).spectrum));
        window = std::min(window, extent);
    }
    if (not(window > 0.0) or not std::isfinite(window))
        throw ParameterDomainError("integration window is empty");

    double freq = 2.0 * std::abs(dtau);
    {
        double spec_scale = 0.0;
        for (Port s1 : {Port::U, Port::L})
            for (Port s2 : {Port::U, Port::L})
                spec_scale = std::max(spec_scale,
                                      spectrum_freq_scale(wf.entry(s1, s2).spectrum));
        freq += spec_scale;
    }

    const Integrand f(wf, dtau);
    const bool use_gl = quad.rule == QuadratureRule::GaussLegendreComposite;

    // Initial resolution: two oscillation periods per 16-node panel (eight
    // trapezoid points per period). The first doubling then confirms it, or
    // the loop keeps refining.
    long long units; // panels for GL, intervals for trapezoid
    const double periods = window * freq / num::two_pi;
    if (quad.points > 0) {
        units = use_gl ? std::max<long long>(1, quad.points / 16)
                       : std::max<long long>(16, quad.points);
    } else {
        units = use_gl
                    ? std::clamp<long long>(static_cast<long long>(0.5 * periods) + 1,
                                            8, 8'000'000)
                    : std::clamp<long long>(8 * (static_cast<long long>(periods) + 1),
                                            1024, 128'000'000);
    }

    const long long nodes_per_unit = use_gl ? 16 : 1;
    long long evaluations = 0;
    auto run = [&](long long u, TailProbe* probe) {
        evaluations += (u * nodes_per_unit + (use_gl ? 0 : 1)) * f.evals_per_node();
        return use_gl ? run_gl(f, window, u, probe) : run_trapezoid(f, window, u, probe);
    };

    TailProbe probe;
    PortSums prev = run(units, &probe);
    PortSums cur = prev;
    double last_change = std::numeric_limits<double>::infinity();
    bool converged = false;
    int refinements = 0;
    for (refinements = 1; refinements <= quad.max_refinements; ++refinements) {
        if (units * 2 * nodes_per_unit > kNodeCap) {
            std::ostringstream os;
            os << "quadrature node budget exhausted before convergence: window = "
               << window << ", nodes = " << units * nodes_per_unit
               << ", last relative change = " << last_change;
            throw QuadratureError(os.str());
        }
        units *= 2;
        probe = TailProbe{};
        cur = run(units, &probe);
        last_change = rel_delta(cur, prev);
        if (last_change <= quad.rel_tol) {
            converged = true;
            break;
        }
        prev = cur;
    }
    if (not converged) {
        std::ostringstream os;
        os << "quadrature did not converge: window = " << window
           << ", nodes = " << units * nodes_per_unit
           << ", refinements = " << quad.max_refinements
           << ", last relative change = " << last_change << ", rel_tol = "
           << quad.rel_tol;
        throw QuadratureError(os.str());
    }

    const long double total = cur.uu + 2.0L * cur.ul + cur.ll;
    if (not(total > 0.0L) or not std::isfinite(static_cast<double>(total))) {
        std::ostringstream os;
        os << "normalization integral vanished (window = " << window
           << "); the wave function is zero everywhere on it";
        throw QuadratureError(os.str());
    }

    JointResult result;
    result.matrix.at(Port::U, Port::U) = static_cast<double>(cur.uu / total);
    result.matrix.at(Port::U, Port::L) = static_cast<double>(cur.ul / total);
    result.matrix.at(Port::L, Port::U) = static_cast<double>(cur.ul / total);
    result.matrix.at(Port::L, Port::L) = static_cast<double>(cur.ll / total);

    // Tail bounds: sampled envelope of |integrand| * w^2 over the outer
    // quarter, doubled because the true envelope can peak between nodes.
    // Grid spectra vanish outside the window, so their tail is exactly zero.
    const double total_d = static_cast<double>(total);
    const double tail_total = grid_only ? 0.0 : 2.0 * (2.0 * probe.c_total / window);
    const double tail_coin = grid_only ? 0.0 : 2.0 * (2.0 * probe.c_coin / window);
    const double pc = result.matrix.coincidence();
    result.diagnostics.window_halfwidth = window;
    result.diagnostics.evaluations = evaluations;
    result.diagnostics.refinements = refinements;
    result.diagnostics.last_rel_change = last_change;
    result.diagnostics.tail_bound = tail_total / total_d;
    result.diagnostics.pc_error_bound =
        (tail_coin + pc * tail_total) / total_d + 2.0 * last_change + 1e-14;
    return result;
}

ProbabilityMatrix joint_probability(const JointWaveFunction& wf, DelayPair delays,
                                    QuadratureSpec quad) {
    return joint_probability_detailed(wf, delays, quad).matrix;
}

double coincidence_probability(const JointWaveFunction& wf, DelayPair delays,
                               QuadratureSpec quad) {
    return joint_probability_detailed(wf, delays, quad).matrix.coincidence();
}

double single_port_probability(const JointWaveFunction& wf, DelayPair delays,
                               QuadratureSpec quad, Port port) {
    const ProbabilityMatrix m = joint_probability(wf, delays, quad);
    return m.at(port, Port::U) + m.at(port, Port::L);
}

} // namespace homsim::engine

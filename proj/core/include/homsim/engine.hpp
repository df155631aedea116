#pragma once

#include <array>
#include <complex>
#include <functional>

#include "homsim/model.hpp"

namespace homsim::engine {

/// Independent optical delays on the two detection arms, in ps. Every
/// probability depends on them only through dtau = tau1 - tau2.
struct DelayPair {
    double tau1 = 0.0;
    double tau2 = 0.0;
    double dtau() const { return tau1 - tau2; }
};

/// Joint detection probabilities over ordered port pairs, (U, L) x (U, L)
/// order. Entries sum to 1 and the matrix is symmetric by construction.
struct ProbabilityMatrix {
    std::array<double, 4> p{};

    double at(Port s1, Port s2) const {
        return p[2 * static_cast<int>(s1) + static_cast<int>(s2)];
    }
    double& at(Port s1, Port s2) {
        return p[2 * static_cast<int>(s1) + static_cast<int>(s2)];
    }
    double sum() const { return p[0] + p[1] + p[2] + p[3]; }
    double coincidence() const { return at(Port::U, Port::L) + at(Port::L, Port::U); }
};

enum class QuadratureRule { Trapezoid, GaussLegendreComposite };

/// Controls for the frequency-domain integration. Zeros mean "derive from
/// the wave function": the default window half-width is 50*max(xi, mu) +
/// 20*xi over the sinc entries (the sample range for grid spectra), and the
/// initial node count follows the integrand's oscillation budget. points,
/// when given, must be >= 16. Refinement doubles the node count until the
/// relative change of the four port integrals drops below rel_tol, up to
/// max_refinements doublings; running out throws QuadratureError.
struct QuadratureSpec {
    double window_halfwidth = 0.0; ///< rad/ps; 0 = auto
    int points = 0;                ///< initial nodes; 0 = auto, else >= 16
    QuadratureRule rule = QuadratureRule::GaussLegendreComposite;
    double rel_tol = 1e-8;
    int max_refinements = 12;
};

void validate(const QuadratureSpec& quad);

struct QuadratureDiagnostics {
    double window_halfwidth = 0.0;
    long long evaluations = 0;   ///< spectrum evaluations consumed
    int refinements = 0;         ///< doublings actually performed
    double last_rel_change = 0.0;
    double tail_bound = 0.0;     ///< bound on integral mass beyond the window,
                                 ///< relative to the total norm
    double pc_error_bound = 0.0; ///< propagated bound on the coincidence value
};

struct JointResult {
    ProbabilityMatrix matrix;
    QuadratureDiagnostics diagnostics;
};

/// Symmetrized two-photon amplitude of one ordered port pair as a function of
/// the reduced frequency coordinate:
///
///   A(w) = c_{s1 s2} g_{s1 s2}(w) e^{+i w dtau} + c_{s2 s1} g_{s2 s1}(-w) e^{-i w dtau}
///
/// The global phase e^{i pump (tau1+tau2)/2} is dropped; it cancels in every
/// |A|^2. Satisfies A_{s2 s1}(w) = A_{s1 s2}(-w) pointwise.
std::function<std::complex<double>(double)>
symmetrize(const JointWaveFunction& wf, PortPair ports, DelayPair delays);

/// Joint detection probabilities: each ordered entry is the integral of the
/// corresponding |A|^2, normalized so all four sum to 1. Port exchange
/// symmetry is exact (the quadrature node set is symmetric under w -> -w and
/// the two mirrored amplitudes coincide pointwise, so one integral serves
/// both orders). Throws QuadratureError when refinement fails to converge
/// or the normalization integral vanishes (identically zero spectrum).
JointResult joint_probability_detailed(const JointWaveFunction& wf,
                                       DelayPair delays,
                                       QuadratureSpec quad = {});
ProbabilityMatrix joint_probability(const JointWaveFunction& wf, DelayPair delays,
                                    QuadratureSpec quad = {});

/// P_UL + P_LU.
double coincidence_probability(const JointWaveFunction& wf, DelayPair delays,
                               QuadratureSpec quad = {});

/// Marginal detection probability of one port, summed over the partner port.
double single_port_probability(const JointWaveFunction& wf, DelayPair delays,
                               QuadratureSpec quad, Port port);

/// The auto window half-width used when QuadratureSpec.window_halfwidth is 0.
double default_window(const JointWaveFunction& wf);

} // namespace homsim::engine

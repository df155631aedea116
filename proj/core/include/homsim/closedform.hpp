#pragma once

namespace homsim::closedform {

enum class InterferenceModel { EntangledFull, EntangledLiterature, Detuned };

const char* to_string(InterferenceModel m);

/// Triangular window: 1 - |x| on [-1, 1], zero outside.
double tri(double x);

/// Carrier factor R = cos(mu*dtau - phi) * tri(xi*dtau/2).
double r_term(double mu, double xi, double phi, double dtau);

/// Finite-bandwidth correction S = sin(z * tri(xi*dtau/2)) / z with
/// z = 2*mu/xi; continued through z = 0 where it equals tri itself.
double s_term(double mu, double xi, double dtau);

/// Interference visibility d = (R + S) / (1 + cos(phi) * sinc(2*mu/xi)).
///
/// Evaluated in an algebraically identical reorganized form (with
/// eps = pi - phi and t = tri(xi*dtau/2)):
///
///   num = t * (2 sin^2((mu*dtau + eps)/2) - (1 - sinc(2*mu/xi * t)))
///   den = 2 sin^2(eps/2) + cos(eps) * (1 - sinc(2*mu/xi))
///
/// which has no cancellation anywhere and therefore stays fully accurate
/// arbitrarily close to the phi = pi, mu -> 0 singularity. Throws
/// SingularConfigError when |den| < 1e-12 (phi = pi with 2*mu/xi below
/// roughly 2.4e-6); callers wanting that corner should use mu_zero_limit.
double d_full(double mu, double xi, double phi, double dtau);

/// Large-separation limit d0 = R (the correction term S dropped).
double d_literature(double mu, double xi, double phi, double dtau);

/// Limit of d_full as mu -> 0: tri(xi*dtau/2) for phi != pi and the
/// support-restricted cubic (1 - x)(2x^2 + 2x - 1), x = xi*|dtau|/2 <= 1,
/// for phi == pi (zero outside the support either way). The comparison
/// against pi is exact on purpose: the limit family is genuinely
/// discontinuous in phi at pi, so no tolerance ball is correct.
double mu_zero_limit(double xi, double phi, double dtau);

/// Coincidence probability (1 - d_full)/2, clamped to [0, 1] only when
/// within 1e-12 of a bound (rounding guard; |d| <= 1 analytically).
double coincidence_entangled(double mu, double xi, double phi, double dtau);

/// Coincidence probability (1 - d0)/2 of the large-separation formula.
double coincidence_literature(double mu, double xi, double phi, double dtau);

/// Coincidence probability (1 - S)/2 of the spectrally distinguishable pair.
double coincidence_detuned(double mu, double xi, double dtau);

} // namespace homsim::closedform

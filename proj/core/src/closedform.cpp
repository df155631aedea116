#include "homsim/closedform.hpp"

#include <cmath>
#include <sstream>

#include "homsim/errors.hpp"
#include "homsim/numerics.hpp"

namespace homsim::closedform {

namespace {

void check_common(double mu, double xi, double dtau, const char* who) {
    if (not std::isfinite(xi) or xi <= 0.0)
        throw ParameterDomainError(std::string(who) + ": bandwidth xi must be > 0");
    if (not std::isfinite(mu) or mu < 0.0)
        throw ParameterDomainError(std::string(who) + ": detuning mu must be >= 0");
    if (not std::isfinite(dtau))
        throw ParameterDomainError(std::string(who) + ": dtau must be finite");
}

} // namespace

const char* to_string(InterferenceModel m) {
    switch (m) {
    case InterferenceModel::EntangledFull: return "entangled-full";
    case InterferenceModel::EntangledLiterature: return "entangled-literature";
    case InterferenceModel::Detuned: return "detuned";
    }
    return "unknown";
}

double tri(double x) { return num::tri(x); }

double r_term(double mu, double xi, double phi, double dtau) {
    check_common(mu, xi, dtau, "r_term");
    if (not std::isfinite(phi))
        throw ParameterDomainError("r_term: phi must be finite");
    return std::cos(mu * dtau - phi) * num::tri(xi * dtau / 2.0);
}

double s_term(double mu, double xi, double dtau) {
    check_common(mu, xi, dtau, "s_term");
    const double z = 2.0 * mu / xi;
    const double t = num::tri(xi * dtau / 2.0);
    if (z < 1e-4)
        return t - z * z * t * t * t / 6.0;
    return std::sin(z * t) / z;
}

double d_full(double mu, double xi, double phi, double dtau) {
    check_common(mu, xi, dtau, "d_full");
    if (not std::isfinite(phi))
        throw ParameterDomainError("d_full: phi must be finite");
    const double z = 2.0 * mu / xi;
    const double eps = num::pi - phi;
    const double sh = std::sin(eps / 2.0);
    const double den = 2.0 * sh * sh + std::cos(eps) * num::one_minus_sinc(z);
    if (std::abs(den) < 1e-12) {
        std::ostringstream os;
        os << "d_full: denominator 1 + cos(phi)*sinc(2*mu/xi) = " << den
           << " is singular at phi = " << phi << ", 2*mu/xi = " << z
           << "; use mu_zero_limit for this corner";
        throw SingularConfigError(os.str());
    }
    const double t = num::tri(xi * dtau / 2.0);
    const double sn = std::sin((mu * dtau + eps) / 2.0);
    const double numerator = t * (2.0 * sn * sn - num::one_minus_sinc(z * t));
    return numerator / den;
}

double d_literature(double mu, double xi, double phi, double dtau) {
    return r_term(mu, xi, phi, dtau);
}

double mu_zero_limit(double xi, double phi, double dtau) {
    check_common(0.0, xi, dtau, "mu_zero_limit");
    if (not std::isfinite(phi))
        throw ParameterDomainError("mu_zero_limit: phi must be finite");
    const double x = xi * std::abs(dtau) / 2.0;
    if (phi == num::pi) {
        if (x >= 1.0)
            return 0.0;
        return (1.0 - x) * (2.0 * x * x + 2.0 * x - 1.0);
    }
    return num::tri(x);
}

namespace {

double half_complement(double d) {
    double p = (1.0 - d) / 2.0;
    if (p < 0.0 and p > -1e-12)
        p = 0.0;
    if (p > 1.0 and p < 1.0 + 1e-12)
        p = 1.0;
    return p;
}

} // namespace

double coincidence_entangled(double mu, double xi, double phi, double dtau) {
    return half_complement(d_full(mu, xi, phi, dtau));
}

double coincidence_literature(double mu, double xi, double phi, double dtau) {
    return half_complement(d_literature(mu, xi, phi, dtau));
}

double coincidence_detuned(double mu, double xi, double dtau) {
    return half_complement(s_term(mu, xi, dtau));
}

} // namespace homsim::closedform

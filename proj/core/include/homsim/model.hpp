#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "homsim/errors.hpp"

namespace homsim {

enum class Port : int { U = 0, L = 1 };

struct PortPair {
    Port first = Port::U;
    Port second = Port::U;
};

/// Physical parameters of the photon-pair source. All angular frequencies in
/// rad/ps and times in ps, so products like mu*dtau are plain radians.
/// pump_freq only ever enters a global phase that cancels in every
/// probability; it is carried as context and has no effect on results.
struct SourceParams {
    double pump_freq = 0.0;          ///< rad/ps
    double detuning_mu = 0.0;        ///< rad/ps, >= 0
    double bandwidth_xi = 1.0;       ///< rad/ps, > 0
    double symmetry_phase_phi = 0.0; ///< rad, kept in [0, 2*pi)
    double bs_phase_theta = 0.0;     ///< rad, kept in [0, 2*pi)
};

/// Validates and canonicalizes: phases are reduced to [0, 2*pi).
/// Throws ParameterDomainError for xi <= 0, mu < 0, pump < 0 or non-finite
/// input. Negative mu is rejected rather than folded because it is the same
/// source with the photons relabeled.
SourceParams make_source_params(double detuning_mu, double bandwidth_xi,
                                double symmetry_phase_phi = 0.0,
                                double bs_phase_theta = 0.0,
                                double pump_freq = 0.0);

/// Same checks as make_source_params for an already-built struct.
void validate(const SourceParams& params);

/// Spectrum of one photon pair whose peaks sit at +-mu/2 around the pump
/// half-frequency: amplitude sinc((2*omega - mu)/xi) over the reduced
/// frequency coordinate omega.
struct SincDetuned {
    double mu = 0.0;
    double xi = 1.0;
};

/// Symmetrized two-peak spectrum sinc((2w-mu)/xi) + e^{i phi} sinc((2w+mu)/xi).
/// Satisfies g(-w) = e^{i phi} conj(g(w)).
struct SincEntangled {
    double mu = 0.0;
    double xi = 1.0;
    double phi = 0.0;
};

struct GridSample {
    double omega = 0.0; ///< rad/ps
    std::complex<double> amp;
};

/// Sampled spectrum, interpreted as piecewise-linear between samples and
/// exactly zero outside the sampled range. Cheap to copy (shared samples).
class GridSpectrum {
public:
    /// Requires at least 3 samples, strictly increasing omega, finite
    /// amplitudes, at least one nonzero. Throws ParameterDomainError.
    explicit GridSpectrum(std::vector<GridSample> samples);

    std::complex<double> operator()(double omega) const;

    double omega_front() const { return (*samples_).front().omega; }
    double omega_back() const { return (*samples_).back().omega; }
    const std::vector<GridSample>& samples() const { return *samples_; }

    /// True when both share one underlying sample vector.
    bool shares_samples_with(const GridSpectrum& other) const {
        return samples_ == other.samples_;
    }

private:
    std::shared_ptr<const std::vector<GridSample>> samples_;
};

using ReducedSpectrum = std::variant<SincDetuned, SincEntangled, GridSpectrum>;

/// Complex amplitude of any spectrum at reduced frequency omega (rad/ps).
std::complex<double> evaluate(const ReducedSpectrum& spec, double omega);

/// True when the two descriptions are the same spectrum (same analytic
/// parameters, or the same shared sample vector).
bool same_spectrum(const ReducedSpectrum& a, const ReducedSpectrum& b);

ReducedSpectrum make_detuned_spectrum(const SourceParams& params);
ReducedSpectrum make_entangled_spectrum(const SourceParams& params);

/// One output-port pair's entry of the joint wave-function matrix.
struct WaveEntry {
    std::complex<double> coeff{1.0, 0.0};
    ReducedSpectrum spectrum;
};

/// 2x2 matrix of port-resolved spectral amplitudes behind the beam splitter,
/// indexed by ordered port pairs in (U, L) x (U, L) order. Immutable.
class JointWaveFunction {
public:
    JointWaveFunction(double pump_freq, std::array<WaveEntry, 4> entries);

    const WaveEntry& entry(Port s1, Port s2) const {
        return entries_[2 * static_cast<int>(s1) + static_cast<int>(s2)];
    }
    double pump_freq() const { return pump_freq_; }

    /// True when all four entries carry one spectrum; beamsplitter-built wave
    /// functions always do, and the engine exploits it.
    bool uniform_spectrum() const { return uniform_; }

private:
    double pump_freq_ = 0.0;
    std::array<WaveEntry, 4> entries_;
    bool uniform_ = false;
};

/// 50:50 beam splitter acting on one input spectrum. Coefficient matrix is
/// exactly [[e^{i theta}, +1], [-1, -e^{-i theta}]] in (U, L) x (U, L) order;
/// every entry carries the input spectrum unchanged.
JointWaveFunction apply_beamsplitter(const ReducedSpectrum& spectrum,
                                     const SourceParams& params);

/// Reads a sampled spectrum from CSV with the exact header
/// "omega_radps,re,im". Strict: three numeric fields per row, finite values,
/// strictly increasing omega. Throws ParseError on malformed input and
/// ParameterDomainError when the samples violate GridSpectrum invariants.
GridSpectrum load_grid_csv(std::istream& in);
GridSpectrum load_grid_csv_file(const std::string& path);

} // namespace homsim

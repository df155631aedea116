#include "homsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "homsim/numerics.hpp"

namespace homsim {

namespace {

bool finite(double x) { return std::isfinite(x); }

std::string describe(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

} // namespace

void validate(const SourceParams& params) {
    if (not finite(params.pump_freq) or params.pump_freq < 0.0)
        throw ParameterDomainError("pump_freq must be finite and >= 0, got " +
                                   describe(params.pump_freq));
    if (not finite(params.detuning_mu) or params.detuning_mu < 0.0)
        throw ParameterDomainError("detuning_mu must be finite and >= 0, got " +
                                   describe(params.detuning_mu));
    if (not finite(params.bandwidth_xi) or params.bandwidth_xi <= 0.0)
        throw ParameterDomainError("bandwidth_xi must be finite and > 0, got " +
                                   describe(params.bandwidth_xi));
    if (not finite(params.symmetry_phase_phi))
        throw ParameterDomainError("symmetry_phase_phi must be finite");
    if (not finite(params.bs_phase_theta))
        throw ParameterDomainError("bs_phase_theta must be finite");
}

SourceParams make_source_params(double detuning_mu, double bandwidth_xi,
                                double symmetry_phase_phi, double bs_phase_theta,
                                double pump_freq) {
    SourceParams p;
    p.pump_freq = pump_freq;
    p.detuning_mu = detuning_mu;
    p.bandwidth_xi = bandwidth_xi;
    p.symmetry_phase_phi = symmetry_phase_phi;
    p.bs_phase_theta = bs_phase_theta;
    validate(p);
    p.symmetry_phase_phi = num::reduce_phase(p.symmetry_phase_phi);
    p.bs_phase_theta = num::reduce_phase(p.bs_phase_theta);
    return p;
}

GridSpectrum::GridSpectrum(std::vector<GridSample> samples) {
    if (samples.size() < 3)
        throw ParameterDomainError("grid spectrum needs at least 3 samples, got " +
                                   std::to_string(samples.size()));
    bool any_nonzero = false;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (not finite(s.omega) or not finite(s.amp.real()) or not finite(s.amp.imag()))
            throw ParameterDomainError("grid sample " + std::to_string(i) +
                                       " is not finite");
        if (i > 0 and not(samples[i - 1].omega < s.omega))
            throw ParameterDomainError("grid omega values must be strictly increasing "
                                       "(violated at sample " + std::to_string(i) + ")");
        if (s.amp != std::complex<double>{})
            any_nonzero = true;
    }
    if (not any_nonzero)
        throw ParameterDomainError("grid spectrum is identically zero");
    samples_ = std::make_shared<const std::vector<GridSample>>(std::move(samples));
}

std::complex<double> GridSpectrum::operator()(double omega) const {
    const auto& s = *samples_;
    if (omega < s.front().omega or omega > s.back().omega)
        return {};
    auto hi = std::upper_bound(s.begin(), s.end(), omega,
                               [](double w, const GridSample& g) { return w < g.omega; });
    if (hi == s.begin())
        return s.front().amp;
    if (hi == s.end())
        return s.back().amp;
    const auto lo = hi - 1;
    const double f = (omega - lo->omega) / (hi->omega - lo->omega);
    return lo->amp + f * (hi->amp - lo->amp);
}

namespace {

std::complex<double> eval_sinc_detuned(const SincDetuned& s, double omega) {
    return {num::sinc((2.0 * omega - s.mu) / s.xi), 0.0};
}

std::complex<double> eval_sinc_entangled(const SincEntangled& s, double omega) {
    const double a = num::sinc((2.0 * omega - s.mu) / s.xi);
    const double b = num::sinc((2.0 * omega + s.mu) / s.xi);
    return std::complex<double>{a, 0.0} + num::cis(s.phi) * b;
}

} // namespace

std::complex<double> evaluate(const ReducedSpectrum& spec, double omega) {
    return std::visit(
        [omega](const auto& s) -> std::complex<double> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SincDetuned>)
                return eval_sinc_detuned(s, omega);
            else if constexpr (std::is_same_v<T, SincEntangled>)
                return eval_sinc_entangled(s, omega);
            else
                return s(omega);
        },
        spec);
}

bool same_spectrum(const ReducedSpectrum& a, const ReducedSpectrum& b) {
    if (a.index() != b.index())
        return false;
    if (const auto* da = std::get_if<SincDetuned>(&a)) {
        const auto& db = std::get<SincDetuned>(b);
        return da->mu == db.mu and da->xi == db.xi;
    }
    if (const auto* ea = std::get_if<SincEntangled>(&a)) {
        const auto& eb = std::get<SincEntangled>(b);
        return ea->mu == eb.mu and ea->xi == eb.xi and ea->phi == eb.phi;
    }
    return std::get<GridSpectrum>(a).shares_samples_with(std::get<GridSpectrum>(b));
}

ReducedSpectrum make_detuned_spectrum(const SourceParams& params) {
    validate(params);
    return SincDetuned{params.detuning_mu, params.bandwidth_xi};
}

ReducedSpectrum make_entangled_spectrum(const SourceParams& params) {
    validate(params);
    return SincEntangled{params.detuning_mu, params.bandwidth_xi,
                         params.symmetry_phase_phi};
}

JointWaveFunction::JointWaveFunction(double pump_freq, std::array<WaveEntry, 4> entries)
    : pump_freq_(pump_freq), entries_(std::move(entries)) {
    if (not finite(pump_freq_) or pump_freq_ < 0.0)
        throw ParameterDomainError("pump_freq must be finite and >= 0");
    for (const auto& e : entries_)
        if (not finite(e.coeff.real()) or not finite(e.coeff.imag()))
            throw ParameterDomainError("wave-function coefficient is not finite");
    uniform_ = same_spectrum(entries_[0].spectrum, entries_[1].spectrum) and
               same_spectrum(entries_[0].spectrum, entries_[2].spectrum) and
               same_spectrum(entries_[0].spectrum, entries_[3].spectrum);
}

JointWaveFunction apply_beamsplitter(const ReducedSpectrum& spectrum,
                                     const SourceParams& params) {
    validate(params);
    const std::complex<double> c_uu = num::cis(params.bs_phase_theta);
    const std::complex<double> c_ul{1.0, 0.0};
    const std::complex<double> c_lu{-1.0, 0.0};
    const std::complex<double> c_ll = -num::cis(-params.bs_phase_theta);
    return JointWaveFunction(params.pump_freq,
                             {WaveEntry{c_uu, spectrum}, WaveEntry{c_ul, spectrum},
                              WaveEntry{c_lu, spectrum}, WaveEntry{c_ll, spectrum}});
}

namespace {

// Strict double parser: the whole token must be consumed and the value finite.
double parse_strict_double(const std::string& token, std::size_t line_no) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": not a number: '" + token + "'");
    }
    while (used < token.size() and std::isspace(static_cast<unsigned char>(token[used])))
        ++used;
    if (used != token.size())
        throw ParseError("line " + std::to_string(line_no) +
                         ": trailing junk in number: '" + token + "'");
    if (not std::isfinite(v))
        throw ParseError("line " + std::to_string(line_no) +
                         ": non-finite value: '" + token + "'");
    return v;
}

std::string strip_cr(std::string s) {
    if (not s.empty() and s.back() == '\r')
        s.pop_back();
    return s;
}

} // namespace

GridSpectrum load_grid_csv(std::istream& in) {
    std::string line;
    if (not std::getline(in, line))
        throw ParseError("empty grid CSV");
    if (strip_cr(line) != "omega_radps,re,im")
        throw ParseError("grid CSV header must be exactly 'omega_radps,re,im', got '" +
                         strip_cr(line) + "'");
    std::vector<GridSample> samples;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty())
            continue;
        std::array<std::string, 3> fields;
        std::size_t begin = 0;
        for (int f = 0; f < 3; ++f) {
            const std::size_t comma = line.find(',', begin);
            if (f < 2) {
                if (comma == std::string::npos)
                    throw ParseError("line " + std::to_string(line_no) +
                                     ": expected 3 comma-separated fields");
                fields[f] = line.substr(begin, comma - begin);
                begin = comma + 1;
            } else {
                if (comma != std::string::npos)
                    throw ParseError("line " + std::to_string(line_no) +
                                     ": expected 3 comma-separated fields, got more");
                fields[f] = line.substr(begin);
            }
        }
        GridSample s;
        s.omega = parse_strict_double(fields[0], line_no);
        s.amp = {parse_strict_double(fields[1], line_no),
                 parse_strict_double(fields[2], line_no)};
        samples.push_back(s);
    }
    return GridSpectrum(std::move(samples));
}

GridSpectrum load_grid_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (not in)
        throw ParseError("cannot open grid CSV file: " + path);
    return load_grid_csv(in);
}

} // namespace homsim

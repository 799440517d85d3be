#ifndef NOONSIM_MEASUREMENT_HPP
#define NOONSIM_MEASUREMENT_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "noonsim/basis.hpp"
#include "noonsim/state.hpp"

namespace noonsim {

namespace detail {

inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

inline double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= double(i);
    return r;
}

}

// Two-mode mixing pulse between levels 3 and 5.  The default (pi/4 angle,
// zero phase) is the proper pi/2-pulse rotation
//   sigma_31 -> (sigma_31 + sigma_51)/sqrt(2)
//   sigma_51 -> (-sigma_31 + sigma_51)/sqrt(2),
// which squares to the signed 3<->5 swap and gives the detection-sign law
// (-1)^K for every atom number.  It matches the published map up to a
// global phase of the |5> input component.
struct RotationSpec {
    double mixing_angle = M_PI / 4.0;
    double relative_phase = 0.0;
};

// Amplitudes for redistributing (n3, n5) atoms over levels 3 and 5 under the
// collective mixing unitary; out[j] multiplies the state with j atoms in
// level 3.  Exact binomial transform of the two bosonized modes.
inline Eigen::VectorXcd mixing_amplitudes(int n3, int n5, const RotationSpec& spec) {
    const int N = n3 + n5;
    const double c = std::cos(spec.mixing_angle), s = std::sin(spec.mixing_angle);
    const Complex up = std::polar(s, spec.relative_phase);     // e^{+i phi} s
    const Complex dn = -std::polar(s, -spec.relative_phase);   // -e^{-i phi} s
    auto ipow = [](Complex z, int k) {
        Complex r(1.0, 0.0);
        for (int i = 0; i < k; ++i) r *= z;
        return r;
    };
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(N + 1);
    for (int i = 0; i <= n3; ++i) {
        Complex f1 = detail::binom(n3, i) * ipow(Complex(c, 0.0), i) * ipow(up, n3 - i);
        for (int k = 0; k <= n5; ++k) {
            Complex f2 = detail::binom(n5, k) * ipow(dn, k) * ipow(Complex(c, 0.0), n5 - k);
            out[i + k] += f1 * f2;
        }
    }
    for (int j = 0; j <= N; ++j)
        out[j] *= std::sqrt(detail::factorial(j) * detail::factorial(N - j) /
                            (detail::factorial(n3) * detail::factorial(n5)));
    return out;
}

// Basis of occupation states with explicit photon numbers: the direct sum of
// sectors the 3<->5 rotation maps into.  Lookup key includes the photons.
class MergedBasis {
public:
    explicit MergedBasis(std::vector<OccupationState> states) : m_states(std::move(states)) {
        std::sort(m_states.begin(), m_states.end(), [](const auto& a, const auto& b) {
            if (a.atoms != b.atoms) return a.atoms < b.atoms;
            if (a.na != b.na) return a.na < b.na;
            return a.nb < b.nb;
        });
        m_states.erase(std::unique(m_states.begin(), m_states.end()), m_states.end());
        for (std::size_t i = 0; i < m_states.size(); ++i) m_index.emplace(key(m_states[i]), i);
    }

    std::size_t size() const { return m_states.size(); }
    const OccupationState& state(std::size_t i) const { return m_states[i]; }
    std::size_t index_of(const OccupationState& s) const {
        auto it = m_index.find(key(s));
        if (it == m_index.end())
            throw BasisMergeError("MergedBasis: state " + s.to_string() + " not present");
        return it->second;
    }

    // Closure of a set of source states under arbitrary 3<->5 redistribution.
    static std::shared_ptr<const MergedBasis> closure(const std::vector<OccupationState>& src) {
        std::vector<OccupationState> all;
        for (const auto& s : src) {
            int N = s.level(3) + s.level(5);
            for (int j = 0; j <= N; ++j) {
                OccupationState t = s;
                t.level(3) = j;
                t.level(5) = N - j;
                all.push_back(t);
            }
        }
        if (all.empty()) throw BasisMergeError("MergedBasis: no source states");
        return std::make_shared<const MergedBasis>(std::move(all));
    }

private:
    static std::uint64_t key(const OccupationState& s) {
        std::uint64_t k = 0;
        for (int v : s.atoms) k = (k << 8) | std::uint64_t(v & 0xff);
        k = (k << 8) | std::uint64_t(s.na & 0xff);
        k = (k << 8) | std::uint64_t(s.nb & 0xff);
        return k;
    }
    std::vector<OccupationState> m_states;
    std::unordered_map<std::uint64_t, std::size_t> m_index;
};

// State over a merged basis; branch weights are folded into the amplitudes,
// since the rotation is exactly where the branches start to interfere.
struct MergedState {
    std::shared_ptr<const MergedBasis> basis;
    Eigen::VectorXcd amps;

    double norm2() const { return amps.squaredNorm(); }
};

inline MergedState rotate_35(const StateVector& psi, const RotationSpec& spec = {}) {
    std::vector<OccupationState> src;
    for (const auto& b : psi.branches)
        for (const auto& s : b.basis->states()) src.push_back(s);
    auto basis = MergedBasis::closure(src);
    MergedState out;
    out.basis = basis;
    out.amps = Eigen::VectorXcd::Zero(Eigen::Index(basis->size()));
    for (const auto& b : psi.branches) {
        for (std::size_t i = 0; i < b.basis->size(); ++i) {
            Complex a = b.weight * b.amps[Eigen::Index(i)];
            if (a == Complex(0.0, 0.0)) continue;
            const OccupationState& s = b.basis->state(i);
            Eigen::VectorXcd mix = mixing_amplitudes(s.level(3), s.level(5), spec);
            OccupationState t = s;
            int N = s.level(3) + s.level(5);
            for (int j = 0; j <= N; ++j) {
                t.level(3) = j;
                t.level(5) = N - j;
                out.amps[Eigen::Index(basis->index_of(t))] += a * mix[j];
            }
        }
    }
    return out;
}

inline MergedState rotate_35(const MergedState& psi, const RotationSpec& spec = {}) {
    MergedState out;
    std::vector<OccupationState> src;
    for (std::size_t i = 0; i < psi.basis->size(); ++i) src.push_back(psi.basis->state(i));
    out.basis = MergedBasis::closure(src);
    out.amps = Eigen::VectorXcd::Zero(Eigen::Index(out.basis->size()));
    for (std::size_t i = 0; i < psi.basis->size(); ++i) {
        Complex a = psi.amps[Eigen::Index(i)];
        if (a == Complex(0.0, 0.0)) continue;
        const OccupationState& s = psi.basis->state(i);
        Eigen::VectorXcd mix = mixing_amplitudes(s.level(3), s.level(5), spec);
        OccupationState t = s;
        int N = s.level(3) + s.level(5);
        for (int j = 0; j <= N; ++j) {
            t.level(3) = j;
            t.level(5) = N - j;
            out.amps[Eigen::Index(out.basis->index_of(t))] += a * mix[j];
        }
    }
    return out;
}

// Conditional photonic state after an atomic detection: a density matrix
// over the occurring (na, nb) pairs.  Distinct surviving atomic
// configurations cannot interfere, so the conditional state is pure exactly
// when one configuration survives (the ideal top-ladder input).
struct ConditionalPhotonState {
    std::vector<std::pair<int, int>> photon_modes;  // (na, nb) per basis slot
    Eigen::MatrixXcd rho;                           // trace 1 when defined
    double purity = 0.0;
    bool pure = false;
    Eigen::VectorXcd amplitudes;  // filled when pure

    std::ptrdiff_t mode_index(int na, int nb) const {
        for (std::size_t i = 0; i < photon_modes.size(); ++i)
            if (photon_modes[i] == std::make_pair(na, nb)) return std::ptrdiff_t(i);
        return -1;
    }
};

struct MeasurementOutcome {
    int K = 0;                      // detected atoms in level |3>
    std::optional<int> n5_count;    // set when level |5> was projected too
    double probability = 0.0;
    bool undefined_conditional = false;
    ConditionalPhotonState photons;
    // filled by noon_fidelity when requested
    double fidelity = 0.0;
    double fidelity_plus = 0.0;
    double fidelity_minus = 0.0;
    int best_sign = +1;
};

inline MeasurementOutcome project_and_condition(const MergedState& psi, int K,
                                                std::optional<int> n5_count = std::nullopt) {
    MeasurementOutcome out;
    out.K = K;
    out.n5_count = n5_count;

    // group surviving amplitudes by atomic configuration
    std::map<std::array<int, 6>, std::map<std::pair<int, int>, Complex>> groups;
    double prob = 0.0;
    std::vector<std::pair<int, int>> modes;
    for (std::size_t i = 0; i < psi.basis->size(); ++i) {
        const OccupationState& s = psi.basis->state(i);
        if (s.level(3) != K) continue;
        if (n5_count && s.level(5) != *n5_count) continue;
        Complex a = psi.amps[Eigen::Index(i)];
        if (a == Complex(0.0, 0.0)) continue;
        prob += std::norm(a);
        groups[s.atoms][{s.na, s.nb}] += a;
        if (std::find(modes.begin(), modes.end(), std::make_pair(s.na, s.nb)) == modes.end())
            modes.emplace_back(s.na, s.nb);
    }
    out.probability = prob;
    if (prob <= 0.0) {
        out.undefined_conditional = true;
        return out;
    }
    std::sort(modes.begin(), modes.end());
    out.photons.photon_modes = modes;
    Eigen::Index nm = Eigen::Index(modes.size());
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(nm, nm);
    for (const auto& [atoms, vecmap] : groups) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(nm);
        for (const auto& [mode, amp] : vecmap) {
            auto it = std::lower_bound(modes.begin(), modes.end(), mode);
            v[Eigen::Index(it - modes.begin())] = amp;
        }
        rho += v * v.adjoint();
    }
    rho /= prob;
    out.photons.rho = rho;
    out.photons.purity = (rho * rho).trace().real();
    out.photons.pure = out.photons.purity > 1.0 - 1e-9;
    if (out.photons.pure) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
        Eigen::Index top;
        es.eigenvalues().maxCoeff(&top);
        out.photons.amplitudes = es.eigenvectors().col(top);
        // deterministic phase: largest component real positive
        Eigen::Index big = 0;
        for (Eigen::Index i = 1; i < nm; ++i)
            if (std::abs(out.photons.amplitudes[i]) > std::abs(out.photons.amplitudes[big])) big = i;
        Complex ph = out.photons.amplitudes[big] / std::abs(out.photons.amplitudes[big]);
        out.photons.amplitudes /= ph;
    }
    return out;
}

// |<NOON(alpha, +/-beta, N)|rho|...>| overlap of a conditional photonic state
// with the two sign choices of the N-photon two-mode superposition target.
struct NoonFidelity {
    double fidelity = 0.0;  // max over the sign
    double plus = 0.0;
    double minus = 0.0;
    int best_sign = +1;
};

inline NoonFidelity noon_fidelity(const ConditionalPhotonState& ph, Complex alpha, Complex beta,
                                  int N) {
    NoonFidelity f;
    std::ptrdiff_t ia = ph.mode_index(N, 0);
    std::ptrdiff_t ib = ph.mode_index(0, N);
    double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
    Eigen::Index nm = Eigen::Index(ph.photon_modes.size());
    for (int sign : {+1, -1}) {
        Eigen::VectorXcd target = Eigen::VectorXcd::Zero(nm);
        if (ia >= 0) target[Eigen::Index(ia)] = alpha / norm;
        if (ib >= 0) target[Eigen::Index(ib)] = double(sign) * beta / norm;
        double val = std::max(0.0, (target.adjoint() * ph.rho * target).value().real());
        if (sign > 0)
            f.plus = val;
        else
            f.minus = val;
    }
    f.best_sign = (f.plus >= f.minus) ? +1 : -1;
    f.fidelity = std::max(f.plus, f.minus);
    return f;
}

// Pure-state overload (amplitudes indexed like photon_modes).
inline NoonFidelity noon_fidelity(const std::vector<std::pair<int, int>>& modes,
                                  const Eigen::VectorXcd& amps, Complex alpha, Complex beta,
                                  int N) {
    ConditionalPhotonState ph;
    ph.photon_modes = modes;
    ph.rho = (amps * amps.adjoint()) / amps.squaredNorm();
    return noon_fidelity(ph, alpha, beta, N);
}

// All detection outcomes of the default (count level 3 only) measurement,
// with NOON fidelities against the given branch weights and photon number.
inline std::vector<MeasurementOutcome> measure_all(const MergedState& psi, Complex alpha,
                                                   Complex beta, int N, int M) {
    std::vector<MeasurementOutcome> res;
    for (int K = 0; K <= M; ++K) {
        MeasurementOutcome o = project_and_condition(psi, K);
        if (!o.undefined_conditional) {
            NoonFidelity f = noon_fidelity(o.photons, alpha, beta, N);
            o.fidelity = f.fidelity;
            o.fidelity_plus = f.plus;
            o.fidelity_minus = f.minus;
            o.best_sign = f.best_sign;
        }
        res.push_back(std::move(o));
    }
    return res;
}

// The published closed-form detection weight, implemented literally with the
// summation limits rounded inward: w = p^K sum_{m=ceil(K/2)}^{floor((M-K)/2)}
// (1-p)^{2m} C(M, 2m).  Unnormalized; see detection_distribution for the
// normalized variant and detection_probability_model for the physical
// detector model it is cross-checked against.
inline double detection_probability(int M, int K, double p) {
    if (p < 0.0 || p > 1.0) throw Error("detection_probability: p must be in [0,1]");
    if (K < 0 || K > M) throw Error("detection_probability: K must be in [0,M]");
    int m_lo = (K + 1) / 2;
    int m_hi = (M - K) / 2;
    double sum = 0.0;
    for (int m = m_lo; m <= m_hi; ++m)
        sum += std::pow(1.0 - p, 2 * m) * detail::binom(M, 2 * m);
    return std::pow(p, K) * sum;
}

inline std::vector<double> detection_distribution(int M, double p) {
    std::vector<double> w(std::size_t(M + 1));
    double tot = 0.0;
    for (int K = 0; K <= M; ++K) {
        w[std::size_t(K)] = detection_probability(M, K, p);
        tot += w[std::size_t(K)];
    }
    if (tot > 0.0)
        for (auto& v : w) v /= tot;
    return w;
}

// Physical detector model for the balanced top-ladder input: the atoms are
// binomially distributed over levels 3 and 5 by the rotation, each level-3
// atom is seen with probability p, and the record K yields the expected-sign
// NOON state exactly when the number of missed atoms is even.  Closed form;
// matches the exhaustive miss-pattern enumeration.
inline double detection_probability_model(int M, int K, double p) {
    if (p < 0.0 || p > 1.0) throw Error("detection_probability_model: p must be in [0,1]");
    if (K < 0 || K > M) throw Error("detection_probability_model: K must be in [0,M]");
    double sum = 0.0;
    for (int m = 0; K + 2 * m <= M; ++m)
        sum += detail::binom(M, K + 2 * m) * detail::binom(K + 2 * m, K) *
               std::pow(1.0 - p, 2 * m);
    return std::pow(2.0, -M) * std::pow(p, K) * sum;
}

// Record distribution without the sign condition (all miss counts).
inline double detection_record_probability(int M, int K, double p) {
    double sum = 0.0;
    for (int J = K; J <= M; ++J)
        sum += detail::binom(M, J) * detail::binom(J, K) * std::pow(1.0 - p, J - K);
    return std::pow(2.0, -M) * std::pow(p, K) * sum;
}

// Lossy-detector conditional state: binomial thinning of the true level-3
// count followed by projection.  Mixes the outcomes of all true counts
// J >= K compatible with the record.
inline MeasurementOutcome lossy_project_and_condition(const MergedState& psi, int K, double p) {
    if (p < 0.0 || p > 1.0) throw Error("lossy_project_and_condition: p must be in [0,1]");
    MeasurementOutcome out;
    out.K = K;
    // collect all photon modes that can occur
    std::vector<std::pair<int, int>> modes;
    double prob = 0.0;
    std::vector<std::pair<double, MeasurementOutcome>> parts;
    int M = 0;
    for (std::size_t i = 0; i < psi.basis->size(); ++i)
        M = std::max(M, psi.basis->state(i).total_atoms());
    for (int J = K; J <= M; ++J) {
        MeasurementOutcome oj = project_and_condition(psi, J);
        if (oj.probability <= 0.0) continue;
        double wj = detail::binom(J, K) * std::pow(p, K) * std::pow(1.0 - p, J - K);
        if (wj == 0.0) continue;
        prob += wj * oj.probability;
        parts.emplace_back(wj, std::move(oj));
        for (const auto& m : parts.back().second.photons.photon_modes)
            if (std::find(modes.begin(), modes.end(), m) == modes.end()) modes.push_back(m);
    }
    out.probability = prob;
    if (prob <= 0.0) {
        out.undefined_conditional = true;
        return out;
    }
    std::sort(modes.begin(), modes.end());
    Eigen::Index nm = Eigen::Index(modes.size());
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(nm, nm);
    for (const auto& [wj, oj] : parts) {
        // embed the part's rho into the union mode list
        for (std::size_t r = 0; r < oj.photons.photon_modes.size(); ++r)
            for (std::size_t c = 0; c < oj.photons.photon_modes.size(); ++c) {
                auto ir = std::lower_bound(modes.begin(), modes.end(), oj.photons.photon_modes[r]);
                auto ic = std::lower_bound(modes.begin(), modes.end(), oj.photons.photon_modes[c]);
                rho(Eigen::Index(ir - modes.begin()), Eigen::Index(ic - modes.begin())) +=
                    wj * oj.probability * oj.photons.rho(Eigen::Index(r), Eigen::Index(c));
            }
    }
    rho /= prob;
    out.photons.photon_modes = modes;
    out.photons.rho = rho;
    out.photons.purity = (rho * rho).trace().real();
    out.photons.pure = out.photons.purity > 1.0 - 1e-9;
    return out;
}

}

#endif

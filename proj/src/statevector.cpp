#include "qdmft/statevector.hpp"

#include <cmath>
#include <stdexcept>

namespace qdmft {

namespace {

const cplx I(0.0, 1.0);

void check_qubit(const Statevector& state, int q) {
    if (q < 0 || q >= state.n_qubits)
        throw std::out_of_range("apply_gate: qubit index out of range");
}

void apply_single(Statevector& state, int q, cplx u00, cplx u01, cplx u10, cplx u11) {
    const long dim = state.amp.size();
    const long bit = 1L << q;
    for (long s = 0; s < dim; ++s) {
        if (s & bit)
            continue;
        cplx a0 = state.amp(s);
        cplx a1 = state.amp(s | bit);
        state.amp(s) = u00 * a0 + u01 * a1;
        state.amp(s | bit) = u10 * a0 + u11 * a1;
    }
}

void apply_rotation(Statevector& state, char axis, int q, double angle) {
    check_qubit(state, q);
    double c = std::cos(0.5 * angle);
    double s = std::sin(0.5 * angle);
    switch (axis) {
    case 'x':
        apply_single(state, q, c, -I * s, -I * s, c);
        break;
    case 'y':
        apply_single(state, q, c, -s, s, c);
        break;
    case 'z':
        apply_single(state, q, c - I * s, 0.0, 0.0, c + I * s);
        break;
    default:
        throw std::invalid_argument("apply_gate: bad rotation axis");
    }
}

// MS gate via a per-qubit change of basis: with R = (1/sqrt(2)) [[1, 1],
// [e^{i phi}, -e^{i phi}]], sigma^(phi) = R sigma^z R^dag, so the gate is
// diagonal after rotating every qubit in range by R^dag.
void apply_ms(Statevector& state, const GateSpec& g) {
    check_qubit(state, g.ms_first);
    check_qubit(state, g.ms_last);
    if (g.ms_first > g.ms_last)
        throw std::invalid_argument("apply_gate: empty MS range");
    const double inv = 1.0 / std::sqrt(2.0);
    const cplx e = std::exp(I * g.phi);
    const int k = g.ms_last - g.ms_first + 1;
    for (int q = g.ms_first; q <= g.ms_last; ++q)
        apply_single(state, q, inv, inv * std::conj(e), inv, -inv * std::conj(e)); // R^dag
    const long dim = state.amp.size();
    std::vector<cplx> phase(k + 1);
    for (int ones = 0; ones <= k; ++ones) {
        double sz = static_cast<double>(k - 2 * ones); // bit 0 maps to sigma^z = +1
        phase[ones] = std::exp(-I * (g.theta / 4.0) * sz * sz);
    }
    for (long s = 0; s < dim; ++s) {
        int ones = __builtin_popcountl((s >> g.ms_first) & ((1L << k) - 1));
        state.amp(s) *= phase[ones];
    }
    for (int q = g.ms_first; q <= g.ms_last; ++q)
        apply_single(state, q, inv, inv, e * inv, -e * inv); // R
}

void apply_controlled_pauli(Statevector& state, const GateSpec& g) {
    check_qubit(state, g.control);
    if (g.targets.empty())
        throw std::invalid_argument("apply_gate: empty Pauli string");
    long flip = 0;
    for (const auto& t : g.targets) {
        check_qubit(state, t.qubit);
        if (t.qubit == g.control)
            throw std::invalid_argument("apply_gate: control overlaps Pauli target");
        if (t.axis == 'x' || t.axis == 'y')
            flip |= 1L << t.qubit;
    }
    const long dim = state.amp.size();
    const long cbit = 1L << g.control;
    const long cval = g.control_value ? cbit : 0;
    for (long s = 0; s < dim; ++s) {
        if ((s & cbit) != cval)
            continue;
        long sp = s ^ flip;
        if (sp < s)
            continue; // handle each pair once (sp == s when the string is diagonal)
        // phase of <sp| P |s>
        cplx ph(1.0, 0.0);
        cplx ph_rev(1.0, 0.0);
        for (const auto& t : g.targets) {
            long bit = 1L << t.qubit;
            int b_s = (s & bit) ? 1 : 0;
            switch (t.axis) {
            case 'x':
                break;
            case 'y':
                ph *= b_s ? -I : I;      // sigma^y |0> = i|1>, sigma^y |1> = -i|0>
                ph_rev *= b_s ? I : -I;
                break;
            case 'z':
                ph *= b_s ? -1.0 : 1.0;
                ph_rev *= b_s ? -1.0 : 1.0;
                break;
            default:
                throw std::invalid_argument("apply_gate: bad Pauli axis");
            }
        }
        if (sp == s) {
            state.amp(s) *= ph;
        } else {
            cplx a = state.amp(s);
            cplx b = state.amp(sp);
            state.amp(sp) = ph * a;
            state.amp(s) = ph_rev * b;
        }
    }
}

} // namespace

void apply_gate(Statevector& state, const GateSpec& gate) {
    switch (gate.kind) {
    case GateKind::rotation:
        apply_rotation(state, gate.axis, gate.qubit, gate.angle);
        break;
    case GateKind::ms:
        apply_ms(state, gate);
        break;
    case GateKind::hadamard: {
        check_qubit(state, gate.qubit);
        const double inv = 1.0 / std::sqrt(2.0);
        apply_single(state, gate.qubit, inv, inv, inv, -inv);
        break;
    }
    case GateKind::controlled_pauli:
        apply_controlled_pauli(state, gate);
        break;
    }
}

GateSpec noisify(const GateSpec& gate, const NoiseModel& noise, RngStream& rng) {
    GateSpec g = gate;
    switch (gate.kind) {
    case GateKind::rotation:
        if (noise.sigma_1q > 0.0)
            g.angle += noise.sigma_1q * rng.gaussian();
        break;
    case GateKind::ms:
        if (noise.sigma_ms > 0.0) {
            const double scale = noise.sigma_ms * M_PI / 2.0;
            g.theta += scale * rng.gaussian();
            g.phi += scale * rng.gaussian();
        }
        break;
    default:
        break;
    }
    return g;
}

Statevector jw_encode(const std::vector<int>& occupations) {
    long bits = 0;
    for (size_t j = 0; j < occupations.size(); ++j)
        if (occupations[j])
            bits |= 1L << (j + 1);
    return Statevector::basis(static_cast<int>(occupations.size()) + 1, bits);
}

double expect_z(const Statevector& state, int qubit) {
    const long bit = 1L << qubit;
    double val = 0.0;
    for (long s = 0; s < state.amp.size(); ++s)
        val += (s & bit) ? -std::norm(state.amp(s)) : std::norm(state.amp(s));
    return val;
}

double expect_y(const Statevector& state, int qubit) {
    const long bit = 1L << qubit;
    double val = 0.0;
    for (long s = 0; s < state.amp.size(); ++s) {
        if (s & bit)
            continue;
        // <s|psi>* <s1|psi> pairing: sigma^y contribution 2 Im(conj(a0) a1)
        val += 2.0 * std::imag(std::conj(state.amp(s)) * state.amp(s | bit));
    }
    return val;
}

} // namespace qdmft

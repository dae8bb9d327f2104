#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qdmft/rng.hpp"
#include "qdmft/statevector.hpp"

namespace qdmft::testing {

inline Eigen::Matrix2cd pauli(char axis) {
    Eigen::Matrix2cd m;
    const cplx I(0.0, 1.0);
    switch (axis) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, -I, I, 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default: m.setIdentity(); break;
    }
    return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Dense operator for a Pauli string; index bit q is the state of qubit q.
inline Eigen::MatrixXcd dense_pauli_string(const PauliString& string, int n_qubits) {
    std::vector<Eigen::Matrix2cd> factors(n_qubits, Eigen::Matrix2cd::Identity());
    for (const auto& term : string)
        factors[term.qubit] = pauli(term.axis);
    // qubit 0 is the least significant bit, so it sits rightmost in the
    // kron chain
    Eigen::MatrixXcd out = factors[n_qubits - 1];
    for (int q = n_qubits - 2; q >= 0; --q)
        out = kron(out, factors[q]);
    return out;
}

inline Eigen::MatrixXcd dense_single(const Eigen::Matrix2cd& u, int qubit, int n_qubits) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int q = n_qubits - 1; q >= 0; --q)
        out = kron(out, q == qubit ? Eigen::MatrixXcd(u)
                                   : Eigen::MatrixXcd(Eigen::Matrix2cd::Identity()));
    return out;
}

// Dense matrix of one gate, matching apply_gate exactly.
inline Eigen::MatrixXcd dense_gate(const GateSpec& gate, int n_qubits) {
    const long dim = 1L << n_qubits;
    const cplx I(0.0, 1.0);
    switch (gate.kind) {
    case GateKind::rotation: {
        Eigen::Matrix2cd u =
            (-I * (gate.angle / 2.0) * pauli(gate.axis)).exp();
        return dense_single(u, gate.qubit, n_qubits);
    }
    case GateKind::hadamard: {
        Eigen::Matrix2cd h;
        h << 1, 1, 1, -1;
        h /= std::sqrt(2.0);
        return dense_single(h, gate.qubit, n_qubits);
    }
    case GateKind::ms: {
        Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(dim, dim);
        Eigen::Matrix2cd sq = std::cos(gate.phi) * pauli('x') + std::sin(gate.phi) * pauli('y');
        for (int q = gate.ms_first; q <= gate.ms_last; ++q)
            s += dense_single(sq, q, n_qubits);
        return (-I * (gate.theta / 4.0) * s * s).exp();
    }
    case GateKind::controlled_pauli: {
        Eigen::MatrixXcd p = dense_pauli_string(gate.targets, n_qubits);
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
        for (long s = 0; s < dim; ++s) {
            bool active = ((s >> gate.control) & 1L) == gate.control_value;
            for (long r = 0; r < dim; ++r)
                out(r, s) = active ? p(r, s) : (r == s ? cplx(1.0, 0.0) : cplx(0.0, 0.0));
        }
        return out;
    }
    }
    return Eigen::MatrixXcd::Identity(dim, dim);
}

inline Eigen::MatrixXcd dense_program(const std::vector<GateSpec>& gates, int n_qubits) {
    const long dim = 1L << n_qubits;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& g : gates)
        u = dense_gate(g, n_qubits) * u;
    return u;
}

// Largest deviation after removing an overall phase.
inline double phase_aligned_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    long imax = 0, jmax = 0;
    a.cwiseAbs().maxCoeff(&imax, &jmax);
    cplx phase = b(imax, jmax) / a(imax, jmax);
    phase /= std::abs(phase);
    return (a * phase - b).cwiseAbs().maxCoeff();
}

inline cplx random_coupling(RngStream& rng) {
    return cplx(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
}

} // namespace qdmft::testing

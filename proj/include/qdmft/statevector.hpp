#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qdmft/rng.hpp"
#include "qdmft/time_grid.hpp"

namespace qdmft {

// Probe + system register. Qubit 0 is the probe; system qubits 1..2(N+1)
// follow the Jordan-Wigner ordering (impurity down = 1, impurity up = 2,
// then two qubits per bath site). Index bit q holds the state of qubit q.
struct Statevector {
    int n_qubits = 0;
    Eigen::VectorXcd amp;

    static Statevector basis(int n_qubits, long bits) {
        Statevector s;
        s.n_qubits = n_qubits;
        s.amp = Eigen::VectorXcd::Zero(1L << n_qubits);
        s.amp(bits) = 1.0;
        return s;
    }
};

enum class GateKind { rotation, ms, hadamard, controlled_pauli };

struct PauliTerm {
    int qubit;
    char axis; // 'x', 'y' or 'z'
};
using PauliString = std::vector<PauliTerm>;

struct GateSpec {
    GateKind kind = GateKind::rotation;

    // rotation / hadamard
    char axis = 'z';
    int qubit = 0;
    double angle = 0.0; // exp(-i angle/2 sigma_axis)

    // ms: exp[-i theta/4 (cos(phi) Sx + sin(phi) Sy)^2] over qubits first..last
    int ms_first = 0;
    int ms_last = 0;
    double theta = 0.0;
    double phi = 0.0;

    // controlled pauli
    int control = 0;
    int control_value = 0;
    PauliString targets;

    static GateSpec rotation_gate(char axis, int qubit, double angle) {
        GateSpec g;
        g.kind = GateKind::rotation;
        g.axis = axis;
        g.qubit = qubit;
        g.angle = angle;
        return g;
    }
    static GateSpec ms_gate(int first, int last, double theta, double phi) {
        GateSpec g;
        g.kind = GateKind::ms;
        g.ms_first = first;
        g.ms_last = last;
        g.theta = theta;
        g.phi = phi;
        return g;
    }
    static GateSpec hadamard_gate(int qubit) {
        GateSpec g;
        g.kind = GateKind::hadamard;
        g.qubit = qubit;
        return g;
    }
    static GateSpec controlled_pauli_gate(int control, int value, PauliString targets) {
        GateSpec g;
        g.kind = GateKind::controlled_pauli;
        g.control = control;
        g.control_value = value;
        g.targets = std::move(targets);
        return g;
    }
};

void apply_gate(Statevector& state, const GateSpec& gate);

struct NoiseModel {
    double sigma_1q = 1e-6;
    double sigma_ms = 0.0; // relative to the pi/2 entangling angle

    bool silent() const { return sigma_1q == 0.0 && sigma_ms == 0.0; }
};

// Gaussian angle perturbations; Hadamard and controlled-Pauli gates pass
// through unchanged.
GateSpec noisify(const GateSpec& gate, const NoiseModel& noise, RngStream& rng);

// Product state over probe (|0>) + system qubits from per-mode occupations.
Statevector jw_encode(const std::vector<int>& occupations);

double expect_z(const Statevector& state, int qubit);
double expect_y(const Statevector& state, int qubit);

} // namespace qdmft

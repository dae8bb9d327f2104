#pragma once

#include <string>
#include <vector>

#include "qdmft/siam.hpp"
#include "qdmft/statevector.hpp"

namespace qdmft {

struct GateBlock {
    std::string label;
    std::vector<GateSpec> gates;
};

struct TrotterStepProgram {
    int t_index = 0;
    std::vector<GateBlock> blocks;

    std::vector<GateSpec> flatten() const {
        std::vector<GateSpec> out;
        for (const auto& b : blocks)
            out.insert(out.end(), b.gates.begin(), b.gates.end());
        return out;
    }
};

// Gates realizing exp(i phi * string) for a contiguous Pauli string of at
// least two qubits, as one MS conjugation sandwich plus local basis changes.
std::vector<GateSpec> compile_pauli_exponent(const PauliString& string, double phi);

GateBlock compile_interaction(double u, double dt);

// Four Pauli-string blocks per (bath, spin); bath is 0-based, strings follow
// the printed order xx, yy, yx, xy with zero-coefficient strings dropped.
std::vector<GateBlock> compile_hybridization(int bath, int spin, cplx v, double dt);

TrotterStepProgram compile_trotter_step(const SiamParams& params, int t_index, double dt);

// One gate per line for inspection or golden-file comparison.
std::string dump_program(const TrotterStepProgram& program);

} // namespace qdmft

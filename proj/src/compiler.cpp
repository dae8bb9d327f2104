#include "qdmft/compiler.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qdmft {

namespace {

constexpr double half_pi = M_PI / 2.0;

struct Wrapper {
    char axis;
    double angle; // C = exp(-i angle/2 sigma_axis) conjugates the canonical letter into the target one
};

// Conjugation choices with C sigma_can C^dag = +sigma_target.
Wrapper head_wrapper(char target) {
    switch (target) { // canonical 'z'
    case 'z': return {'z', 0.0};
    case 'x': return {'y', half_pi};
    case 'y': return {'x', -half_pi};
    }
    throw std::invalid_argument("compile_pauli_exponent: bad Pauli letter");
}

Wrapper tail_wrapper_x(char target) {
    switch (target) { // canonical 'x'
    case 'x': return {'x', 0.0};
    case 'y': return {'z', half_pi};
    case 'z': return {'y', -half_pi};
    }
    throw std::invalid_argument("compile_pauli_exponent: bad Pauli letter");
}

Wrapper tail_wrapper_y(char target) {
    switch (target) { // canonical 'y'
    case 'y': return {'z', 0.0};
    case 'x': return {'z', -half_pi};
    case 'z': return {'x', half_pi};
    }
    throw std::invalid_argument("compile_pauli_exponent: bad Pauli letter");
}

// Local gate exp(i sign * phi * sigma_axis) on the head for the x- and
// y-type sandwiches, by string length k mod 4.
void local_gate(int k, bool y_type, char& axis, int& sign) {
    switch (k % 4) {
    case 3: axis = 'z'; sign = -1; break;
    case 1: axis = 'z'; sign = +1; break;
    case 2: axis = y_type ? 'x' : 'y'; sign = y_type ? +1 : -1; break;
    default: axis = y_type ? 'x' : 'y'; sign = y_type ? -1 : +1; break;
    }
}

} // namespace

std::vector<GateSpec> compile_pauli_exponent(const PauliString& string, double phi) {
    const int k = static_cast<int>(string.size());
    if (k < 2)
        throw std::invalid_argument("compile_pauli_exponent: need at least two qubits");
    for (int i = 1; i < k; ++i)
        if (string[i].qubit != string[i - 1].qubit + 1)
            throw std::invalid_argument("compile_pauli_exponent: string must be contiguous");

    int head = 0;
    int n_y = 0, n_x = 0;
    for (int i = 0; i < k; ++i) {
        if (string[i].axis == 'z' && string[head].axis != 'z')
            head = i;
        if (string[i].axis == 'y') ++n_y;
        if (string[i].axis == 'x') ++n_x;
    }
    const bool y_type = n_y > n_x;
    const double ms_phi = y_type ? half_pi : 0.0;

    std::vector<Wrapper> wraps(k);
    for (int i = 0; i < k; ++i) {
        if (i == head)
            wraps[i] = head_wrapper(string[i].axis);
        else
            wraps[i] = y_type ? tail_wrapper_y(string[i].axis) : tail_wrapper_x(string[i].axis);
    }

    char loc_axis;
    int loc_sign;
    local_gate(k, y_type, loc_axis, loc_sign);

    std::vector<GateSpec> gates;
    for (int i = 0; i < k; ++i)
        if (wraps[i].angle != 0.0)
            gates.push_back(GateSpec::rotation_gate(wraps[i].axis, string[i].qubit, -wraps[i].angle));
    const int q0 = string.front().qubit;
    const int q1 = string.back().qubit;
    gates.push_back(GateSpec::ms_gate(q0, q1, half_pi, ms_phi));
    gates.push_back(GateSpec::rotation_gate(loc_axis, string[head].qubit, -2.0 * loc_sign * phi));
    gates.push_back(GateSpec::ms_gate(q0, q1, -half_pi, ms_phi));
    for (int i = 0; i < k; ++i)
        if (wraps[i].angle != 0.0)
            gates.push_back(GateSpec::rotation_gate(wraps[i].axis, string[i].qubit, wraps[i].angle));
    return gates;
}

GateBlock compile_interaction(double u, double dt) {
    GateBlock block;
    block.label = "interaction";
    if (u == 0.0)
        return block;
    block.gates = compile_pauli_exponent({{1, 'z'}, {2, 'z'}}, -dt * u / 4.0);
    return block;
}

std::vector<GateBlock> compile_hybridization(int bath, int spin, cplx v, double dt) {
    std::vector<GateBlock> blocks;
    if (v == cplx(0.0, 0.0))
        return blocks;
    const int p = bath + 2;                   // 1-based site index, impurity is 1
    const int first = (spin == 0) ? 1 : 2;    // down strings start on qubit 1, up on 2
    const int last = (spin == 0) ? 2 * p - 1 : 2 * p;

    auto make_string = [&](char a, char b) {
        PauliString s;
        s.push_back({first, a});
        for (int q = first + 1; q < last; ++q)
            s.push_back({q, 'z'});
        s.push_back({last, b});
        return s;
    };
    auto add = [&](char a, char b, double coeff, const char* tag) {
        if (coeff == 0.0)
            return;
        GateBlock block;
        block.label = std::string("hyb b") + std::to_string(bath) + (spin == 0 ? " dn " : " up ") + tag;
        block.gates = compile_pauli_exponent(make_string(a, b), -dt * coeff);
        blocks.push_back(std::move(block));
    };
    const double re = 0.5 * v.real();
    const double im = 0.5 * v.imag();
    add('x', 'x', re, "xx");
    add('y', 'y', re, "yy");
    add('y', 'x', im, "yx");
    add('x', 'y', -im, "xy");
    return blocks;
}

TrotterStepProgram compile_trotter_step(const SiamParams& params, int t_index, double dt) {
    TrotterStepProgram prog;
    prog.t_index = t_index;
    GateBlock inter = compile_interaction(params.u, dt);
    if (!inter.gates.empty())
        prog.blocks.push_back(std::move(inter));
    for (int b = 0; b < params.n_bath; ++b) {
        cplx v = params.hyb.bath_coupling(b, t_index);
        for (int spin = 0; spin < 2; ++spin) {
            auto blocks = compile_hybridization(b, spin, v, dt);
            for (auto& bl : blocks)
                prog.blocks.push_back(std::move(bl));
        }
    }
    return prog;
}

std::string dump_program(const TrotterStepProgram& program) {
    std::ostringstream out;
    out.precision(12);
    for (const auto& block : program.blocks) {
        for (const auto& g : block.gates) {
            switch (g.kind) {
            case GateKind::rotation:
                out << "rot " << g.axis << " q" << g.qubit << " " << g.angle << "\n";
                break;
            case GateKind::ms:
                out << "ms q" << g.ms_first << "..q" << g.ms_last
                    << " theta " << g.theta << " phi " << g.phi << "\n";
                break;
            case GateKind::hadamard:
                out << "h q" << g.qubit << "\n";
                break;
            case GateKind::controlled_pauli:
                out << "cpauli c" << g.control << "=" << g.control_value;
                for (const auto& t : g.targets)
                    out << " " << t.axis << t.qubit;
                out << "\n";
                break;
            }
        }
    }
    return out.str();
}

} // namespace qdmft

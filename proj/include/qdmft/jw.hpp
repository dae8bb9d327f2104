#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qdmft/time_grid.hpp"

namespace qdmft {

// Jordan-Wigner creation operators over n_modes fermionic modes. Basis index
// bit j holds the occupation of mode j, and the z-string runs over modes
// below j (empty modes carry +1). This matches the qubit encoding used by the
// statevector layer, with system qubit j+1 representing mode j.
inline std::vector<Eigen::MatrixXcd> jw_creation_ops(int n_modes) {
    const long dim = 1L << n_modes;
    std::vector<Eigen::MatrixXcd> ops;
    ops.reserve(n_modes);
    for (int j = 0; j < n_modes; ++j) {
        Eigen::MatrixXcd cdag = Eigen::MatrixXcd::Zero(dim, dim);
        const long bit = 1L << j;
        for (long s = 0; s < dim; ++s) {
            if (s & bit)
                continue;
            int parity = 0;
            for (int k = 0; k < j; ++k)
                parity ^= static_cast<int>((s >> k) & 1L);
            cdag(s | bit, s) = parity ? -1.0 : 1.0;
        }
        ops.push_back(std::move(cdag));
    }
    return ops;
}

} // namespace qdmft

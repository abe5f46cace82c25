#pragma once

#include "stabrad/interconnect.hpp"

#include <cstdint>
#include <string_view>

namespace stabrad {

enum class CouplingPattern { ring, line, dense };

CouplingPattern parse_coupling_pattern(std::string_view text);

/// Nearest-neighbour coupling in both directions (ring wraps around), or all
/// off-diagonal entries for `dense`. Entries are 1.
RealMatrix coupling_pattern(CouplingPattern pattern, std::size_t blocks);

/// N copies of a semi-discretized heat equation on n interior points:
/// A = (n+1)^2 tridiag(1, -2, 1), input on the first node, output at the last.
CompositeSystem heat_chain(std::size_t interior_points, std::size_t blocks, CouplingPattern pattern);

struct RandomStableSpec {
    std::size_t blocks = 2;
    std::size_t states = 3;
    std::size_t inputs = 1;
    std::size_t outputs = 1;
    double margin = 0.5;  ///< spectral abscissa of every A is -margin
    std::uint64_t seed = 0;
};

/// A = M - (abscissa(M) + margin) I for Gaussian M; Gaussian B, C; E uniform on [0, 1).
CompositeSystem random_stable(const RandomStableSpec& spec);

}  // namespace stabrad

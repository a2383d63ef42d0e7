#pragma once

#include "ebmod/core.hpp"

namespace ebmod {

// Deterministic direction set on the unit sphere: low-discrepancy base
// (signs in 1-D, equal angles in 2-D, Fibonacci sphere in 3-D, seeded
// Gaussian otherwise) plus a few seed-driven extras.
std::vector<Vector> unit_directions(std::size_t dim, std::size_t k,
                                    unsigned seed);

// Shell schedule r0 * beta^j, j = 0..m-1.
struct ShellConfig {
    double r0 = 1e-2;
    double beta = 0.3;
    std::size_t m = 10;

    std::vector<double> radii() const;
};

}  // namespace ebmod

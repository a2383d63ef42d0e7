#include "ebmod/sampling.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace ebmod {

std::vector<Vector> unit_directions(std::size_t dim, std::size_t k,
                                    unsigned seed) {
    if (dim == 0 || k == 0) throw InputError("unit_directions: bad arguments");
    std::vector<Vector> dirs;
    if (dim == 1) {
        dirs.push_back({1.0});
        dirs.push_back({-1.0});
    } else if (dim == 2) {
        dirs.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            const double th = 2.0 * std::numbers::pi * double(i) / double(k);
            dirs.push_back({std::cos(th), std::sin(th)});
        }
    } else if (dim == 3) {
        // Fibonacci sphere
        const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (std::size_t i = 0; i < k; ++i) {
            const double z = 1.0 - 2.0 * (double(i) + 0.5) / double(k);
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double th = ga * double(i);
            dirs.push_back({r * std::cos(th), r * std::sin(th), z});
        }
    } else {
        std::mt19937 rng(seed ^ 0x9e3779b9u);
        std::normal_distribution<double> g(0.0, 1.0);
        while (dirs.size() < k) {
            Vector v(dim);
            for (auto& c : v) c = g(rng);
            const double nv = norm(v);
            if (nv > 1e-12) dirs.push_back(scale(v, 1.0 / nv));
        }
    }
    // seed-driven extras
    if (dim >= 2) {
        std::mt19937 rng(seed);
        std::normal_distribution<double> g(0.0, 1.0);
        const std::size_t extra = (k + 15) / 16;
        for (std::size_t i = 0; i < extra; ++i) {
            Vector v(dim);
            for (auto& c : v) c = g(rng);
            const double nv = norm(v);
            if (nv > 1e-12) dirs.push_back(scale(v, 1.0 / nv));
        }
    }
    return dirs;
}

std::vector<double> ShellConfig::radii() const {
    if (r0 <= 0 || beta <= 0 || beta >= 1 || m == 0)
        throw InputError("ShellConfig: need r0 > 0, 0 < beta < 1, m >= 1");
    std::vector<double> rs(m);
    double r = r0;
    for (std::size_t j = 0; j < m; ++j, r *= beta) rs[j] = r;
    return rs;
}

}  // namespace ebmod

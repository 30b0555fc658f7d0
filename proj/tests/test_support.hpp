#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "burgers_rg/errors.hpp"
#include "burgers_rg/profiles.hpp"
#include "burgers_rg/spectral.hpp"

namespace burgers_rg::testing {

inline double sup_diff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.samples().size(); ++j)
        m = std::max(m, std::abs(a.samples()[j] - b.samples()[j]));
    return m;
}

inline SpectralField profile(ProfileTag tag, double width = 1.0, int order = 3, const GridSpec& grid = GridSpec(40.0, 2048)) {
    ProfileId id{tag};
    id.width = width;
    id.order = order;
    return make_profile(id, grid);
}

/// Kind of the Error thrown by fn, or nullopt if it returns normally.
template <class Fn>
std::optional<ErrorKind> kind_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

/// Smooth random field: a sum of shifted Gaussians with random weights.
inline SpectralField random_field(const GridSpec& grid, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> weight(-1.0, 1.0), center(-4.0, 4.0), width(0.6, 1.6);
    std::vector<double> s(grid.size(), 0.0);
    for (int k = 0; k < 4; ++k) {
        const double w = weight(rng), c = center(rng), h = width(rng);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double y = (grid.x(j) - c) / h;
            s[j] += w * std::exp(-y * y);
        }
    }
    return forward_transform(s, grid);
}

} // namespace burgers_rg::testing

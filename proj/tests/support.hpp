#pragma once

#include <Eigen/Dense>

#include "oracle.hpp"
#include "quatspec/linearize.hpp"

inline oracle::Real4 to_real4(const quatspec::RealMat4& m) {
    oracle::Real4 out{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out[r][c] = m(r, c);
    return out;
}

inline double rel_err(double got, double want) { return std::fabs(got - want) / std::max(1.0, std::fabs(want)); }

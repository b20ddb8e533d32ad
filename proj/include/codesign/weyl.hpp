#pragma once

#include "codesign/gates.hpp"

namespace codesign {

// u = phase * (a1 (x) b1) * canonical_gate(coords) * (a0 (x) b0)
struct KakDecomposition {
    cplx phase{1.0, 0.0};
    Unitary2 a1 = Unitary2::identity();
    Unitary2 b1 = Unitary2::identity();
    WeylCoordinates coords;
    Unitary2 a0 = Unitary2::identity();
    Unitary2 b0 = Unitary2::identity();

    Mat4 reconstruct() const;
};

KakDecomposition kak_decompose(const Unitary4& u);

// Split a (numerically) local 4x4 into a (x) b. Throws NumericalInstability if not local.
std::pair<Mat2, Mat2> split_local(const Mat4& k, double tol = 1e-7);

} // namespace codesign

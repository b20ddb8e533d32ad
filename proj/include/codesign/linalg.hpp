#pragma once

#include <complex>

#include <Eigen/Dense>

#include "codesign/errors.hpp"

namespace codesign {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix<cplx, 2, 2>;
using Mat4 = Eigen::Matrix<cplx, 4, 4>;
using MatX = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kUnitaryTol = 1e-10;

Mat4 kron(const Mat2& a, const Mat2& b);

template <class M>
double unitarity_error(const M& m) {
    return (m.adjoint() * m - M::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

// Unitary2 / Unitary4 can only be built through a unitarity check or as the
// product of two values that were already checked.
template <int N>
class Unitary {
public:
    using Matrix = Eigen::Matrix<cplx, N, N>;

    static Unitary checked(const Matrix& m, double tol = kUnitaryTol) {
        if (!m.allFinite() || unitarity_error(m) > tol)
            throw Error(ErrorCode::NotUnitary, "matrix deviates from unitarity");
        return Unitary(m);
    }
    static Unitary identity() { return Unitary(Matrix::Identity()); }

    const Matrix& matrix() const { return m_; }
    cplx operator()(int r, int c) const { return m_(r, c); }
    Unitary adjoint() const { return Unitary(m_.adjoint()); }

    // this * rhs; both factors are unitary so the product is, up to rounding.
    Unitary operator*(const Unitary& rhs) const { return Unitary(m_ * rhs.m_); }

private:
    explicit Unitary(const Matrix& m) : m_(m) {}
    template <int> friend class Unitary;
    friend Unitary<4> kron(const Unitary<2>&, const Unitary<2>&);
    Matrix m_;
};

using Unitary2 = Unitary<2>;
using Unitary4 = Unitary<4>;

Unitary4 kron(const Unitary2& a, const Unitary2& b);

// |Tr(U^dag V)|^2 / d^2
double hs_fidelity(const Mat4& u, const Mat4& v);
inline double hs_fidelity(const Unitary4& u, const Unitary4& v) { return hs_fidelity(u.matrix(), v.matrix()); }

// True when u = e^{i phi} v within tol (max-abs entrywise after phase alignment).
bool equal_up_to_phase(const MatX& u, const MatX& v, double tol);

// Pauli and helper 1Q matrices.
Mat2 pauli_i();
Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();
Mat2 rz(double theta);
Mat2 ry(double theta);
Mat2 rx(double theta);
Mat2 zyz(double a, double b, double c); // Rz(a) Ry(b) Rz(c)
// Angles with m = e^{i g} Rz(a) Ry(b) Rz(c); returns {a, b, c}.
Eigen::Vector3d zyz_angles(const Mat2& m);

} // namespace codesign

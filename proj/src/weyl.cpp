#include "codesign/weyl.hpp"

#include <algorithm>
#include <cmath>

namespace codesign {

namespace {

constexpr cplx I1{0.0, 1.0};
constexpr double kChamberTol = 1e-9;

const Mat4& magic() {
    static const Mat4 b = [] {
        Mat4 m;
        const double r = 1.0 / std::sqrt(2.0);
        m << 1, I1, 0, 0,
             0, 0, I1, 1,
             0, 0, I1, -1,
             1, -I1, 0, 0;
        return Mat4(m * r);
    }();
    return b;
}

struct Signs {
    Eigen::Vector4d d[3]; // diagonals of B^dag (PP) B for P = X, Y, Z
};

const Signs& pauli_signs() {
    static const Signs s = [] {
        Signs out;
        const Mat2 p[3] = {pauli_x(), pauli_y(), pauli_z()};
        for (int j = 0; j < 3; ++j) {
            Mat4 m = magic().adjoint() * kron(p[j], p[j]) * magic();
            for (int k = 0; k < 4; ++k)
                out.d[j](k) = m(k, k).real();
        }
        return out;
    }();
    return s;
}

Mat4 sigma_pair(int j) {
    const Mat2 p[3] = {pauli_x(), pauli_y(), pauli_z()};
    return kron(p[j], p[j]);
}

// Tracks u ~ kl * Ud(c) * kr while c is moved into the chamber.
struct Canon {
    double c[3];
    Mat4 left = Mat4::Identity();
    Mat4 right = Mat4::Identity();

    // Ud(c) = Ud(c + k pi/2 e_j) * (-i sigma_j sigma_j)^k
    void shift(int j, int k) {
        c[j] += k * (kPi / 2);
        if (k % 2 != 0)
            right = sigma_pair(j) * right;
    }
    // Ud(c) = V^dag Ud(c') V, with c' = c with entries p,q exchanged.
    void swap(int p, int q) {
        Mat2 v;
        const double r = 1.0 / std::sqrt(2.0);
        if (p + q == 1)
            v << 1, 0, 0, I1;                  // S: X -> Y, Y -> -X
        else if (p + q == 2)
            v << r, r, r, -r;                  // H: X <-> Z
        else
            v = rx(kPi / 2);                   // Y -> Z, Z -> -Y
        Mat4 vv = kron(v, v);
        left = left * vv.adjoint();
        right = vv * right;
        std::swap(c[p], c[q]);
    }
    // Conjugating by one Pauli on the first qubit flips the two anticommuting terms.
    void negate(int p, int q) {
        Mat2 s;
        if (p + q == 1)
            s = pauli_z();
        else if (p + q == 3)
            s = pauli_x();
        else
            s = pauli_y();
        Mat4 k = kron(s, Mat2::Identity());
        left = left * k;
        right = k * right;
        c[p] = -c[p];
        c[q] = -c[q];
    }

    void run() {
        for (int j = 0; j < 3; ++j) {
            int k = static_cast<int>(std::floor(c[j] / (kPi / 2) + 0.5));
            if (k != 0)
                shift(j, -k);
        }
        if (std::abs(c[0]) < std::abs(c[1]))
            swap(0, 1);
        if (std::abs(c[1]) < std::abs(c[2]))
            swap(1, 2);
        if (std::abs(c[0]) < std::abs(c[1]))
            swap(0, 1);
        if (c[0] < 0 && c[1] < 0)
            negate(0, 1);
        else if (c[0] < 0)
            negate(0, 2);
        else if (c[1] < 0)
            negate(1, 2);
        if (std::abs(c[0] - kPi / 4) <= kChamberTol && c[2] < 0) {
            shift(0, -1);
            negate(0, 2);
        }
    }
};

struct RawKak {
    Mat4 k1, k2; // local, u ~ k1 Ud(c) k2
    double c[3];
};

RawKak raw_kak(const Mat4& u_in) {
    const Mat4& b = magic();
    cplx det = u_in.determinant();
    Mat4 u = u_in * std::pow(det, -0.25);
    Mat4 up = b.adjoint() * u * b;
    Mat4 m2 = up.transpose() * up;

    // M2 is complex symmetric unitary; its real and imaginary parts commute
    // and share a real orthogonal eigenbasis. A random real combination
    // separates degenerate pairs with probability one.
    Eigen::Matrix4d re = m2.real(), im = m2.imag();
    Rng rng(0x4b414bULL);
    Eigen::Matrix4d best_p;
    double best_res = 1e300;
    for (int attempt = 0; attempt < 100; ++attempt) {
        double x = attempt == 0 ? 1.0 : rng.normal();
        double y = attempt == 0 ? 0.5718 : rng.normal();
        Eigen::Matrix4d comb = x * re + y * im;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(comb);
        Eigen::Matrix4d p = es.eigenvectors();
        Mat4 d = p.transpose().cast<cplx>() * m2 * p.cast<cplx>();
        double res = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j)
                    res = std::max(res, std::abs(d(i, j)));
        if (res < best_res) {
            best_res = res;
            best_p = p;
        }
        if (best_res < 1e-13)
            break;
    }
    if (!(best_res <= 1e-8))
        throw Error(ErrorCode::NumericalInstability, "failed to diagonalize KAK matrix");
    Eigen::Matrix4d p = best_p;
    if (p.determinant() < 0)
        p.col(3) *= -1;

    Mat4 d = p.transpose().cast<cplx>() * m2 * p.cast<cplx>();
    Eigen::Vector4d lam;
    for (int k = 0; k < 4; ++k)
        lam(k) = std::arg(d(k, k)) / 2.0;

    Mat4 qc = up * p.cast<cplx>();
    for (int k = 0; k < 4; ++k)
        qc.col(k) *= std::exp(-I1 * lam(k));
    Eigen::Matrix4d qr = qc.real();
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(qr, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix4d q = svd.matrixU() * svd.matrixV().transpose();
    if (q.determinant() < 0) {
        q.col(0) *= -1;
        lam(0) += kPi;
    }

    const Signs& s = pauli_signs();
    RawKak out;
    for (int j = 0; j < 3; ++j)
        out.c[j] = s.d[j].dot(lam) / 4.0;
    out.k1 = b * q.cast<cplx>() * b.adjoint();
    out.k2 = b * p.transpose().cast<cplx>() * b.adjoint();
    return out;
}

Mat2 nearest_unitary(const Mat2& m) {
    Eigen::JacobiSVD<Mat2> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

} // namespace

std::pair<Mat2, Mat2> split_local(const Mat4& k, double tol) {
    // Blocks of a (x) b are a_ij * b; use the best-conditioned one to get b.
    int bi = 0, bj = 0;
    double bestdet = -1;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double dd = std::abs(Mat2(k.block<2, 2>(2 * i, 2 * j)).determinant());
            if (dd > bestdet) {
                bestdet = dd;
                bi = i;
                bj = j;
            }
        }
    Mat2 blk = k.block<2, 2>(2 * bi, 2 * bj);
    Mat2 b = blk / std::sqrt(blk.determinant());
    b = nearest_unitary(b);
    Mat4 ka = k * kron(Mat2::Identity(), b.adjoint());
    Mat2 a;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            a(i, j) = ka(2 * i, 2 * j);
    a = nearest_unitary(a);
    if (!equal_up_to_phase(kron(a, b), k, tol))
        throw Error(ErrorCode::NumericalInstability, "matrix is not a local product");
    return {a, b};
}

Mat4 KakDecomposition::reconstruct() const {
    return phase * kron(a1.matrix(), b1.matrix()) * canonical_gate(coords) * kron(a0.matrix(), b0.matrix());
}

KakDecomposition kak_decompose(const Unitary4& u) {
    RawKak raw = raw_kak(u.matrix());
    Canon cn;
    std::copy(raw.c, raw.c + 3, cn.c);
    cn.run();
    Mat4 k1 = raw.k1 * cn.left;
    Mat4 k2 = cn.right * raw.k2;
    auto [a1, b1] = split_local(k1);
    auto [a0, b0] = split_local(k2);

    KakDecomposition out;
    out.coords = {cn.c[0] + 0.0, cn.c[1] + 0.0, cn.c[2] + 0.0};
    out.a1 = Unitary2::checked(a1, 1e-9);
    out.b1 = Unitary2::checked(b1, 1e-9);
    out.a0 = Unitary2::checked(a0, 1e-9);
    out.b0 = Unitary2::checked(b0, 1e-9);
    out.phase = 1.0;
    Mat4 rec = out.reconstruct();
    cplx t = (rec.adjoint() * u.matrix()).trace() / 4.0;
    out.phase = t / std::abs(t);
    if (!equal_up_to_phase(out.reconstruct(), u.matrix(), 1e-7))
        throw Error(ErrorCode::NumericalInstability, "KAK reconstruction failed");
    return out;
}

WeylCoordinates weyl_coordinates(const Unitary4& u) {
    RawKak raw = raw_kak(u.matrix());
    Canon cn;
    std::copy(raw.c, raw.c + 3, cn.c);
    cn.run();
    return {cn.c[0] + 0.0, cn.c[1] + 0.0, cn.c[2] + 0.0};
}

} // namespace codesign

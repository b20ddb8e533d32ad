#include "codesign/gates.hpp"

#include <cmath>

#include <fmt/format.h>

namespace codesign {

namespace {
constexpr cplx I1{0.0, 1.0};
}

// ---- linalg helpers ----

Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return r;
}

Unitary4 kron(const Unitary2& a, const Unitary2& b) {
    return Unitary4(kron(a.matrix(), b.matrix()));
}

double hs_fidelity(const Mat4& u, const Mat4& v) {
    cplx t = (u.adjoint() * v).trace();
    return std::norm(t) / 16.0;
}

bool equal_up_to_phase(const MatX& u, const MatX& v, double tol) {
    if (u.rows() != v.rows() || u.cols() != v.cols())
        return false;
    cplx t = (v.adjoint() * u).trace();
    if (std::abs(t) < 1e-12)
        return false;
    cplx ph = t / std::abs(t);
    return (u - ph * v).cwiseAbs().maxCoeff() <= tol;
}

Mat2 pauli_i() { return Mat2::Identity(); }
Mat2 pauli_x() { Mat2 m; m << 0, 1, 1, 0; return m; }
Mat2 pauli_y() { Mat2 m; m << 0, -I1, I1, 0; return m; }
Mat2 pauli_z() { Mat2 m; m << 1, 0, 0, -1; return m; }

Mat2 rz(double t) {
    Mat2 m;
    m << std::exp(-I1 * (t / 2)), 0, 0, std::exp(I1 * (t / 2));
    return m;
}

Mat2 ry(double t) {
    double c = std::cos(t / 2), s = std::sin(t / 2);
    Mat2 m;
    m << c, -s, s, c;
    return m;
}

Mat2 rx(double t) {
    double c = std::cos(t / 2), s = std::sin(t / 2);
    Mat2 m;
    m << c, -I1 * s, -I1 * s, c;
    return m;
}

Mat2 zyz(double a, double b, double c) { return rz(a) * ry(b) * rz(c); }

Eigen::Vector3d zyz_angles(const Mat2& m) {
    // Normalize to SU(2): [[e^{-i(a+c)/2} cos, -e^{-i(a-c)/2} sin], [e^{i(a-c)/2} sin, e^{i(a+c)/2} cos]]
    cplx det = m.determinant();
    Mat2 s = m / std::sqrt(det);
    double b = 2.0 * std::atan2(std::abs(s(1, 0)), std::abs(s(0, 0)));
    double sum = 2.0 * std::arg(s(1, 1));  // a + c
    double diff = 2.0 * std::arg(s(1, 0)); // a - c
    if (std::abs(s(1, 0)) < 1e-12)
        diff = 0.0;
    if (std::abs(s(0, 0)) < 1e-12)
        sum = 0.0;
    return {(sum + diff) / 2, b, (sum - diff) / 2};
}

// ---- GateKind ----

GateKind GateKind::nth_root_iswap(int n) {
    if (n < 1)
        throw Error(ErrorCode::InvalidArgument, "root must be >= 1");
    GateKind g(GateTag::NthRootIswap);
    g.root_ = n;
    return g;
}

GateKind GateKind::fsim(double theta, double phi) {
    GateKind g(GateTag::FSIM);
    g.params_ = {theta, phi, 0};
    return g;
}

GateKind GateKind::zx(double theta) {
    GateKind g(GateTag::ZX);
    g.params_[0] = theta;
    return g;
}

GateKind GateKind::cp(double lambda) {
    GateKind g(GateTag::CP);
    g.params_[0] = lambda;
    return g;
}

GateKind GateKind::rzz(double theta) {
    GateKind g(GateTag::RZZ);
    g.params_[0] = theta;
    return g;
}

GateKind GateKind::unitary(const Unitary4& u) {
    GateKind g(GateTag::Unitary2Q);
    g.m4_ = std::make_shared<const Mat4>(u.matrix());
    return g;
}

GateKind GateKind::unitary(const Unitary2& u) {
    GateKind g(GateTag::Unitary1Q);
    g.m2_ = std::make_shared<const Mat2>(u.matrix());
    return g;
}

GateKind GateKind::single(GateTag tag) {
    switch (tag) {
    case GateTag::I: case GateTag::H: case GateTag::X: case GateTag::Y: case GateTag::Z:
    case GateTag::S: case GateTag::SDG: case GateTag::T: case GateTag::TDG: case GateTag::SX:
        return GateKind(tag);
    default:
        throw Error(ErrorCode::InvalidArgument, "not a parameterless one-qubit gate");
    }
}

GateKind GateKind::rotation(GateTag tag, double theta) {
    if (tag != GateTag::RX && tag != GateTag::RY && tag != GateTag::RZ)
        throw Error(ErrorCode::InvalidArgument, "not a rotation gate");
    GateKind g(tag);
    g.params_[0] = theta;
    return g;
}

GateKind GateKind::u3(double theta, double phi, double lambda) {
    GateKind g(GateTag::U3);
    g.params_ = {theta, phi, lambda};
    return g;
}

bool is_two_qubit(GateTag tag) {
    return static_cast<int>(tag) <= static_cast<int>(GateTag::Unitary2Q);
}

int GateKind::arity() const { return is_two_qubit(tag_) ? 2 : 1; }

int GateKind::num_params() const {
    switch (tag_) {
    case GateTag::FSIM: return 2;
    case GateTag::ZX: case GateTag::CP: case GateTag::RZZ:
    case GateTag::RX: case GateTag::RY: case GateTag::RZ: return 1;
    case GateTag::U3: return 3;
    default: return 0;
    }
}

const char* GateKind::mnemonic() const {
    switch (tag_) {
    case GateTag::CNOT: return "CNOT";
    case GateTag::CZ: return "CZ";
    case GateTag::SWAP: return "SWAP";
    case GateTag::ISWAP: return "ISWAP";
    case GateTag::NthRootIswap: return "NTH_ROOT_ISWAP";
    case GateTag::FSIM: return "FSIM";
    case GateTag::SYC: return "SYC";
    case GateTag::ZX: return "ZX";
    case GateTag::CP: return "CP";
    case GateTag::RZZ: return "RZZ";
    case GateTag::Unitary2Q: return "UNITARY";
    case GateTag::I: return "I";
    case GateTag::H: return "H";
    case GateTag::X: return "X";
    case GateTag::Y: return "Y";
    case GateTag::Z: return "Z";
    case GateTag::S: return "S";
    case GateTag::SDG: return "SDG";
    case GateTag::T: return "T";
    case GateTag::TDG: return "TDG";
    case GateTag::SX: return "SX";
    case GateTag::RX: return "RX";
    case GateTag::RY: return "RY";
    case GateTag::RZ: return "RZ";
    case GateTag::U3: return "U3";
    case GateTag::Unitary1Q: return "UNITARY1";
    }
    return "?";
}

std::string GateKind::label() const {
    if (tag_ == GateTag::NthRootIswap)
        return fmt::format("NTH_ROOT_ISWAP({})", root_);
    int np = num_params();
    if (np == 0)
        return mnemonic();
    std::string s = mnemonic();
    s += '(';
    for (int i = 0; i < np; ++i) {
        if (i)
            s += ',';
        s += fmt::format("{:.17g}", params_[static_cast<std::size_t>(i)]);
    }
    s += ')';
    return s;
}

bool GateKind::operator==(const GateKind& o) const {
    if (tag_ != o.tag_ || root_ != o.root_ || params_ != o.params_)
        return false;
    if (m4_ || o.m4_)
        return m4_ && o.m4_ && (*m4_ == *o.m4_);
    if (m2_ || o.m2_)
        return m2_ && o.m2_ && (*m2_ == *o.m2_);
    return true;
}

// ---- matrices ----

namespace {

Mat4 fsim_matrix(double theta, double phi) {
    Mat4 m = Mat4::Zero();
    m(0, 0) = 1;
    m(1, 1) = std::cos(theta);
    m(1, 2) = -I1 * std::sin(theta);
    m(2, 1) = -I1 * std::sin(theta);
    m(2, 2) = std::cos(theta);
    m(3, 3) = std::exp(-I1 * phi);
    return m;
}

Mat4 raw_matrix_2q(const GateKind& g) {
    Mat4 m = Mat4::Zero();
    switch (g.tag()) {
    case GateTag::CNOT:
        m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
        return m;
    case GateTag::CZ:
        m(0, 0) = m(1, 1) = m(2, 2) = 1;
        m(3, 3) = -1;
        return m;
    case GateTag::SWAP:
        m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
        return m;
    case GateTag::ISWAP:
        m(0, 0) = m(3, 3) = 1;
        m(1, 2) = m(2, 1) = I1;
        return m;
    case GateTag::NthRootIswap: {
        double a = kPi / (2.0 * g.root());
        m(0, 0) = m(3, 3) = 1;
        m(1, 1) = m(2, 2) = std::cos(a);
        m(1, 2) = m(2, 1) = I1 * std::sin(a);
        return m;
    }
    case GateTag::FSIM:
        return fsim_matrix(g.param(0), g.param(1));
    case GateTag::SYC:
        return fsim_matrix(kPi / 2, kPi / 6);
    case GateTag::ZX: {
        double c = std::cos(g.param(0) / 2), s = std::sin(g.param(0) / 2);
        m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = c;
        m(0, 2) = m(2, 0) = -I1 * s;
        m(1, 3) = m(3, 1) = I1 * s;
        return m;
    }
    case GateTag::CP:
        m(0, 0) = m(1, 1) = m(2, 2) = 1;
        m(3, 3) = std::exp(I1 * g.param(0));
        return m;
    case GateTag::RZZ: {
        cplx a = std::exp(-I1 * (g.param(0) / 2)), b = std::exp(I1 * (g.param(0) / 2));
        m(0, 0) = a;
        m(1, 1) = b;
        m(2, 2) = b;
        m(3, 3) = a;
        return m;
    }
    case GateTag::Unitary2Q:
        return *g.matrix4_payload();
    default:
        throw Error(ErrorCode::InvalidArgument, std::string("not a two-qubit gate: ") + g.mnemonic());
    }
}

Mat2 raw_matrix_1q(const GateKind& g) {
    Mat2 m;
    const double r = 1.0 / std::sqrt(2.0);
    switch (g.tag()) {
    case GateTag::I: return Mat2::Identity();
    case GateTag::H: m << r, r, r, -r; return m;
    case GateTag::X: return pauli_x();
    case GateTag::Y: return pauli_y();
    case GateTag::Z: return pauli_z();
    case GateTag::S: m << 1, 0, 0, I1; return m;
    case GateTag::SDG: m << 1, 0, 0, -I1; return m;
    case GateTag::T: m << 1, 0, 0, std::exp(I1 * (kPi / 4)); return m;
    case GateTag::TDG: m << 1, 0, 0, std::exp(-I1 * (kPi / 4)); return m;
    case GateTag::SX: m << cplx(0.5, 0.5), cplx(0.5, -0.5), cplx(0.5, -0.5), cplx(0.5, 0.5); return m;
    case GateTag::RX: return rx(g.param(0));
    case GateTag::RY: return ry(g.param(0));
    case GateTag::RZ: return rz(g.param(0));
    case GateTag::U3: {
        double t = g.param(0), p = g.param(1), l = g.param(2);
        m << std::cos(t / 2), -std::exp(I1 * l) * std::sin(t / 2),
            std::exp(I1 * p) * std::sin(t / 2), std::exp(I1 * (p + l)) * std::cos(t / 2);
        return m;
    }
    case GateTag::Unitary1Q: return *g.matrix2_payload();
    default:
        throw Error(ErrorCode::InvalidArgument, std::string("not a one-qubit gate: ") + g.mnemonic());
    }
}

} // namespace

Unitary4 gate_matrix_2q(const GateKind& g) { return Unitary4::checked(raw_matrix_2q(g)); }
Unitary2 gate_matrix_1q(const GateKind& g) { return Unitary2::checked(raw_matrix_1q(g)); }

std::variant<Unitary2, Unitary4> gate_matrix(const GateKind& g) {
    if (g.arity() == 2)
        return gate_matrix_2q(g);
    return gate_matrix_1q(g);
}

Unitary4 compose(const Unitary4& a, const Unitary4& b) { return a * b; }
Unitary4 kron_gates(const Unitary2& a, const Unitary2& b) { return kron(a, b); }
double hilbert_schmidt_fidelity(const Unitary4& u, const Unitary4& v) { return hs_fidelity(u, v); }

Mat4 canonical_gate(double x, double y, double z) {
    // XX, YY, ZZ commute: exp(i t P) = cos t + i sin t P for each.
    Mat4 xx = kron(pauli_x(), pauli_x());
    Mat4 yy = kron(pauli_y(), pauli_y());
    Mat4 zz = kron(pauli_z(), pauli_z());
    Mat4 id = Mat4::Identity();
    Mat4 ex = std::cos(x) * id + I1 * std::sin(x) * xx;
    Mat4 ey = std::cos(y) * id + I1 * std::sin(y) * yy;
    Mat4 ez = std::cos(z) * id + I1 * std::sin(z) * zz;
    return ex * ey * ez;
}

bool in_weyl_chamber(const WeylCoordinates& c, double tol) {
    if (c.x > kPi / 4 + tol || c.x < c.y - tol || c.y < std::abs(c.z) - tol)
        return false;
    if (std::abs(c.x - kPi / 4) <= tol && c.z < -tol)
        return false;
    return true;
}

double coordinate_distance(const WeylCoordinates& a, const WeylCoordinates& b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

Unitary4 haar_random_2q(Rng& rng) {
    Mat4 g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double re = rng.normal();
            double im = rng.normal();
            g(i, j) = cplx(re, im);
        }
    Eigen::HouseholderQR<Mat4> qr(g);
    Mat4 q = qr.householderQ();
    Mat4 r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < 4; ++k) {
        cplx d = r(k, k);
        q.col(k) *= d / std::abs(d);
    }
    return Unitary4::checked(q);
}

Unitary2 haar_random_1q(Rng& rng) {
    Mat2 g;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double re = rng.normal();
            double im = rng.normal();
            g(i, j) = cplx(re, im);
        }
    Eigen::HouseholderQR<Mat2> qr(g);
    Mat2 q = qr.householderQ();
    Mat2 r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < 2; ++k)
        q.col(k) *= r(k, k) / std::abs(r(k, k));
    return Unitary2::checked(q);
}

double gate_fidelity(double f_iswap, int n) {
    if (n < 1)
        throw Error(ErrorCode::InvalidArgument, "root must be >= 1");
    return 1.0 - (1.0 - f_iswap) / n;
}

} // namespace codesign

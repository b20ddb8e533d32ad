#pragma once

#include <array>
#include <memory>
#include <string>
#include <variant>

#include "codesign/linalg.hpp"
#include "codesign/rng.hpp"

namespace codesign {

enum class GateTag {
    // two-qubit
    CNOT,
    CZ,
    SWAP,
    ISWAP,
    NthRootIswap,
    FSIM,
    SYC,
    ZX,
    CP,
    RZZ,
    Unitary2Q,
    // one-qubit
    I,
    H,
    X,
    Y,
    Z,
    S,
    SDG,
    T,
    TDG,
    SX,
    RX,
    RY,
    RZ,
    U3,
    Unitary1Q,
};

class GateKind {
public:
    GateKind() : tag_(GateTag::I) {} // identity
    static GateKind cnot() { return GateKind(GateTag::CNOT); }
    static GateKind cz() { return GateKind(GateTag::CZ); }
    static GateKind swap() { return GateKind(GateTag::SWAP); }
    static GateKind iswap() { return GateKind(GateTag::ISWAP); }
    static GateKind nth_root_iswap(int n);
    static GateKind sqrt_iswap() { return nth_root_iswap(2); }
    static GateKind fsim(double theta, double phi);
    static GateKind syc() { return GateKind(GateTag::SYC); }
    static GateKind zx(double theta);
    static GateKind cp(double lambda);
    static GateKind rzz(double theta);
    static GateKind unitary(const Unitary4& u);

    static GateKind single(GateTag tag);               // parameterless 1Q gates
    static GateKind rotation(GateTag tag, double theta); // RX / RY / RZ
    static GateKind u3(double theta, double phi, double lambda);
    static GateKind unitary(const Unitary2& u);

    GateTag tag() const { return tag_; }
    int arity() const;
    int root() const { return root_; }
    double param(int i) const { return params_[static_cast<std::size_t>(i)]; }
    int num_params() const;
    const Mat4* matrix4_payload() const { return m4_.get(); }
    const Mat2* matrix2_payload() const { return m2_.get(); }

    // Mnemonic without parameters, e.g. "NTH_ROOT_ISWAP".
    const char* mnemonic() const;
    // Mnemonic plus parameters, e.g. "NTH_ROOT_ISWAP(3)" or "RZ(0.5)".
    std::string label() const;

    bool operator==(const GateKind& o) const;

private:
    explicit GateKind(GateTag t) : tag_(t) {}
    GateTag tag_;
    int root_ = 0;
    std::array<double, 3> params_{};
    std::shared_ptr<const Mat4> m4_;
    std::shared_ptr<const Mat2> m2_;
};

bool is_two_qubit(GateTag tag);

// Big-endian: qubit 0 of the gate is the most significant bit of the index.
Unitary4 gate_matrix_2q(const GateKind& g);
Unitary2 gate_matrix_1q(const GateKind& g);
std::variant<Unitary2, Unitary4> gate_matrix(const GateKind& g);

Unitary4 compose(const Unitary4& a, const Unitary4& b); // a * b
Unitary4 kron_gates(const Unitary2& a, const Unitary2& b);
double hilbert_schmidt_fidelity(const Unitary4& u, const Unitary4& v);

// exp(i (x XX + y YY + z ZZ))
struct WeylCoordinates {
    double x = 0, y = 0, z = 0;
};
Mat4 canonical_gate(double x, double y, double z);
inline Mat4 canonical_gate(const WeylCoordinates& c) { return canonical_gate(c.x, c.y, c.z); }

// Canonical chamber representative: pi/4 >= x >= y >= |z|, and z >= 0 when x = pi/4.
WeylCoordinates weyl_coordinates(const Unitary4& u);
bool in_weyl_chamber(const WeylCoordinates& c, double tol = 1e-9);
double coordinate_distance(const WeylCoordinates& a, const WeylCoordinates& b);

Unitary4 haar_random_2q(Rng& rng);
Unitary2 haar_random_1q(Rng& rng);

// Modeled fidelity of one n-th root iSWAP given the full iSWAP fidelity.
double gate_fidelity(double f_iswap, int n);

} // namespace codesign

#pragma once

#include <map>
#include <string>
#include <vector>

#include "codesign/gates.hpp"

namespace codesign {

enum class Origin { Algorithm, RoutingSwap, BasisTranslation };

const char* origin_name(Origin o);

struct Instruction {
    GateKind gate;
    std::vector<int> qubits;
    Origin origin = Origin::Algorithm;
};

class Circuit {
public:
    explicit Circuit(int width = 0);

    int width() const { return width_; }
    const std::vector<Instruction>& instructions() const { return ins_; }
    std::size_t size() const { return ins_.size(); }

    void add(const GateKind& g, std::vector<int> qubits, Origin origin = Origin::Algorithm);
    void add(const Instruction& in) { add(in.gate, in.qubits, in.origin); }

    // 1Q shorthands
    void h(int q) { add(GateKind::single(GateTag::H), {q}); }
    void x(int q) { add(GateKind::single(GateTag::X), {q}); }
    void t(int q) { add(GateKind::single(GateTag::T), {q}); }
    void tdg(int q) { add(GateKind::single(GateTag::TDG), {q}); }
    void rz(int q, double a) { add(GateKind::rotation(GateTag::RZ, a), {q}); }
    void rx(int q, double a) { add(GateKind::rotation(GateTag::RX, a), {q}); }
    void cx(int c, int t) { add(GateKind::cnot(), {c, t}); }

private:
    int width_;
    std::vector<Instruction> ins_;
};

// Edge u -> v iff v is the next instruction after u on one of u's qubits.
struct Dag {
    std::vector<std::vector<int>> preds;
    std::vector<std::vector<int>> succs;
};
Dag build_dag(const Circuit& c);

class DurationTable {
public:
    DurationTable() = default;

    double iswap = 1.0;
    double cnot = 1.0;
    double cz = 1.0;
    double syc = 1.0;
    double default_2q = 1.0;

    // 1Q gates are 0; NTH_ROOT_ISWAP(n) = iswap / n; ZX(theta) = max(theta, 0) / (pi/2).
    double duration(const GateKind& g) const;
};

enum class SwapCriticalMode {
    SwapWeighted,       // longest path counting only routing SWAPs
    OnTwoQubitCritical, // routing SWAPs on the (first) longest 2Q-count path
};

struct CircuitMetrics {
    int total_2q = 0;
    int critical_2q = 0;
    int total_swaps = 0;
    int critical_swaps = 0;
    double weighted_duration = 0.0; // duration-weighted critical path
    double total_duration = 0.0;    // sum of 2Q durations
};

CircuitMetrics metrics(const Circuit& c, const DurationTable& d = {},
                       SwapCriticalMode mode = SwapCriticalMode::SwapWeighted);

struct Block {
    bool two_qubit = false;
    int q0 = -1, q1 = -1;             // q0 is the most significant bit of matrix
    Mat4 matrix = Mat4::Identity();
    int num_2q = 0;                    // 2Q instructions merged in
    int num_routing_swaps = 0;
    Instruction remnant;               // valid when !two_qubit
};

// Maximal same-pair runs merged into 4x4 blocks; 1Q gates outside any open
// block are passed through as remnants. The sequence is semantically equal to c.
std::vector<Block> consolidate_2q_blocks(const Circuit& c);
Circuit blocks_to_circuit(int width, const std::vector<Block>& blocks);

// Text form: "qubits N" header, then "GATE[(p,...)] q0 [q1] [routing|basis]" lines.
std::string to_text(const Circuit& c);
Circuit from_text(const std::string& text);

// Dense simulation (big-endian: qubit 0 is the most significant bit).
void apply_instruction(Eigen::VectorXcd& state, int width, const Instruction& in);
Eigen::VectorXcd simulate(const Circuit& c, const Eigen::VectorXcd& initial);
MatX circuit_unitary(const Circuit& c); // width <= 12

} // namespace codesign

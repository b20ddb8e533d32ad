#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "codesign/benchmarks.hpp"
#include "codesign/circuit.hpp"
#include "codesign/decompose.hpp"
#include "codesign/topology.hpp"

namespace codesign {

// Logical -> physical, injective; unused physical qubits allowed.
struct Layout {
    std::vector<int> l2p;
    int num_physical = 0;

    std::vector<int> p2l() const; // -1 for unused physical qubits
    void validate(const CouplingGraph& g) const;
};

Layout dense_layout(const Circuit& c, const CouplingGraph& g);

struct RoutingOptions {
    int trials = 20;
    int lookahead_layers = 20;
    double decay = 0.5;
};

struct SwapLogEntry {
    std::size_t instruction; // index in RoutedCircuit::circuit
    int p0, p1;
};

struct RoutedCircuit {
    Circuit circuit{0}; // over physical qubits
    Layout initial_layout;
    Layout final_layout;
    std::vector<SwapLogEntry> swap_log;
};

RoutedCircuit stochastic_route(const Circuit& c, const CouplingGraph& g, const Layout& l, std::uint64_t seed,
                               const RoutingOptions& opt = {});

struct TranslateOptions {
    bool synthesize = true;  // false: count basis gates only, no local gates emitted
    bool peephole = false;   // cancel back-to-back identical routing SWAPs before translating
    SwapCriticalMode swap_mode = SwapCriticalMode::SwapWeighted;
    OptimizerConfig optimizer{};
};

struct TranslationResult {
    Circuit circuit{0};
    CircuitMetrics metrics;        // 2Q metrics of the translated circuit, SWAP metrics of the routed one
    double decomp_fidelity = 1.0;  // product over blocks
    double modeled_fidelity = 1.0; // decomp_fidelity times per-gate fidelity model
};

// Per-gate modeled fidelity: 1 - (1 - f_iswap) * duration(g) / duration(iSWAP).
double modeled_gate_fidelity(const GateKind& g, const DurationTable& d, double f_iswap);

TranslationResult basis_translate(const RoutedCircuit& rc, const GateKind& basis, const DurationTable& d,
                                  std::optional<FidelityModel> fidelity = std::nullopt,
                                  const TranslateOptions& opt = {}, BasisDecomposer* decomposer = nullptr);

// "cnot" / "cx", "sqiswap" / "sqrt_iswap", "iswap", "syc", "root:N" or "nth_root_iswap:N".
GateKind parse_basis(const std::string& s);
std::string basis_name(const GateKind& g);

struct PipelineOptions {
    RoutingOptions routing{};
    TranslateOptions translate{};
    double f_iswap = 0.99;
};

struct PipelineResult {
    CircuitMetrics metrics;
    double decomp_fidelity = 1.0;
    double modeled_fidelity = 1.0;
    int num_blocks = 0;
};

PipelineResult run_pipeline(const BenchmarkSpec& spec, const CouplingGraph& g, const GateKind& basis,
                            const DurationTable& d, std::uint64_t routing_seed, const PipelineOptions& opt = {});
// Same pipeline on an explicit circuit; optionally returns the translated physical circuit.
PipelineResult run_pipeline(const Circuit& c, const CouplingGraph& g, const GateKind& basis, const DurationTable& d,
                            std::uint64_t routing_seed, const PipelineOptions& opt = {}, Circuit* translated = nullptr);

// Permutation matrix sending logical basis states to physical ones (width == num_physical).
MatX layout_permutation(const Layout& l);

} // namespace codesign

#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "codesign/gates.hpp"
#include "codesign/weyl.hpp"

namespace codesign {

enum class GradientMode { Analytic, FiniteDifference };

struct OptimizerConfig {
    int restarts = 8;
    int max_iterations = 500;
    double convergence_tol = 1e-12; // objective 1 - fidelity
    std::uint64_t seed = 0;
    GradientMode gradient = GradientMode::Analytic;
    double gradient_step = 1e-7;    // central-difference step
    int max_restarts = 64;          // escalation budget for exact decompositions
};

struct LocalPair {
    Unitary2 a = Unitary2::identity(); // qubit 0
    Unitary2 b = Unitary2::identity(); // qubit 1
};

// Template L_k G ... G L_1 G L_0; locals[0] acts first.
struct DecompResult {
    GateKind basis = GateKind::cnot();
    int count = 0;
    std::vector<LocalPair> locals;
    double decomp_fidelity = 0.0;
    bool exact = false;

    Mat4 reconstruct() const;
};

inline constexpr double kExactFidelity = 1.0 - 1e-9;

int cnot_count(const WeylCoordinates& c, double tol = 1e-9);
int sqiswap_count(const WeylCoordinates& c, double tol = 1e-9);
inline int cnot_count(const Unitary4& u) { return cnot_count(weyl_coordinates(u)); }
inline int sqiswap_count(const Unitary4& u) { return sqiswap_count(weyl_coordinates(u)); }

DecompResult numeric_template_decompose(const Unitary4& u, const GateKind& basis, int k,
                                        const OptimizerConfig& cfg = {});

// Results for k = 0..k_max. For iSWAP-family bases each k >= 2 is also warm
// started from the k-2 optimum padded with G (Z(x)I) G = Z(x)I.
std::vector<DecompResult> template_sweep(const Unitary4& u, const GateKind& basis, int k_max,
                                         const OptimizerConfig& cfg = {});

DecompResult decompose_exact(const Unitary4& u, const GateKind& basis, const OptimizerConfig& cfg = {});
DecompResult decompose_syc(const Unitary4& u, const OptimizerConfig& cfg = {});

struct FidelityModel {
    double f_iswap = 1.0;
    int n = 1;
};
double gate_fidelity(const FidelityModel& m);
double total_fidelity(double decomp_fidelity, const FidelityModel& m, int k);

struct RootChoice {
    int n = 0;
    int k = 0;
    double total_fidelity = 0.0;
    double decomp_fidelity = 0.0;
    double duration = 0.0; // k / n in units of one iSWAP
};
RootChoice best_root_choice(const Unitary4& u, double f_iswap, const std::vector<int>& roots, int k_max,
                            const OptimizerConfig& cfg = {});

// Decomposes into a fixed basis, caching canonical syntheses by Weyl coordinates.
// Safe to share between threads.
class BasisDecomposer {
public:
    explicit BasisDecomposer(GateKind basis, OptimizerConfig cfg = {});

    const GateKind& basis() const { return basis_; }
    DecompResult decompose(const Unitary4& u);
    // Basis-gate count without building the local gates (synthesis still runs for
    // bases without an analytic classifier).
    int count(const WeylCoordinates& c);
    std::size_t cache_size() const;

private:
    struct Entry {
        int k;
        std::vector<LocalPair> locals;
        double fidelity;
    };
    using Key = std::tuple<long long, long long, long long>;
    Key key_of(const WeylCoordinates& c) const;
    Entry canonical(const WeylCoordinates& c);

    GateKind basis_;
    OptimizerConfig cfg_;
    mutable std::mutex mu_;
    std::map<Key, Entry> cache_;
};

} // namespace codesign

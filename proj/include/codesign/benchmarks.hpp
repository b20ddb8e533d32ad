#pragma once

#include <cstdint>
#include <string>

#include "codesign/circuit.hpp"

namespace codesign {

enum class Family { QV, QFT, CDKM_ADDER, QAOA_PROXY, HAMSIM, GHZ };

struct BenchmarkSpec {
    Family family = Family::QV;
    int width = 2;
    std::uint64_t seed = 0;
    int trotter_steps = 1; // HAMSIM
    int qaoa_layers = 1;   // QAOA_PROXY
};

const char* family_name(Family f);   // "qv", "qft", "cdkm", "qaoa", "hamsim", "ghz"
Family parse_family(const std::string& s);

Circuit generate(const BenchmarkSpec& spec);

} // namespace codesign

#pragma once

// Reference computations written independently of the library, used only
// to check it.

#include <cstdint>

namespace wsd::testing {

/// G² = 2 Σ O ln(O / E), E = row·col / N, in 50-digit decimal arithmetic.
double g2_multiprecision(std::uint64_t n11, std::uint64_t n12, std::uint64_t n21, std::uint64_t n22);

/// The same textbook formula in plain double arithmetic.
double g2_naive(double n11, double n12, double n21, double n22);

}  // namespace wsd::testing

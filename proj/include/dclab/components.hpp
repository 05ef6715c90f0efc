#pragma once

#include <array>

namespace dclab {

// The two period annuli / centers: first around (0,0) (h < 0), second around
// (0,1) (h > 1).
enum class Center { first, second };

// Irreducible components of the exceptional divisor of the blown-up product
// ideal, named by their defining equations on P^2 x P^2:
//   E1: c1^2 = c3^2 = 0      E2: c1^1 + c2^1 = 0, c3^1 = 0      E3: c3^1 = c3^2 = 0
enum class EComponent { E1, E2, E3 };

// A pair of projective triples selecting one bifurcation function per center.
struct BifurcationPair {
    std::array<double, 3> c1{};  // first-center triple
    std::array<double, 3> c2{};  // second-center triple
    EComponent tag = EComponent::E3;
};

}  // namespace dclab

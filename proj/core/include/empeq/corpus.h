#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "empeq/game.h"

namespace empeq::corpus {

// Two players P1 (rows a1, a2) and P2 (columns b1, b2). (a1,b1) pays 1 to
// both, everything else pays 0.
Game gamma1();

// P1 is indifferent when P2 plays b1; b1 strictly dominates b2.
Game psi();

// 3x3 coordination game parameterized by the penalty pair (c1, c2) > 0.
Game gamma2c(double c1, double c2);

// Two bidders U and T with bids 10, 15 and 20.
Game phi();

// Names accepted by by_name: gamma1, psi, gamma2c, phi.
std::vector<std::string> names();

// gamma2c uses (c1, c2); the other games ignore them. Throws
// std::invalid_argument for unknown names or nonpositive c.
Game by_name(std::string_view name, double c1 = 2.0, double c2 = 2.0);

}  // namespace empeq::corpus

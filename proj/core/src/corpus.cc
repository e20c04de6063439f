#include "empeq/corpus.h"

#include <stdexcept>

namespace empeq::corpus {
namespace {

Game bimatrix(std::vector<std::string> players,
              std::vector<std::vector<std::string>> actions,
              const std::vector<std::vector<double>>& u1,
              const std::vector<std::vector<double>>& u2) {
  std::vector<double> payoffs;
  for (std::size_t r = 0; r < u1.size(); ++r) {
    for (std::size_t c = 0; c < u1[r].size(); ++c) {
      payoffs.push_back(u1[r][c]);
      payoffs.push_back(u2[r][c]);
    }
  }
  return Game(std::move(players), std::move(actions), std::move(payoffs));
}

}  // namespace

Game gamma1() {
  return bimatrix({"P1", "P2"}, {{"a1", "a2"}, {"b1", "b2"}},
                  {{1, 0}, {0, 0}}, {{1, 0}, {0, 0}});
}

Game psi() {
  return bimatrix({"P1", "P2"}, {{"a1", "a2"}, {"b1", "b2"}},
                  {{2, 2}, {2, 0}}, {{2, 1}, {3, 0}});
}

Game gamma2c(double c1, double c2) {
  if (!(c1 > 0.0) || !(c2 > 0.0)) {
    throw std::invalid_argument("gamma2c requires c1 > 0 and c2 > 0");
  }
  return bimatrix({"P1", "P2"}, {{"a1", "a2", "a3"}, {"b1", "b2", "b3"}},
                  {{1, 0, -7 - c1}, {0, 0, -7}, {-7 - c1, -7, -7}},
                  {{1, 0, -7 - c2}, {0, 0, -7}, {-7 - c2, -7, -7}});
}

Game phi() {
  return bimatrix({"U", "T"}, {{"10", "15", "20"}, {"10", "15", "20"}},
                  {{10, 15, 20}, {5, 15, 20}, {0, 0, 20}},
                  {{30, 25, 20}, {15, 25, 20}, {20, 20, 20}});
}

std::vector<std::string> names() { return {"gamma1", "psi", "gamma2c", "phi"}; }

Game by_name(std::string_view name, double c1, double c2) {
  if (name == "gamma1") return gamma1();
  if (name == "psi") return psi();
  if (name == "gamma2c") return gamma2c(c1, c2);
  if (name == "phi") return phi();
  throw std::invalid_argument("unknown corpus game: " + std::string(name));
}

}  // namespace empeq::corpus

#pragma once

#include <utility>
#include <vector>

namespace tdeg {

// σ(1..m) stored as image[i−1] = σ(i), values in 1..m.
struct Permutation {
    std::vector<int> image;

    int m() const { return static_cast<int>(image.size()); }
    bool valid() const;
    int sign() const;
    static Permutation identity(int m);
};

// Order parity ε_l(σ): with A = {σ(1),…,σ(2l)}, zero if some i ∈ A has neither i−1 nor i+1
// in A (labels cyclic mod m) or if A admits no cover by cyclically adjacent pairs (j, j+1);
// otherwise (−1)^t with t the least number of transpositions turning (σ(1),…,σ(2l)) into a
// sequence (j₁, j₁+1, j₂, j₂+1, …).
int order_parity(const Permutation& sigma, int l);

// Whether every element of the prefix has a cyclic neighbour in the prefix.
bool neighbour_condition(const Permutation& sigma, int l);

// All perfect matchings of {0..2L−1} as sequences (a₁,b₁,a₂,b₂,…), a_j < b_j, a₁ < a₂ < …,
// with the sign of that sequence read as a permutation.
struct Matching {
    std::vector<int> order;
    int sign = 1;
};
std::vector<Matching> perfect_matchings(int slots);

}  // namespace tdeg

// Largest 3-term-GP-free subset of [30], and the grading bound that caps it.

#include <iostream>

#include "proscribe/gradings.hpp"

int main() {
    using namespace proscribe;
    const auto family = PatternFamily::gp_int(3);

    auto fs = solve_family(family, NaturalSet::interval(30));
    std::cout << "G([30]) = " << fs.result.optimum << ", witness " << fs.witness.str() << "\n";

    const auto g = build_gp_grading(30, 3);
    const auto bound = grading_bound(g, level_values(g, family));
    std::cout << "grading bound: " << *bound.integer_form << " (" << bound.decimal() << " * 30)\n";
}

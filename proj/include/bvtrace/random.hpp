#pragma once

#include <random>

#include "bvtrace/forms.hpp"
#include "bvtrace/hochschild.hpp"

namespace bvtrace {

/// Random generators for property checks; all draws come from the given
/// engine so a seed fixes the whole sample.
Monomial random_monomial(int nvars, int max_degree, std::mt19937_64& rng);
WeylElement random_weyl(int n, int order, int max_degree, int terms, std::mt19937_64& rng);
/// a0 (x) ... (x) ap with random Weyl entries of `terms` terms each.
ChainSum random_chain(int n, int order, int p, int max_degree, int terms, std::mt19937_64& rng);
/// Sum of u^k c_k over a few random u-exponents in [-1, 1] and lengths p <= max_p.
PeriodicChain random_periodic(int n, int order, int max_p, int max_degree, std::mt19937_64& rng);
FormalForm random_form(int n, int order, int max_degree, int terms, std::mt19937_64& rng);

}  // namespace bvtrace

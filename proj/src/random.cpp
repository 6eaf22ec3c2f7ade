#include "bvtrace/random.hpp"

namespace bvtrace {
namespace {

int draw(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Rational nonzero_coefficient(std::mt19937_64& rng) {
  int c = draw(rng, -3, 2);
  return Rational(c >= 0 ? c + 1 : c, draw(rng, 1, 2));
}

}  // namespace

Monomial random_monomial(int nvars, int max_degree, std::mt19937_64& rng) {
  Monomial m;
  int d = draw(rng, 0, max_degree);
  for (int i = 0; i < d; ++i) m.e[draw(rng, 0, nvars - 1)]++;
  return m;
}

WeylElement random_weyl(int n, int order, int max_degree, int terms, std::mt19937_64& rng) {
  std::vector<WeylTerm> ts;
  for (int i = 0; i < terms; ++i)
    ts.push_back({draw(rng, 0, std::min(order, 1)), random_monomial(2 * n, max_degree, rng), nonzero_coefficient(rng)});
  return WeylElement::from_terms(n, order, std::move(ts));
}

ChainSum random_chain(int n, int order, int p, int max_degree, int terms, std::mt19937_64& rng) {
  std::vector<WeylElement> entries;
  for (int i = 0; i <= p; ++i) entries.push_back(random_weyl(n, order, max_degree, terms, rng));
  return ChainSum::from_entries(entries);
}

PeriodicChain random_periodic(int n, int order, int max_p, int max_degree, std::mt19937_64& rng) {
  PeriodicChain out(n, order);
  int parts = draw(rng, 1, 3);
  for (int i = 0; i < parts; ++i) {
    int p = draw(rng, 0, max_p);
    out.add(draw(rng, -1, 1), random_chain(n, order, p, max_degree, draw(rng, 1, 2), rng));
  }
  return out;
}

FormalForm random_form(int n, int order, int max_degree, int terms, std::mt19937_64& rng) {
  std::vector<FormTerm> ts;
  for (int i = 0; i < terms; ++i)
    ts.push_back({draw(rng, 0, std::min(order, 1)), random_monomial(2 * n, max_degree, rng),
                  static_cast<std::uint32_t>(draw(rng, 0, (1 << (2 * n)) - 1)), nonzero_coefficient(rng)});
  return FormalForm::from_terms(n, order, std::move(ts));
}

}  // namespace bvtrace

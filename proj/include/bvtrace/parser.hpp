#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bvtrace/dgbv.hpp"
#include "bvtrace/forms.hpp"
#include "bvtrace/hochschild.hpp"
#include "bvtrace/qmod.hpp"
#include "bvtrace/rational.hpp"
#include "bvtrace/vertex.hpp"
#include "bvtrace/weyl.hpp"

namespace bvtrace {

/// Input texts longer than this are rejected before parsing.
inline constexpr std::size_t kMaxInputBytes = 1 << 20;

struct LegSyntax {
  std::string name;
  int k = 0;
  int line = 1;
  int column = 1;
};

/// Expression tree. `^` is a power when followed by an integer (optionally
/// negative) and a wedge otherwise; `|` separates chain slots; `: ... :`
/// is a normal-ordered product of legs `D^k name`.
struct Node {
  enum class Kind { number, symbol, add, sub, neg, mul, pow, wedge, chain, normal };
  Kind kind = Kind::number;
  Rational value;
  std::string name;
  int exponent = 0;
  std::vector<Node> kids;
  std::vector<LegSyntax> legs;
  int line = 1;
  int column = 1;
};

/// Throws ParseError with a 1-based position.
Node parse_expression(std::string_view text);

/// True when `name` occurs as an identifier token.
bool mentions_identifier(std::string_view text, std::string_view name);

/// Largest index i among p_i, q_i, dp_i, dq_i (at least 1).
int infer_weyl_n(std::string_view text);

WeylElement parse_weyl(std::string_view text, int n, int order);
FormalForm parse_form(std::string_view text, int n, int order);
ChainSum parse_chain(std::string_view text, int n, int order);
/// Chains with u-power coefficients, e.g. "(p1 | q1)*u + 1".
PeriodicChain parse_periodic(std::string_view text, int n, int order);
VertexPolynomial parse_vertex(std::string_view text, const GeneratorSetPtr& gens, int order);
/// Series in q with E2, E4, E6 available, truncated at q^n.
QSeries parse_qseries(std::string_view text, int n);
Functional parse_functional(std::string_view text, const DgSymplecticSpace& space, int order);

}  // namespace bvtrace

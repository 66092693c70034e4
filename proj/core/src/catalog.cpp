#include "tdrk/catalog.hpp"

#include "tdrk/errors.hpp"

namespace tdrk {

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

MethodCard make_card(std::string name, RationalMatrix a, RationalMatrix adot, RationalVector b,
                     RationalVector bdot, int p, int m, std::string source, std::string note = {}) {
  return MethodCard{std::move(name),
                    TdrkTableau(std::move(a), std::move(adot), std::move(b), std::move(bdot)),
                    p,
                    m,
                    std::move(source),
                    std::move(note)};
}

std::vector<MethodCard> build_catalog() {
  const Rational z = 0;
  std::vector<MethodCard> cards;

  // Third order.
  cards.push_back(make_card("TDRK2s3p1e",
                            {{z, z}, {q(1), z}},
                            {{z, z}, {q(1, 2), z}},
                            {q(1), z},
                            {q(1, 3), q(1, 6)},
                            3, 1, "Tsai et al. (2010), two-stage third order"));
  cards.push_back(make_card("TDRK2s3p2e",
                            {{z, z}, {q(2, 3), z}},
                            {{z, z}, {q(2, 9), z}},
                            {q(1, 4), q(3, 4)},
                            {z, z},
                            3, 2, "two-stage third order, no second derivative in the update"));
  cards.push_back(make_card("TDRK3s3p3e",
                            {{z, z, z}, {q(2, 3), z, z}, {q(1, 3), q(1, 3), z}},
                            {{z, z, z}, {q(2, 9), z, z}, {z, z, z}},
                            {q(1, 4), z, q(3, 4)},
                            {z, z, z},
                            3, 3, "three-stage third order, perturbed stage excluded from the update"));

  // Fourth order.
  cards.push_back(make_card("TDRK2s4p1e",
                            {{z, z}, {q(1, 2), z}},
                            {{z, z}, {q(1, 8), z}},
                            {q(1), z},
                            {q(1, 6), q(1, 3)},
                            4, 1, "Tsai et al. (2010), unique explicit two-stage fourth order"));
  cards.push_back(make_card("TDRK3s4p2e",
                            {{z, z, z}, {q(1, 2), z, z}, {q(1), z, z}},
                            {{z, z, z}, {q(1, 8), z, z}, {z, q(1, 2), z}},
                            {q(1, 6), q(2, 3), q(1, 6)},
                            {z, z, z},
                            4, 2, "three-stage fourth order, no second derivative in the update"));

  // Fifth order.
  cards.push_back(make_card("TDRK3s5p1e",
                            {{z, z, z}, {q(1, 3), z, z}, {q(4, 5), z, z}},
                            {{z, z, z}, {q(1, 18), z, z}, {q(-2, 125), q(42, 125), z}},
                            {q(1), z, z},
                            {q(5, 48), q(9, 28), q(25, 336)},
                            5, 1, "Tsai et al. (2010), three-stage fifth order",
                            "sixth order on linear problems"));

  // Sixth order.
  cards.push_back(make_card(
      "TDRK4s6p1e",
      {{z, z, z, z}, {q(1, 4), z, z, z}, {q(2, 3), z, z, z}, {q(1), z, z, z}},
      {{z, z, z, z}, {q(1, 32), z, z, z}, {q(-2, 81), q(20, 81), z, z}, {q(5, 4), q(-6, 5), q(9, 20), z}},
      {q(1), z, z, z},
      {q(3, 40), q(64, 225), q(27, 200), q(1, 180)},
      6, 1, "Tsai et al. (2010), four-stage sixth order"));
  return cards;
}

}  // namespace

const std::vector<MethodCard>& list_methods() {
  static const std::vector<MethodCard> catalog = build_catalog();
  return catalog;
}

std::vector<std::string> method_names() {
  std::vector<std::string> names;
  for (const auto& card : list_methods()) names.push_back(card.name);
  return names;
}

const MethodCard& get_method(std::string_view name) {
  for (const auto& card : list_methods()) {
    if (card.name == name) return card;
  }
  std::string available;
  for (const auto& card : list_methods()) {
    if (!available.empty()) available += ", ";
    available += card.name;
  }
  throw LookupError("unknown method '" + std::string(name) + "'; available: " + available);
}

}  // namespace tdrk

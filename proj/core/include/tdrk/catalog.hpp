#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tdrk/tableau.hpp"

namespace tdrk {

/// A named method with the accuracy order p and perturbation order m it is
/// designed for (final-time error O(dt^p) + O(eps dt^m)).
struct MethodCard {
  std::string name;
  TdrkTableau tableau;
  int claimed_p = 0;
  int claimed_m = 0;
  std::string source;
  std::string note;
};

/// Throws LookupError listing the available names when `name` is unknown.
const MethodCard& get_method(std::string_view name);

/// All catalog methods in a fixed order: third, fourth, fifth, sixth order.
const std::vector<MethodCard>& list_methods();

std::vector<std::string> method_names();

}  // namespace tdrk

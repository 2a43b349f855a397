#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bootcopula/expr.hpp"

namespace bootcopula {

/// rogan_gladen truncates to [0, 1]; rogan_gladen_raw returns the untruncated ratio.
enum class BuiltinCombiner { product, sum, identity, rogan_gladen, rogan_gladen_raw };

std::string_view to_string(BuiltinCombiner kind) noexcept;
BuiltinCombiner parse_builtin_combiner(std::string_view name);

/// Rogan-Gladen true-prevalence estimate (apparent + spec - 1) / (sens + spec - 1),
/// truncated to [0, 1]. Throws UninformativeTestError when sens + spec <= 1.
double rogan_gladen(double apparent, double sensitivity, double specificity);

/// The same ratio without truncation; may fall outside [0, 1].
double rogan_gladen_raw(double apparent, double sensitivity, double specificity);

/// The function mapping one joint parameter draw to the combined parameter.
/// Either a builtin or a parsed expression with a fixed positional variable order.
class Combiner {
 public:
  /// product and sum accept any arity >= 1; identity takes 1 and the
  /// Rogan-Gladen variants take 3 (prevalence, sensitivity, specificity).
  static Combiner builtin(BuiltinCombiner kind, std::size_t arity);

  /// Parses `text`. Marginal i binds to variables[i]; when `variables` is
  /// empty the free variables in order of first appearance are used.
  static Combiner expression(std::string_view text, std::vector<std::string> variables = {});

  std::size_t arity() const noexcept { return arity_; }
  bool is_builtin() const noexcept { return !program_; }
  BuiltinCombiner builtin_kind() const noexcept { return kind_; }

  /// Expression source, or the builtin's name.
  const std::string& text() const noexcept { return text_; }
  const std::vector<std::string>& variables() const noexcept { return variables_; }

  double operator()(std::span<const double> params) const;

 private:
  Combiner() = default;

  BuiltinCombiner kind_ = BuiltinCombiner::identity;
  std::size_t arity_ = 0;
  std::string text_;
  std::vector<std::string> variables_;
  std::shared_ptr<const expr::Program> program_;
};

}  // namespace bootcopula

#include "bootcopula/combiner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bootcopula/error.hpp"

namespace bootcopula {

std::string_view to_string(BuiltinCombiner kind) noexcept {
  switch (kind) {
    case BuiltinCombiner::product:
      return "product";
    case BuiltinCombiner::sum:
      return "sum";
    case BuiltinCombiner::identity:
      return "identity";
    case BuiltinCombiner::rogan_gladen:
      return "roganGladen";
    case BuiltinCombiner::rogan_gladen_raw:
      return "roganGladenRaw";
  }
  return "unknown";
}

BuiltinCombiner parse_builtin_combiner(std::string_view name) {
  if (name == "product") return BuiltinCombiner::product;
  if (name == "sum") return BuiltinCombiner::sum;
  if (name == "identity") return BuiltinCombiner::identity;
  if (name == "roganGladen") return BuiltinCombiner::rogan_gladen;
  if (name == "roganGladenRaw") return BuiltinCombiner::rogan_gladen_raw;
  throw InvalidArgument("unknown combiner '" + std::string(name) +
                        "' (expected product, sum, identity, roganGladen or roganGladenRaw)");
}

double rogan_gladen_raw(double apparent, double sensitivity, double specificity) {
  if (!(sensitivity + specificity > 1.0)) {
    std::ostringstream msg;
    msg << "uninformative test: sensitivity + specificity = " << sensitivity + specificity
        << " <= 1";
    throw UninformativeTestError(msg.str(), 0);
  }
  return (apparent + specificity - 1.0) / (sensitivity + specificity - 1.0);
}

double rogan_gladen(double apparent, double sensitivity, double specificity) {
  return std::min(std::max(rogan_gladen_raw(apparent, sensitivity, specificity), 0.0), 1.0);
}

Combiner Combiner::builtin(BuiltinCombiner kind, std::size_t arity) {
  if (arity == 0) throw InvalidArgument("combiner arity must be >= 1");
  if (kind == BuiltinCombiner::identity && arity != 1) {
    throw InvalidArgument("identity combiner takes exactly one parameter");
  }
  if ((kind == BuiltinCombiner::rogan_gladen || kind == BuiltinCombiner::rogan_gladen_raw) &&
      arity != 3) {
    throw InvalidArgument("roganGladen combiner takes exactly three parameters");
  }
  Combiner c;
  c.kind_ = kind;
  c.arity_ = arity;
  c.text_ = std::string(to_string(kind));
  return c;
}

Combiner Combiner::expression(std::string_view text, std::vector<std::string> variables) {
  const expr::Expr ast = expr::parse(text);
  if (variables.empty()) variables = expr::free_variables(ast);
  for (std::size_t i = 0; i < variables.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (variables[i] == variables[j]) {
        throw InvalidArgument("duplicate variable name '" + variables[i] + "'");
      }
    }
  }
  Combiner c;
  c.arity_ = variables.size();
  if (c.arity_ == 0) throw InvalidArgument("combination expression has no variables");
  c.text_ = std::string(text);
  c.program_ = std::make_shared<const expr::Program>(ast, variables);
  c.variables_ = std::move(variables);
  return c;
}

double Combiner::operator()(std::span<const double> params) const {
  if (params.size() != arity_) {
    throw InvalidArgument("combiner expects " + std::to_string(arity_) + " parameters, got " +
                          std::to_string(params.size()));
  }
  if (program_) return program_->run(params);
  switch (kind_) {
    case BuiltinCombiner::product: {
      double acc = params[0];
      for (std::size_t i = 1; i < params.size(); ++i) acc = acc * params[i];
      return acc;
    }
    case BuiltinCombiner::sum: {
      double acc = params[0];
      for (std::size_t i = 1; i < params.size(); ++i) acc = acc + params[i];
      return acc;
    }
    case BuiltinCombiner::identity:
      return params[0];
    case BuiltinCombiner::rogan_gladen:
      return rogan_gladen(params[0], params[1], params[2]);
    case BuiltinCombiner::rogan_gladen_raw:
      return rogan_gladen_raw(params[0], params[1], params[2]);
  }
  return 0.0;
}

}  // namespace bootcopula

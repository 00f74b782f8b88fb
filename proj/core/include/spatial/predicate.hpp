#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spatial/types.hpp"

namespace spatial {

// Variables visible to rule trigger predicates.
struct RuleContext {
  bool alone = false;
  bool user_present = false;
  bool first_time = false;
  bool first_time_today = false;
  bool recognized = false;  // a person in view was recognized as the user
  bool stranger = false;    // an unrecognized person was newly detected
  bool private_content = false;
  Engagement engagement = Engagement::idle;
  int minute_of_day = 0;
  std::optional<Importance> importance;  // classification of the triggering content
};

// Boolean expression over RuleContext.
//
//   expr    := or
//   or      := and ( "||" and )*
//   and     := unary ( "&&" unary )*
//   unary   := "!" unary | "(" expr ")" | atom
//   atom    := "true" | "false" | flag
//            | "time_of_day" cmp HH:MM
//            | ("engagement" | "importance") ("==" | "!=") name
//   flag    := alone | user_present | first_time | first_time_today
//            | recognized | stranger | private
class Predicate {
 public:
  Predicate();  // always true

  // Throws ValidationError naming the offending column.
  static Predicate parse(std::string_view text);

  [[nodiscard]] bool evaluate(const RuleContext& ctx) const;
  [[nodiscard]] const std::string& source() const { return source_; }

 private:
  enum class Op { constant, flag, time_cmp, engagement_eq, importance_eq, negate, all, any };
  enum class Cmp { lt, le, gt, ge, eq, ne };

  struct Node {
    Op op = Op::constant;
    bool value = true;
    int flag = 0;
    Cmp cmp = Cmp::eq;
    int minutes = 0;
    int enum_value = 0;
    std::vector<int> children;
  };

  class Parser;

  [[nodiscard]] bool eval(int node, const RuleContext& ctx) const;

  std::string source_;
  std::vector<Node> nodes_;
  int root_ = 0;
};

}  // namespace spatial

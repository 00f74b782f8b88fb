#include "spatial/predicate.hpp"

#include <array>
#include <cctype>
#include <string>

namespace spatial {
namespace {

constexpr std::array<std::string_view, 7> kFlags{
    "alone", "user_present", "first_time", "first_time_today", "recognized", "stranger", "private",
};

bool flag_value(int flag, const RuleContext& c) {
  switch (flag) {
    case 0: return c.alone;
    case 1: return c.user_present;
    case 2: return c.first_time;
    case 3: return c.first_time_today;
    case 4: return c.recognized;
    case 5: return c.stranger;
    case 6: return c.private_content;
    default: return false;
  }
}

}  // namespace

class Predicate::Parser {
 public:
  Parser(std::string_view text, Predicate& out) : text_(text), out_(out) {}

  int parse() {
    const int root = parse_or();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("predicate '" + std::string(text_) + "' column " +
                          std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  std::string identifier() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  int add(Node n) {
    out_.nodes_.push_back(std::move(n));
    return static_cast<int>(out_.nodes_.size() - 1);
  }

  int parse_or() {
    Node n;
    n.op = Op::any;
    n.children.push_back(parse_and());
    while (accept("||")) n.children.push_back(parse_and());
    return n.children.size() == 1 ? n.children.front() : add(std::move(n));
  }

  int parse_and() {
    Node n;
    n.op = Op::all;
    n.children.push_back(parse_unary());
    while (accept("&&")) n.children.push_back(parse_unary());
    return n.children.size() == 1 ? n.children.front() : add(std::move(n));
  }

  int parse_unary() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '!' &&
        !(pos_ + 1 < text_.size() && text_[pos_ + 1] == '=')) {
      ++pos_;
      Node n;
      n.op = Op::negate;
      n.children.push_back(parse_unary());
      return add(std::move(n));
    }
    if (accept("(")) {
      const int inner = parse_or();
      if (!accept(")")) fail("expected ')'");
      return inner;
    }
    return parse_atom();
  }

  Cmp comparison(bool equality_only) {
    if (accept("==")) return Cmp::eq;
    if (accept("!=")) return Cmp::ne;
    if (!equality_only) {
      if (accept("<=")) return Cmp::le;
      if (accept(">=")) return Cmp::ge;
      if (accept("<")) return Cmp::lt;
      if (accept(">")) return Cmp::gt;
    }
    fail("expected comparison operator");
  }

  int clock_literal() {
    skip_space();
    auto digits = [&](std::size_t count) {
      int v = 0;
      for (std::size_t i = 0; i < count; ++i) {
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          fail("expected HH:MM");
        }
        v = v * 10 + (text_[pos_++] - '0');
      }
      return v;
    };
    const int h = digits(2);
    if (!accept(":")) fail("expected HH:MM");
    const int m = digits(2);
    if (h > 23 || m > 59) fail("clock value out of range");
    return h * 60 + m;
  }

  int parse_atom() {
    const std::size_t at = pos_;
    const std::string id = identifier();
    Node n;
    if (id == "true" || id == "false") {
      n.op = Op::constant;
      n.value = id == "true";
      return add(std::move(n));
    }
    for (std::size_t f = 0; f < kFlags.size(); ++f) {
      if (kFlags[f] == id) {
        n.op = Op::flag;
        n.flag = static_cast<int>(f);
        return add(std::move(n));
      }
    }
    if (id == "time_of_day") {
      n.op = Op::time_cmp;
      n.cmp = comparison(false);
      n.minutes = clock_literal();
      return add(std::move(n));
    }
    if (id == "engagement") {
      n.op = Op::engagement_eq;
      n.cmp = comparison(true);
      const auto v = parse_engagement(identifier());
      if (!v) fail("unknown engagement value");
      n.enum_value = static_cast<int>(*v);
      return add(std::move(n));
    }
    if (id == "importance") {
      n.op = Op::importance_eq;
      n.cmp = comparison(true);
      const auto v = parse_importance(identifier());
      if (!v) fail("unknown importance value");
      n.enum_value = static_cast<int>(*v);
      return add(std::move(n));
    }
    pos_ = at;
    fail("unknown variable '" + id + "'");
  }

  std::string_view text_;
  Predicate& out_;
  std::size_t pos_ = 0;
};

Predicate::Predicate() : source_("true") { nodes_.push_back(Node{}); }

Predicate Predicate::parse(std::string_view text) {
  Predicate p;
  p.nodes_.clear();
  p.source_ = std::string(text);
  Parser parser(text, p);
  p.root_ = parser.parse();
  return p;
}

bool Predicate::evaluate(const RuleContext& ctx) const { return eval(root_, ctx); }

bool Predicate::eval(int index, const RuleContext& ctx) const {
  const Node& n = nodes_[static_cast<std::size_t>(index)];
  auto compare = [](Cmp cmp, int lhs, int rhs) {
    switch (cmp) {
      case Cmp::lt: return lhs < rhs;
      case Cmp::le: return lhs <= rhs;
      case Cmp::gt: return lhs > rhs;
      case Cmp::ge: return lhs >= rhs;
      case Cmp::eq: return lhs == rhs;
      case Cmp::ne: return lhs != rhs;
    }
    return false;
  };
  switch (n.op) {
    case Op::constant:
      return n.value;
    case Op::flag:
      return flag_value(n.flag, ctx);
    case Op::time_cmp:
      return compare(n.cmp, ctx.minute_of_day, n.minutes);
    case Op::engagement_eq:
      return compare(n.cmp, static_cast<int>(ctx.engagement), n.enum_value);
    case Op::importance_eq:
      if (!ctx.importance) return n.cmp == Cmp::ne;
      return compare(n.cmp, static_cast<int>(*ctx.importance), n.enum_value);
    case Op::negate:
      return !eval(n.children.front(), ctx);
    case Op::all:
      for (int c : n.children) {
        if (!eval(c, ctx)) return false;
      }
      return true;
    case Op::any:
      for (int c : n.children) {
        if (eval(c, ctx)) return true;
      }
      return false;
  }
  return false;
}

}  // namespace spatial

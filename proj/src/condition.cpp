#include "cpsfuzz/condition.hpp"

#include <algorithm>

#include "cpsfuzz/errors.hpp"

namespace cpsfuzz {

std::string_view to_string(Comparison op) {
  switch (op) {
    case Comparison::Less: return "<";
    case Comparison::LessEqual: return "<=";
    case Comparison::Equal: return "=";
    case Comparison::GreaterEqual: return ">=";
    case Comparison::Greater: return ">";
  }
  return "?";
}

namespace {

bool compare(double lhs, Comparison op, double rhs) {
  switch (op) {
    case Comparison::Less: return lhs < rhs;
    case Comparison::LessEqual: return lhs <= rhs;
    case Comparison::Equal: return lhs == rhs;
    case Comparison::GreaterEqual: return lhs >= rhs;
    case Comparison::Greater: return lhs > rhs;
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// SensorCondition

struct SensorCondition::Node {
  Kind kind = Kind::True;
  std::string sensor;
  Comparison op = Comparison::Less;
  double constant = 0.0;
  std::vector<SensorCondition> children;
};

SensorCondition::SensorCondition() : SensorCondition(truth()) {}

SensorCondition::SensorCondition(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

SensorCondition SensorCondition::truth() {
  static const auto node = std::make_shared<const Node>();
  return SensorCondition(node);
}

SensorCondition SensorCondition::compare(std::string sensor, Comparison op, double constant) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Compare;
  node->sensor = std::move(sensor);
  node->op = op;
  node->constant = constant;
  return SensorCondition(std::move(node));
}

SensorCondition SensorCondition::negation(SensorCondition operand) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Not;
  node->children.push_back(std::move(operand));
  return SensorCondition(std::move(node));
}

SensorCondition SensorCondition::conjunction(SensorCondition lhs, SensorCondition rhs) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::And;
  node->children = {std::move(lhs), std::move(rhs)};
  return SensorCondition(std::move(node));
}

SensorCondition SensorCondition::disjunction(SensorCondition lhs, SensorCondition rhs) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Or;
  node->children = {std::move(lhs), std::move(rhs)};
  return SensorCondition(std::move(node));
}

SensorCondition::Kind SensorCondition::kind() const { return node_->kind; }
const std::string& SensorCondition::sensor() const { return node_->sensor; }
Comparison SensorCondition::op() const { return node_->op; }
double SensorCondition::constant() const { return node_->constant; }
const SensorCondition& SensorCondition::lhs() const { return node_->children.at(0); }
const SensorCondition& SensorCondition::rhs() const { return node_->children.at(1); }

bool SensorCondition::evaluate(const Readings& readings) const {
  switch (kind()) {
    case Kind::True: return true;
    case Kind::Compare: {
      auto v = readings.get(sensor());
      if (!v) throw UnknownSensorError("unknown sensor '" + sensor() + "'");
      return cpsfuzz::compare(*v, op(), constant());
    }
    case Kind::Not: return !lhs().evaluate(readings);
    case Kind::And: return lhs().evaluate(readings) && rhs().evaluate(readings);
    case Kind::Or: return lhs().evaluate(readings) || rhs().evaluate(readings);
  }
  return false;
}

std::vector<std::string> SensorCondition::sensors() const {
  std::vector<std::string> out;
  std::function<void(const SensorCondition&)> walk = [&](const SensorCondition& c) {
    if (c.kind() == Kind::Compare) out.push_back(c.sensor());
    for (const auto& child : c.node_->children) walk(child);
  };
  walk(*this);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool SensorCondition::operator==(const SensorCondition& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.kind != b.kind) return false;
  if (a.kind == Kind::Compare) return a.sensor == b.sensor && a.op == b.op && a.constant == b.constant;
  return a.children == b.children;
}

namespace {

bool sensor_binary(const SensorCondition& c) {
  return c.kind() == SensorCondition::Kind::And || c.kind() == SensorCondition::Kind::Or;
}

std::string print_sensor(const SensorCondition& c) {
  using K = SensorCondition::Kind;
  switch (c.kind()) {
    case K::True: return "true";
    case K::Compare:
      return c.sensor() + " " + std::string(to_string(c.op())) + " " + canonical_number(c.constant());
    case K::Not: {
      const auto& inner = c.lhs();
      if (sensor_binary(inner)) return "not (" + print_sensor(inner) + ")";
      return "not " + print_sensor(inner);
    }
    case K::And:
    case K::Or: {
      const char* word = c.kind() == K::And ? " and " : " or ";
      std::string left = print_sensor(c.lhs());
      if (sensor_binary(c.lhs()) && c.lhs().kind() != c.kind()) left = "(" + left + ")";
      std::string right = print_sensor(c.rhs());
      if (sensor_binary(c.rhs())) right = "(" + right + ")";
      return left + word + right;
    }
  }
  return "?";
}

}  // namespace

std::string to_string(const SensorCondition& cond) { return print_sensor(cond); }

bool eval_sensor_condition(const SensorCondition& cond, const Readings& readings) {
  return cond.evaluate(readings);
}

CompiledSensorCondition::CompiledSensorCondition(
    const SensorCondition& cond, const std::function<std::optional<std::size_t>(std::string_view)>& index_of) {
  root_ = build(cond, index_of);
}

int CompiledSensorCondition::build(const SensorCondition& cond,
                                   const std::function<std::optional<std::size_t>(std::string_view)>& index_of) {
  Op op;
  op.kind = cond.kind();
  switch (cond.kind()) {
    case SensorCondition::Kind::True: break;
    case SensorCondition::Kind::Compare: {
      auto slot = index_of(cond.sensor());
      if (!slot) throw UnknownSensorError("unknown sensor '" + cond.sensor() + "'");
      op.slot = *slot;
      op.cmp = cond.op();
      op.constant = cond.constant();
      break;
    }
    case SensorCondition::Kind::Not: op.lhs = build(cond.lhs(), index_of); break;
    case SensorCondition::Kind::And:
    case SensorCondition::Kind::Or:
      op.lhs = build(cond.lhs(), index_of);
      op.rhs = build(cond.rhs(), index_of);
      break;
  }
  ops_.push_back(op);
  return static_cast<int>(ops_.size()) - 1;
}

bool CompiledSensorCondition::evaluate(std::span<const double> values) const {
  if (root_ < 0) return true;
  return eval(root_, values);
}

bool CompiledSensorCondition::eval(int at, std::span<const double> values) const {
  const Op& op = ops_[static_cast<std::size_t>(at)];
  switch (op.kind) {
    case SensorCondition::Kind::True: return true;
    case SensorCondition::Kind::Compare: return compare(values[op.slot], op.cmp, op.constant);
    case SensorCondition::Kind::Not: return !eval(op.lhs, values);
    case SensorCondition::Kind::And: return eval(op.lhs, values) && eval(op.rhs, values);
    case SensorCondition::Kind::Or: return eval(op.lhs, values) || eval(op.rhs, values);
  }
  return false;
}

// ---------------------------------------------------------------------------
// CapabilityCondition

std::string to_string(const SetExpr& expr) {
  switch (expr.kind) {
    case SetExpr::Kind::Placeholder: return "_";
    case SetExpr::Kind::Variable: return expr.variable;
    case SetExpr::Kind::Literal: return to_string(expr.literal);
  }
  return "?";
}

struct CapabilityCondition::Node {
  Kind kind = Kind::True;
  SetExpr left;
  SetExpr right;
  std::vector<CapabilityCondition> children;
};

CapabilityCondition::CapabilityCondition() : CapabilityCondition(truth()) {}

CapabilityCondition::CapabilityCondition(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

CapabilityCondition CapabilityCondition::truth() {
  static const auto node = std::make_shared<const Node>();
  return CapabilityCondition(node);
}

CapabilityCondition CapabilityCondition::subset(SetExpr lhs, SetExpr rhs) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Subset;
  node->left = std::move(lhs);
  node->right = std::move(rhs);
  return CapabilityCondition(std::move(node));
}

CapabilityCondition CapabilityCondition::equal(SetExpr lhs, SetExpr rhs) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Equal;
  node->left = std::move(lhs);
  node->right = std::move(rhs);
  return CapabilityCondition(std::move(node));
}

CapabilityCondition CapabilityCondition::negation(CapabilityCondition operand) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Not;
  node->children.push_back(std::move(operand));
  return CapabilityCondition(std::move(node));
}

CapabilityCondition CapabilityCondition::conjunction(CapabilityCondition lhs, CapabilityCondition rhs) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::And;
  node->children = {std::move(lhs), std::move(rhs)};
  return CapabilityCondition(std::move(node));
}

CapabilityCondition CapabilityCondition::disjunction(CapabilityCondition lhs, CapabilityCondition rhs) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Or;
  node->children = {std::move(lhs), std::move(rhs)};
  return CapabilityCondition(std::move(node));
}

CapabilityCondition CapabilityCondition::member(const Capability& cap, SetExpr set) {
  return subset(SetExpr::set(CapabilitySet{cap}), std::move(set));
}

CapabilityCondition CapabilityCondition::non_member(const Capability& cap, SetExpr set) {
  return negation(member(cap, std::move(set)));
}

CapabilityCondition CapabilityCondition::exactly(CapabilitySet caps) {
  return equal(SetExpr::placeholder(), SetExpr::set(std::move(caps)));
}

CapabilityCondition CapabilityCondition::not_equal(SetExpr lhs, SetExpr rhs) {
  return negation(equal(std::move(lhs), std::move(rhs)));
}

CapabilityCondition CapabilityCondition::not_subset(SetExpr lhs, SetExpr rhs) {
  return negation(subset(std::move(lhs), std::move(rhs)));
}

CapabilityCondition::Kind CapabilityCondition::kind() const { return node_->kind; }
const SetExpr& CapabilityCondition::left_expr() const { return node_->left; }
const SetExpr& CapabilityCondition::right_expr() const { return node_->right; }
const CapabilityCondition& CapabilityCondition::lhs() const { return node_->children.at(0); }
const CapabilityCondition& CapabilityCondition::rhs() const { return node_->children.at(1); }

namespace {

const CapabilitySet& resolve(const SetExpr& expr, const CapabilitySet& y, const Assignment& alpha) {
  switch (expr.kind) {
    case SetExpr::Kind::Placeholder: return y;
    case SetExpr::Kind::Literal: return expr.literal;
    case SetExpr::Kind::Variable: {
      auto it = alpha.find(expr.variable);
      if (it == alpha.end()) throw UnboundVariableError("variable '" + expr.variable + "' is unbound");
      return it->second;
    }
  }
  return y;
}

}  // namespace

bool CapabilityCondition::evaluate(const CapabilitySet& y, const Assignment& alpha) const {
  switch (kind()) {
    case Kind::True: return true;
    case Kind::Subset: return resolve(node_->left, y, alpha).subset_of(resolve(node_->right, y, alpha));
    case Kind::Equal: return resolve(node_->left, y, alpha) == resolve(node_->right, y, alpha);
    case Kind::Not: return !lhs().evaluate(y, alpha);
    case Kind::And: return lhs().evaluate(y, alpha) && rhs().evaluate(y, alpha);
    case Kind::Or: return lhs().evaluate(y, alpha) || rhs().evaluate(y, alpha);
  }
  return false;
}

std::vector<std::string> CapabilityCondition::variables() const {
  std::vector<std::string> out;
  std::function<void(const CapabilityCondition&)> walk = [&](const CapabilityCondition& c) {
    for (const SetExpr* e : {&c.node_->left, &c.node_->right}) {
      if (e->kind == SetExpr::Kind::Variable) out.push_back(e->variable);
    }
    for (const auto& child : c.node_->children) walk(child);
  };
  walk(*this);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<CapabilitySet> CapabilityCondition::literal_sets() const {
  std::vector<CapabilitySet> out;
  std::function<void(const CapabilityCondition&)> walk = [&](const CapabilityCondition& c) {
    if (c.kind() == Kind::Subset || c.kind() == Kind::Equal) {
      for (const SetExpr* e : {&c.node_->left, &c.node_->right}) {
        if (e->kind == SetExpr::Kind::Literal) out.push_back(e->literal);
      }
    }
    for (const auto& child : c.node_->children) walk(child);
  };
  walk(*this);
  return out;
}

CapabilitySet CapabilityCondition::mentioned_capabilities() const {
  CapabilitySet out;
  for (const auto& s : literal_sets()) out = out.united(s);
  return out;
}

CapabilityCondition CapabilityCondition::rename_variables(
    const std::function<std::string(const std::string&)>& rename) const {
  auto fix = [&](SetExpr e) {
    if (e.kind == SetExpr::Kind::Variable) e.variable = rename(e.variable);
    return e;
  };
  switch (kind()) {
    case Kind::True: return *this;
    case Kind::Subset: return subset(fix(node_->left), fix(node_->right));
    case Kind::Equal: return equal(fix(node_->left), fix(node_->right));
    case Kind::Not: return negation(lhs().rename_variables(rename));
    case Kind::And: return conjunction(lhs().rename_variables(rename), rhs().rename_variables(rename));
    case Kind::Or: return disjunction(lhs().rename_variables(rename), rhs().rename_variables(rename));
  }
  return *this;
}

bool CapabilityCondition::operator==(const CapabilityCondition& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  return a.kind == b.kind && a.left == b.left && a.right == b.right && a.children == b.children;
}

namespace {

bool cap_binary(const CapabilityCondition& c) {
  return c.kind() == CapabilityCondition::Kind::And || c.kind() == CapabilityCondition::Kind::Or;
}

bool singleton_literal(const SetExpr& e) { return e.kind == SetExpr::Kind::Literal && e.literal.size() == 1; }

std::string print_cap(const CapabilityCondition& c) {
  using K = CapabilityCondition::Kind;
  switch (c.kind()) {
    case K::True: return "true";
    case K::Subset:
      if (singleton_literal(c.left_expr())) return to_string(c.left_expr().literal[0]) + " in " + to_string(c.right_expr());
      return to_string(c.left_expr()) + " subset " + to_string(c.right_expr());
    case K::Equal: return to_string(c.left_expr()) + " == " + to_string(c.right_expr());
    case K::Not: {
      const auto& inner = c.lhs();
      if (inner.kind() == K::Subset) {
        if (singleton_literal(inner.left_expr()))
          return to_string(inner.left_expr().literal[0]) + " notin " + to_string(inner.right_expr());
        return to_string(inner.left_expr()) + " notsubset " + to_string(inner.right_expr());
      }
      if (inner.kind() == K::Equal) return to_string(inner.left_expr()) + " != " + to_string(inner.right_expr());
      if (cap_binary(inner)) return "not (" + print_cap(inner) + ")";
      return "not " + print_cap(inner);
    }
    case K::And:
    case K::Or: {
      const char* word = c.kind() == K::And ? " and " : " or ";
      std::string left = print_cap(c.lhs());
      if (cap_binary(c.lhs()) && c.lhs().kind() != c.kind()) left = "(" + left + ")";
      std::string right = print_cap(c.rhs());
      if (cap_binary(c.rhs())) right = "(" + right + ")";
      return left + word + right;
    }
  }
  return "?";
}

}  // namespace

std::string to_string(const CapabilityCondition& cond) { return print_cap(cond); }

bool eval_capability_condition(const CapabilityCondition& cond, const CapabilitySet& y, const Assignment& alpha) {
  return cond.evaluate(y, alpha);
}

}  // namespace cpsfuzz

#include <cctype>
#include <charconv>
#include <string>
#include <vector>

#include "cpsfuzz/condition.hpp"
#include "cpsfuzz/errors.hpp"

namespace cpsfuzz {

namespace {

enum class Tok { Ident, Number, Underscore, LParen, RParen, LBracket, RBracket, LBrace, RBrace, Comma, Op, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

// Multi-byte spellings accepted as aliases of the ASCII operators.
struct Alias {
  std::string_view utf8;
  std::string_view ascii;
};

constexpr Alias kAliases[] = {
    {"≤", "<="},      {"≥", ">="},    {"≠", "!="},        {"∧", "and"},
    {"∨", "or"},      {"¬", "not"},   {"∈", "in"},        {"∉", "notin"},
    {"⊆", "subset"},  {"⊄", "notsubset"}, {"⊈", "notsubset"}, {"∅", "{}"},
};

std::vector<Token> lex(std::string_view text, SourcePos origin) {
  std::vector<Token> out;
  std::size_t line = origin.line;
  std::size_t col = origin.column;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token tok;
    tok.pos = {line, col};
    bool matched_alias = false;
    for (const auto& a : kAliases) {
      if (text.substr(i, a.utf8.size()) == a.utf8) {
        if (a.ascii == "{}") {
          out.push_back({Tok::LBrace, "{", tok.pos});
          out.push_back({Tok::RBrace, "}", tok.pos});
        } else {
          bool word = std::isalpha(static_cast<unsigned char>(a.ascii[0]));
          out.push_back({word ? Tok::Ident : Tok::Op, std::string(a.ascii), tok.pos});
        }
        advance(a.utf8.size());
        matched_alias = true;
        break;
      }
    }
    if (matched_alias) continue;

    bool signed_number = (c == '-' || c == '+') && i + 1 < text.size() &&
                         (std::isdigit(static_cast<unsigned char>(text[i + 1])) || text[i + 1] == '.');
    if (std::isdigit(static_cast<unsigned char>(c)) || signed_number ||
        (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i + (signed_number ? 1 : 0);
      while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '.')) ++j;
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '-' || text[k] == '+')) ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          j = k;
          while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        }
      }
      tok.kind = Tok::Number;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(tok);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      tok.text = std::string(text.substr(i, j - i));
      tok.kind = tok.text == "_" ? Tok::Underscore : Tok::Ident;
      advance(j - i);
      out.push_back(tok);
      continue;
    }
    static constexpr std::string_view two[] = {"<=", ">=", "==", "!=", "&&", "||"};
    bool got = false;
    for (auto op : two) {
      if (text.substr(i, 2) == op) {
        tok.kind = Tok::Op;
        tok.text = std::string(op);
        if (op == "&&") { tok.kind = Tok::Ident; tok.text = "and"; }
        if (op == "||") { tok.kind = Tok::Ident; tok.text = "or"; }
        advance(2);
        out.push_back(tok);
        got = true;
        break;
      }
    }
    if (got) continue;
    tok.text = std::string(1, c);
    switch (c) {
      case '(': tok.kind = Tok::LParen; break;
      case ')': tok.kind = Tok::RParen; break;
      case '[': tok.kind = Tok::LBracket; break;
      case ']': tok.kind = Tok::RBracket; break;
      case '{': tok.kind = Tok::LBrace; break;
      case '}': tok.kind = Tok::RBrace; break;
      case ',': tok.kind = Tok::Comma; break;
      case '<':
      case '>':
      case '=': tok.kind = Tok::Op; break;
      case '!': tok.kind = Tok::Ident; tok.text = "not"; break;
      default: throw ParseError("unexpected character '" + tok.text + "'", line, col);
    }
    advance(1);
    out.push_back(tok);
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, SourcePos origin) : toks_(lex(text, origin)) {}

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(at_ + ahead, toks_.size() - 1)]; }
  Token take() {
    Token t = peek();
    if (at_ < toks_.size() - 1) ++at_;
    return t;
  }
  bool at_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }
  bool at_end() const { return peek().kind == Tok::End; }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError("expected " + what + ", found " + found, t.pos.line, t.pos.column);
  }

  Token expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) fail(std::string(what));
    return take();
  }

  void expect_end() {
    if (!at_end()) fail("end of input");
  }

  double number() {
    Token t = expect(Tok::Number, "number");
    double v = 0.0;
    std::string_view s = t.text;
    if (!s.empty() && s[0] == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
      throw ParseError("malformed number '" + t.text + "'", t.pos.line, t.pos.column);
    return v;
  }

  Capability capability() {
    expect(Tok::LBracket, "'['");
    Token comp = expect(Tok::Ident, "component name");
    expect(Tok::Comma, "','");
    std::string value;
    if (peek().kind == Tok::Ident) {
      value = take().text;
      if (value == "closed") value = "close";
    } else if (peek().kind == Tok::Number) {
      value = canonical_number(number());
    } else {
      fail("capability value");
    }
    expect(Tok::RBracket, "']'");
    return {comp.text, value};
  }

  CapabilitySet capability_set() {
    expect(Tok::LBrace, "'{'");
    std::vector<Capability> caps;
    if (peek().kind != Tok::RBrace) {
      caps.push_back(capability());
      while (peek().kind == Tok::Comma) {
        take();
        caps.push_back(capability());
      }
    }
    expect(Tok::RBrace, "'}'");
    return CapabilitySet(std::move(caps));
  }

  // --- sensor conditions ---

  SensorCondition sensor_or() {
    SensorCondition lhs = sensor_and();
    while (at_word("or")) {
      take();
      lhs = SensorCondition::disjunction(lhs, sensor_and());
    }
    return lhs;
  }

  SensorCondition sensor_and() {
    SensorCondition lhs = sensor_not();
    while (at_word("and")) {
      take();
      lhs = SensorCondition::conjunction(lhs, sensor_not());
    }
    return lhs;
  }

  SensorCondition sensor_not() {
    if (at_word("not")) {
      take();
      return SensorCondition::negation(sensor_not());
    }
    return sensor_atom();
  }

  static Comparison flip(Comparison op) {
    switch (op) {
      case Comparison::Less: return Comparison::Greater;
      case Comparison::LessEqual: return Comparison::GreaterEqual;
      case Comparison::GreaterEqual: return Comparison::LessEqual;
      case Comparison::Greater: return Comparison::Less;
      case Comparison::Equal: return Comparison::Equal;
    }
    return op;
  }

  Comparison comparison() {
    if (peek().kind != Tok::Op) fail("comparison operator");
    const std::string& t = peek().text;
    Comparison op;
    if (t == "<") op = Comparison::Less;
    else if (t == "<=") op = Comparison::LessEqual;
    else if (t == "=" || t == "==") op = Comparison::Equal;
    else if (t == ">=") op = Comparison::GreaterEqual;
    else if (t == ">") op = Comparison::Greater;
    else fail("comparison operator");
    take();
    return op;
  }

  SensorCondition sensor_atom() {
    if (at_word("true")) {
      take();
      return SensorCondition::truth();
    }
    if (at_word("false")) {
      take();
      return SensorCondition::negation(SensorCondition::truth());
    }
    if (peek().kind == Tok::LParen) {
      take();
      SensorCondition inner = sensor_or();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (peek().kind == Tok::Number) {
      double c = number();
      Comparison op = comparison();
      Token s = expect(Tok::Ident, "sensor name");
      return SensorCondition::compare(s.text, flip(op), c);
    }
    if (peek().kind == Tok::Ident && !is_keyword(peek().text)) {
      Token s = take();
      Comparison op = comparison();
      return SensorCondition::compare(s.text, op, number());
    }
    fail("sensor comparison");
  }

  // --- capability conditions ---

  static bool is_keyword(const std::string& w) {
    return w == "and" || w == "or" || w == "not" || w == "true" || w == "false" || w == "in" || w == "notin" ||
           w == "subset" || w == "notsubset";
  }

  CapabilityCondition cap_or() {
    CapabilityCondition lhs = cap_and();
    while (at_word("or")) {
      take();
      lhs = CapabilityCondition::disjunction(lhs, cap_and());
    }
    return lhs;
  }

  CapabilityCondition cap_and() {
    CapabilityCondition lhs = cap_not();
    while (at_word("and")) {
      take();
      lhs = CapabilityCondition::conjunction(lhs, cap_not());
    }
    return lhs;
  }

  CapabilityCondition cap_not() {
    if (at_word("not")) {
      take();
      return CapabilityCondition::negation(cap_not());
    }
    return cap_atom();
  }

  SetExpr set_expr() {
    switch (peek().kind) {
      case Tok::Underscore: take(); return SetExpr::placeholder();
      case Tok::LBrace: return SetExpr::set(capability_set());
      case Tok::Ident:
        if (!is_keyword(peek().text)) return SetExpr::var(take().text);
        break;
      default: break;
    }
    fail("set expression ('_', variable or {...})");
  }

  CapabilityCondition cap_atom() {
    if (at_word("true")) {
      take();
      return CapabilityCondition::truth();
    }
    if (at_word("false")) {
      take();
      return CapabilityCondition::negation(CapabilityCondition::truth());
    }
    if (peek().kind == Tok::LParen) {
      take();
      CapabilityCondition inner = cap_or();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (peek().kind == Tok::LBracket) {
      Capability cap = capability();
      if (at_word("in")) {
        take();
        return CapabilityCondition::member(cap, set_expr());
      }
      if (at_word("notin")) {
        take();
        return CapabilityCondition::non_member(cap, set_expr());
      }
      fail("'in' or 'notin'");
    }
    SetExpr lhs = set_expr();
    if (at_word("subset")) {
      take();
      return CapabilityCondition::subset(lhs, set_expr());
    }
    if (at_word("notsubset")) {
      take();
      return CapabilityCondition::not_subset(lhs, set_expr());
    }
    if (peek().kind == Tok::Op) {
      const std::string op = peek().text;
      if (op == "==" || op == "=") {
        take();
        return CapabilityCondition::equal(lhs, set_expr());
      }
      if (op == "!=") {
        take();
        return CapabilityCondition::not_equal(lhs, set_expr());
      }
      if (op == "<=") {
        take();
        return CapabilityCondition::subset(lhs, set_expr());
      }
    }
    // A bare literal set means "exactly this set".
    if (lhs.kind == SetExpr::Kind::Literal) return CapabilityCondition::exactly(lhs.literal);
    fail("relation (==, !=, subset, notsubset)");
  }

 private:
  std::vector<Token> toks_;
  std::size_t at_ = 0;
};

bool blank(std::string_view text) {
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

SensorCondition parse_sensor_condition(std::string_view text, SourcePos origin) {
  if (blank(text)) return SensorCondition::truth();
  Parser p(text, origin);
  SensorCondition out = p.sensor_or();
  p.expect_end();
  return out;
}

CapabilityCondition parse_capability_condition(std::string_view text, SourcePos origin) {
  if (blank(text)) return CapabilityCondition::truth();
  Parser p(text, origin);
  CapabilityCondition out = p.cap_or();
  p.expect_end();
  return out;
}

Capability parse_capability(std::string_view text, SourcePos origin) {
  Parser p(text, origin);
  Capability out = p.capability();
  p.expect_end();
  return out;
}

CapabilitySet parse_capability_set(std::string_view text, SourcePos origin) {
  Parser p(text, origin);
  CapabilitySet out = p.capability_set();
  p.expect_end();
  return out;
}

CapabilityHistory parse_history(std::string_view text, SourcePos origin) {
  auto first = text.find_first_not_of(" \t\r\n");
  auto last = text.find_last_not_of(" \t\r\n");
  if (first != std::string_view::npos) {
    auto word = text.substr(first, last - first + 1);
    if (word == "eps" || word == "\u03b5") return {};
  }
  Parser p(text, origin);
  CapabilityHistory out;
  while (!p.at_end()) out.push_back(p.capability_set());
  return out;
}

std::vector<Capability> parse_capability_list(std::string_view text, SourcePos origin) {
  Parser p(text, origin);
  std::vector<Capability> out;
  while (!p.at_end()) {
    out.push_back(p.capability());
    if (p.peek().kind == Tok::Comma) p.take();
  }
  return out;
}

}  // namespace cpsfuzz

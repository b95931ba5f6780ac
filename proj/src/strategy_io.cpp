#include "cpsfuzz/strategy_io.hpp"

#include <cctype>
#include <sstream>

#include "cpsfuzz/errors.hpp"
#include "cpsfuzz/plant_io.hpp"

namespace cpsfuzz {

namespace {

bool space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

struct Word {
  std::string text;
  std::size_t column;
};

std::vector<Word> words(std::string_view line, std::size_t from) {
  std::vector<Word> out;
  std::size_t i = from;
  while (i < line.size()) {
    while (i < line.size() && space(line[i])) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !space(line[j])) ++j;
    out.push_back({std::string(line.substr(i, j - i)), i + 1});
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s, std::size_t& offset) {
  while (!s.empty() && space(s.front())) {
    s.remove_prefix(1);
    ++offset;
  }
  while (!s.empty() && space(s.back())) s.remove_suffix(1);
  return s;
}

void check_state_name(const Word& w, std::size_t line) {
  if (w.text.find("->") != std::string::npos || w.text.find(':') != std::string::npos)
    throw ParseError("state name '" + w.text + "' may not contain '->' or ':'", line, w.column);
}

}  // namespace

Strategy parse_strategy(std::string_view text) {
  Strategy s;
  std::optional<std::string> initial;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    pos = end + 1;

    std::size_t first = 0;
    while (first < line.size() && space(line[first])) ++first;
    if (first == line.size() || line[first] == '#') continue;

    auto ws = words(line, first);
    const std::string& head = ws[0].text;
    if (head == "strategy") {
      if (ws.size() != 2) throw ParseError("expected 'strategy <name>'", line_no, ws[0].column);
      s.set_name(ws[1].text);
    } else if (head == "variables") {
      for (std::size_t i = 1; i < ws.size(); ++i) s.add_variable(ws[i].text);
    } else if (head == "initial") {
      if (ws.size() != 2) throw ParseError("expected 'initial <state>'", line_no, ws[0].column);
      check_state_name(ws[1], line_no);
      initial = ws[1].text;
    } else if (head == "states") {
      for (std::size_t i = 1; i < ws.size(); ++i) {
        check_state_name(ws[i], line_no);
        s.add_state(ws[i].text);
      }
    } else if (head == "capabilities") {
      std::size_t rest = ws[0].column - 1 + head.size();
      auto caps = parse_capability_list(line.substr(rest), {line_no, rest + 1});
      auto all = s.capabilities();
      all.insert(all.end(), caps.begin(), caps.end());
      s.set_capabilities(std::move(all));
    } else {
      std::size_t arrow = line.find("->");
      if (arrow == std::string_view::npos)
        throw ParseError("expected a declaration or '<state> -> <state> : <guard> |- <condition>'", line_no,
                         first + 1);
      std::size_t from_off = 0;
      std::string_view from = trim(line.substr(0, arrow), from_off);
      if (from.empty() || from.find_first_of(" \t") != std::string_view::npos)
        throw ParseError("expected a single source state before '->'", line_no, from_off + 1);
      std::size_t colon = line.find(':', arrow + 2);
      if (colon == std::string_view::npos) throw ParseError("expected ':' after the target state", line_no, arrow + 3);
      std::size_t to_off = arrow + 2;
      std::string_view to = trim(line.substr(arrow + 2, colon - arrow - 2), to_off);
      if (to.empty() || to.find_first_of(" \t") != std::string_view::npos)
        throw ParseError("expected a single target state after '->'", line_no, to_off + 1);
      std::size_t turnstile = line.find("|-", colon + 1);
      if (turnstile == std::string_view::npos) throw ParseError("expected '|-' between guard and condition", line_no, colon + 2);
      std::string_view gamma = line.substr(colon + 1, turnstile - colon - 1);
      std::string_view phi = line.substr(turnstile + 2);
      SensorCondition g = parse_sensor_condition(gamma, {line_no, colon + 2});
      CapabilityCondition p = parse_capability_condition(phi, {line_no, turnstile + 3});
      s.add_transition(std::string(from), std::string(to), std::move(g), std::move(p));
    }
  }
  if (!initial) {
    if (s.states().empty()) throw ParseError("strategy declares no states", line_no, 1);
    s.set_initial(std::size_t{0});
  } else {
    s.set_initial(*initial);
  }
  return s;
}

std::string print_strategy(const Strategy& s) {
  std::ostringstream out;
  out << "strategy " << s.name() << "\n";
  if (!s.variables().empty()) {
    out << "variables";
    for (const auto& v : s.variables()) out << " " << v;
    out << "\n";
  }
  if (!s.capabilities().empty()) {
    out << "capabilities";
    for (const auto& c : s.capabilities()) out << " " << to_string(c);
    out << "\n";
  }
  out << "initial " << s.state_name(s.initial()) << "\n";
  out << "states";
  for (const auto& st : s.states()) out << " " << st;
  out << "\n";
  for (const auto& t : s.transitions()) {
    out << s.state_name(t.from) << " -> " << s.state_name(t.to) << " : " << to_string(t.gamma) << " |- "
        << to_string(t.phi) << "\n";
  }
  return out.str();
}

Strategy load_strategy(const std::filesystem::path& path) { return parse_strategy(read_text_file(path)); }

void save_strategy(const Strategy& strategy, const std::filesystem::path& path) {
  write_text_file(path, print_strategy(strategy));
}

}  // namespace cpsfuzz

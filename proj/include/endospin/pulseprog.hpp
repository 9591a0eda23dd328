#pragma once

// Line-oriented pulse-program language (.pulse files):
//
//   init 0.7071|3/2,-10> + 0.7071|-3/2,-10>
//   set bz 14.3mT
//   pulse freq=3216.5MHz rabi=30MHz angle=1pi [phase=0pi] [mode=ideal|detuned]
//   sweep bz from=0.0143T to=0.0248T rate=1e-6T/s [gap=1e-7K]
//   wait 10ns
//   measure fe8
//
// One statement per line, '#' starts a comment, keywords and units are
// case-insensitive.

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "endospin/protocol.hpp"

namespace endospin::pulse {

enum class DiagCode {
  unknown_keyword,
  malformed_number,
  missing_key,
  unknown_unit,
  duplicate_key,
  unknown_key,
  invalid_value,
  malformed_state,
  unexpected_token,
  misplaced_init,
};

inline const char* to_string(DiagCode c) {
  switch (c) {
    case DiagCode::unknown_keyword: return "unknown keyword";
    case DiagCode::malformed_number: return "malformed number";
    case DiagCode::missing_key: return "missing required key";
    case DiagCode::unknown_unit: return "unknown unit";
    case DiagCode::duplicate_key: return "duplicate key";
    case DiagCode::unknown_key: return "unknown key";
    case DiagCode::invalid_value: return "invalid value";
    case DiagCode::malformed_state: return "malformed state";
    case DiagCode::unexpected_token: return "unexpected token";
    case DiagCode::misplaced_init: return "misplaced init";
  }
  return "error";
}

struct Diagnostic {
  DiagCode code;
  int line = 0;
  int column = 0;
  std::string message;

  std::string str() const {
    return std::to_string(line) + ":" + std::to_string(column) + ": " + to_string(code) + ": " + message;
  }
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(Diagnostic d) : std::runtime_error(d.str()), diag_(std::move(d)) {}
  const Diagnostic& diagnostic() const noexcept { return diag_; }

 private:
  Diagnostic diag_;
};

struct InitTerm {
  double coefficient = 1.0;
  StateLabel state;
  bool operator==(const InitTerm&) const = default;
};

struct InitState {
  std::vector<InitTerm> terms;
  bool operator==(const InitState&) const = default;
};

struct SetField {
  double bz = 0;  // T
  bool operator==(const SetField&) const = default;
};

struct EsrPulse {
  double freq_mhz = 0;
  double rabi_mhz = 0;  // Omega / 2 pi
  double angle_pi = 1;  // flip angle in units of pi
  double phase_pi = 0;
  PulseMode mode = PulseMode::ideal;

  double rabi_rad_per_s() const { return 2.0 * std::numbers::pi * rabi_mhz * 1e6; }
  double duration() const { return angle_pi * std::numbers::pi / rabi_rad_per_s(); }
  bool operator==(const EsrPulse&) const = default;
};

struct FieldSweep {
  double from = 0;  // T
  double to = 0;    // T
  double rate = 0;  // T/s
  std::optional<double> gap;  // K

  double duration() const { return std::abs(to - from) / rate; }
  bool operator==(const FieldSweep&) const = default;
};

struct Wait {
  double seconds = 0;
  bool operator==(const Wait&) const = default;
};

struct Measure {
  bool operator==(const Measure&) const = default;
};

using Statement = std::variant<SetField, EsrPulse, FieldSweep, Wait, Measure>;

struct PulseProgram {
  std::optional<InitState> init;
  std::vector<Statement> statements;
  int init_line = 0;
  std::vector<int> lines;  // source line of each statement

  /// Programs compare by content; the source line map is ignored.
  bool operator==(const PulseProgram& o) const { return init == o.init && statements == o.statements; }
};

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

struct Token {
  std::string_view text;
  int column = 0;
};

/// Length of the longest decimal-number prefix of s, or 0.
inline std::size_t scan_number(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < s.size() && is_digit(s[i])) ++i, ++digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && is_digit(s[i])) ++i, ++digits;
  }
  if (digits == 0) return 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    std::size_t j = i + 1;
    if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
    if (j < s.size() && is_digit(s[j])) {
      while (j < s.size() && is_digit(s[j])) ++j;
      i = j;
    }
  }
  return i;
}

class LineParser {
 public:
  LineParser(int line) : line_(line) {}

  [[noreturn]] void fail(DiagCode code, int column, std::string message) const {
    throw ParseError({code, line_, column, std::move(message)});
  }

  /// Parses a number at the start of `text`; returns it and the unit suffix.
  std::pair<double, std::string_view> number_with_suffix(std::string_view text, int column) const {
    const std::size_t len = scan_number(text);
    if (len == 0) fail(DiagCode::malformed_number, column, "expected a number in '" + std::string(text) + "'");
    std::string_view digits = text.substr(0, len);
    if (digits.front() == '+') digits.remove_prefix(1);
    double value = 0.0;
    const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (res.ec != std::errc() || res.ptr != digits.data() + digits.size() || !std::isfinite(value)) {
      fail(DiagCode::malformed_number, column, "number out of range: '" + std::string(text.substr(0, len)) + "'");
    }
    const std::string_view rest = text.substr(len);
    if (!rest.empty() && (is_digit(rest.front()) || rest.front() == '.')) {
      fail(DiagCode::malformed_number, column, "malformed number '" + std::string(text) + "'");
    }
    return {value, rest};
  }

  /// Number followed by one of the listed units; returns the value times the unit's scale.
  double quantity(std::string_view text, int column, const std::map<std::string, double>& units) const {
    auto [value, suffix] = number_with_suffix(text, column);
    const auto it = units.find(lower(suffix));
    if (it == units.end()) {
      std::string allowed;
      for (const auto& [name, scale] : units) allowed += (allowed.empty() ? "" : ", ") + name;
      fail(DiagCode::unknown_unit, column + static_cast<int>(text.size() - suffix.size()),
           "unit '" + std::string(suffix) + "' (expected one of " + allowed + ")");
    }
    const double scaled = value * it->second;
    if (!std::isfinite(scaled)) fail(DiagCode::malformed_number, column, "number out of range");
    return scaled;
  }

  int line() const { return line_; }

 private:
  int line_;
};

inline const std::map<std::string, double>& field_units() {
  static const std::map<std::string, double> u{{"t", 1.0}, {"mt", 1e-3}};
  return u;
}
inline const std::map<std::string, double>& rate_units() {
  static const std::map<std::string, double> u{{"t/s", 1.0}, {"mt/s", 1e-3}};
  return u;
}
inline const std::map<std::string, double>& freq_units() {
  static const std::map<std::string, double> u{{"mhz", 1.0}, {"ghz", 1e3}};
  return u;
}
inline const std::map<std::string, double>& time_units() {
  static const std::map<std::string, double> u{{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}};
  return u;
}
inline const std::map<std::string, double>& pi_units() {
  static const std::map<std::string, double> u{{"pi", 1.0}};
  return u;
}
inline const std::map<std::string, double>& energy_units() {
  static const std::map<std::string, double> u{{"k", 1.0}, {"mk", 1e-3}};
  return u;
}

struct KeyValue {
  std::string key;
  std::string_view value;
  int key_column = 0;
  int value_column = 0;
};

inline std::vector<KeyValue> key_values(const LineParser& lp, const std::vector<Token>& toks, std::size_t first,
                                        const std::vector<std::string>& allowed) {
  std::vector<KeyValue> out;
  for (std::size_t i = first; i < toks.size(); ++i) {
    const auto eq = toks[i].text.find('=');
    if (eq == std::string_view::npos) {
      lp.fail(DiagCode::unexpected_token, toks[i].column, "expected key=value, got '" + std::string(toks[i].text) + "'");
    }
    KeyValue kv{lower(toks[i].text.substr(0, eq)), toks[i].text.substr(eq + 1), toks[i].column,
                toks[i].column + static_cast<int>(eq) + 1};
    if (std::find(allowed.begin(), allowed.end(), kv.key) == allowed.end()) {
      lp.fail(DiagCode::unknown_key, kv.key_column, "unknown key '" + kv.key + "'");
    }
    for (const auto& seen : out) {
      if (seen.key == kv.key) lp.fail(DiagCode::duplicate_key, kv.key_column, "key '" + kv.key + "' given twice");
    }
    if (kv.value.empty()) lp.fail(DiagCode::malformed_number, kv.value_column, "empty value for '" + kv.key + "'");
    out.push_back(kv);
  }
  return out;
}

inline const KeyValue* find_key(const std::vector<KeyValue>& kvs, std::string_view key) {
  for (const auto& kv : kvs)
    if (kv.key == key) return &kv;
  return nullptr;
}

inline const KeyValue& require_key(const LineParser& lp, const std::vector<KeyValue>& kvs, std::string_view key,
                                   int column) {
  const KeyValue* kv = find_key(kvs, key);
  if (!kv) lp.fail(DiagCode::missing_key, column, "missing required key '" + std::string(key) + "'");
  return *kv;
}

// Parses "[sign][coef]|n,m> (+|- [coef]|n,m>)*" starting at `text` (column `col0`).
class StateExprParser {
 public:
  StateExprParser(const LineParser& lp, std::string_view text, int col0) : lp_(lp), s_(text), col0_(col0) {}

  InitState parse() {
    InitState st;
    skip_ws();
    if (at_end()) lp_.fail(DiagCode::malformed_state, column(), "init needs a state such as |3/2,-10>");
    double sign = 1.0;
    bool first = true;
    while (true) {
      skip_ws();
      if (!first) {
        if (at_end()) break;
        if (peek() == '+') sign = 1.0;
        else if (peek() == '-') sign = -1.0;
        else lp_.fail(DiagCode::unexpected_token, column(), "expected '+' or '-' between terms");
        ++pos_;
        skip_ws();
      }
      InitTerm term = parse_term();
      term.coefficient *= sign;
      for (const auto& t : st.terms) {
        if (t.state == term.state) lp_.fail(DiagCode::duplicate_key, column(), "state " + term.state.str() + " listed twice");
      }
      st.terms.push_back(term);
      first = false;
      sign = 1.0;
    }
    bool any = false;
    for (const auto& t : st.terms) any = any || t.coefficient != 0.0;
    if (!any) lp_.fail(DiagCode::invalid_value, col0_, "initial state has zero norm");
    return st;
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  int column() const { return col0_ + static_cast<int>(pos_); }
  void skip_ws() {
    while (!at_end() && is_space(peek())) ++pos_;
  }

  InitTerm parse_term() {
    InitTerm term;
    if (!at_end() && peek() != '|') {
      const int col = column();
      const std::size_t len = scan_number(s_.substr(pos_));
      if (len == 0) lp_.fail(DiagCode::malformed_number, col, "expected a coefficient or '|'");
      auto [value, rest] = lp_.number_with_suffix(s_.substr(pos_, len), col);
      (void)rest;
      term.coefficient = value;
      pos_ += len;
      skip_ws();
      if (!at_end() && peek() == '*') {
        ++pos_;
        skip_ws();
      }
    }
    expect('|');
    skip_ws();
    const int ncol = column();
    const HalfInt n = parse_halfint();
    skip_ws();
    expect(',');
    skip_ws();
    const int mcol = column();
    const HalfInt m = parse_halfint();
    skip_ws();
    expect('>');
    if (!valid_fullerene_projection(n)) lp_.fail(DiagCode::malformed_state, ncol, "n must be one of +-1/2, +-3/2");
    if (!valid_fe8_projection(m)) lp_.fail(DiagCode::malformed_state, mcol, "m must be an integer in -10..10");
    term.state = {n, m};
    return term;
  }

  void expect(char c) {
    if (at_end() || peek() != c) lp_.fail(DiagCode::malformed_state, column(), std::string("expected '") + c + "'");
    ++pos_;
  }

  HalfInt parse_halfint() {
    const int col = column();
    int sign = 1;
    if (!at_end() && (peek() == '+' || peek() == '-')) {
      sign = peek() == '-' ? -1 : 1;
      ++pos_;
    }
    int value = 0;
    std::size_t digits = 0;
    while (!at_end() && is_digit(peek()) && digits < 4) {
      value = value * 10 + (peek() - '0');
      ++pos_;
      ++digits;
    }
    if (digits == 0 || (!at_end() && is_digit(peek()))) lp_.fail(DiagCode::malformed_state, col, "expected a spin projection");
    if (!at_end() && peek() == '/') {
      ++pos_;
      if (at_end() || peek() != '2') lp_.fail(DiagCode::malformed_state, column(), "half-integers are written k/2");
      ++pos_;
      if (value % 2 == 0) lp_.fail(DiagCode::malformed_state, col, "k/2 needs an odd k");
      return HalfInt::from_twice(sign * value);
    }
    return HalfInt(sign * value);
  }

  const LineParser& lp_;
  std::string_view s_;
  int col0_;
  std::size_t pos_ = 0;
};

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

inline PulseProgram parse(std::string_view source) {
  using namespace detail;
  PulseProgram prog;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= source.size()) {
    std::size_t end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    std::string_view line = source.substr(start, end - start);
    ++line_no;
    const std::size_t next = end + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<Token> toks;
    for (std::size_t i = 0; i < line.size();) {
      if (is_space(line[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && !is_space(line[j])) ++j;
      toks.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
      i = j;
    }

    if (!toks.empty()) {
      const LineParser lp(line_no);
      const std::string kw = lower(toks[0].text);
      auto expect_word = [&](std::size_t idx, std::string_view word) {
        if (idx >= toks.size()) lp.fail(DiagCode::missing_key, toks[0].column, "expected '" + std::string(word) + "'");
        if (lower(toks[idx].text) != word) {
          lp.fail(DiagCode::unexpected_token, toks[idx].column, "expected '" + std::string(word) + "'");
        }
      };
      auto no_more = [&](std::size_t idx) {
        if (idx < toks.size()) lp.fail(DiagCode::unexpected_token, toks[idx].column, "unexpected '" + std::string(toks[idx].text) + "'");
      };

      if (kw == "init") {
        if (prog.init) lp.fail(DiagCode::misplaced_init, toks[0].column, "init given twice");
        if (!prog.statements.empty()) lp.fail(DiagCode::misplaced_init, toks[0].column, "init must precede all other statements");
        const std::size_t rest = static_cast<std::size_t>(toks[0].column - 1) + toks[0].text.size();
        StateExprParser sp(lp, line.substr(rest), static_cast<int>(rest) + 1);
        prog.init = sp.parse();
        prog.init_line = line_no;
      } else if (kw == "set") {
        expect_word(1, "bz");
        if (toks.size() < 3) lp.fail(DiagCode::missing_key, toks[1].column, "set bz needs a value such as 0.019T");
        no_more(3);
        prog.statements.push_back(SetField{lp.quantity(toks[2].text, toks[2].column, field_units())});
        prog.lines.push_back(line_no);
      } else if (kw == "pulse") {
        const auto kvs = key_values(lp, toks, 1, {"freq", "rabi", "angle", "phase", "mode"});
        EsrPulse pulse;
        const auto& f = require_key(lp, kvs, "freq", toks[0].column);
        const auto& r = require_key(lp, kvs, "rabi", toks[0].column);
        const auto& a = require_key(lp, kvs, "angle", toks[0].column);
        pulse.freq_mhz = lp.quantity(f.value, f.value_column, freq_units());
        pulse.rabi_mhz = lp.quantity(r.value, r.value_column, freq_units());
        pulse.angle_pi = lp.quantity(a.value, a.value_column, pi_units());
        if (!(pulse.freq_mhz > 0.0)) lp.fail(DiagCode::invalid_value, f.value_column, "freq must be positive");
        if (!(pulse.rabi_mhz > 0.0)) lp.fail(DiagCode::invalid_value, r.value_column, "rabi must be positive");
        if (!(pulse.angle_pi > 0.0)) lp.fail(DiagCode::invalid_value, a.value_column, "angle must be positive");
        if (const auto* ph = find_key(kvs, "phase")) pulse.phase_pi = lp.quantity(ph->value, ph->value_column, pi_units());
        if (const auto* md = find_key(kvs, "mode")) {
          const std::string mode = lower(md->value);
          if (mode == "ideal") pulse.mode = PulseMode::ideal;
          else if (mode == "detuned") pulse.mode = PulseMode::detuned;
          else lp.fail(DiagCode::invalid_value, md->value_column, "mode must be ideal or detuned");
        }
        prog.statements.push_back(pulse);
        prog.lines.push_back(line_no);
      } else if (kw == "sweep") {
        expect_word(1, "bz");
        const auto kvs = key_values(lp, toks, 2, {"from", "to", "rate", "gap"});
        FieldSweep sw;
        const auto& from = require_key(lp, kvs, "from", toks[0].column);
        const auto& to = require_key(lp, kvs, "to", toks[0].column);
        const auto& rate = require_key(lp, kvs, "rate", toks[0].column);
        sw.from = lp.quantity(from.value, from.value_column, field_units());
        sw.to = lp.quantity(to.value, to.value_column, field_units());
        sw.rate = lp.quantity(rate.value, rate.value_column, rate_units());
        if (!(sw.rate > 0.0)) lp.fail(DiagCode::invalid_value, rate.value_column, "rate must be positive");
        if (sw.from == sw.to) lp.fail(DiagCode::invalid_value, to.value_column, "sweep must change the field");
        if (const auto* g = find_key(kvs, "gap")) {
          sw.gap = lp.quantity(g->value, g->value_column, energy_units());
          if (!(*sw.gap >= 0.0)) lp.fail(DiagCode::invalid_value, g->value_column, "gap must be non-negative");
        }
        if (!std::isfinite(sw.duration()) || !(sw.duration() > 0.0)) {
          lp.fail(DiagCode::invalid_value, rate.value_column, "sweep duration must be positive and finite");
        }
        prog.statements.push_back(sw);
        prog.lines.push_back(line_no);
      } else if (kw == "wait") {
        if (toks.size() < 2) lp.fail(DiagCode::missing_key, toks[0].column, "wait needs a duration such as 10ns");
        no_more(2);
        const double t = lp.quantity(toks[1].text, toks[1].column, time_units());
        if (!(t > 0.0)) lp.fail(DiagCode::invalid_value, toks[1].column, "duration must be positive");
        prog.statements.push_back(Wait{t});
        prog.lines.push_back(line_no);
      } else if (kw == "measure") {
        expect_word(1, "fe8");
        no_more(2);
        prog.statements.push_back(Measure{});
        prog.lines.push_back(line_no);
      } else {
        lp.fail(DiagCode::unknown_keyword, toks[0].column, "unknown keyword '" + std::string(toks[0].text) + "'");
      }
    }

    if (end == source.size()) break;
    start = next;
  }
  return prog;
}

/// Canonical text: lower-case keywords, SI units, shortest round-trip numbers.
inline std::string serialize(const PulseProgram& prog) {
  using detail::format_number;
  std::string out;
  if (prog.init) {
    out += "init ";
    bool first = true;
    for (const auto& t : prog.init->terms) {
      const bool neg = std::signbit(t.coefficient);
      if (first) out += (neg ? "-" : "");
      else out += neg ? " - " : " + ";
      out += format_number(std::abs(t.coefficient)) + t.state.str();
      first = false;
    }
    out += "\n";
  }
  for (const auto& st : prog.statements) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, SetField>) {
            out += "set bz " + format_number(s.bz) + "T";
          } else if constexpr (std::is_same_v<T, EsrPulse>) {
            out += "pulse freq=" + format_number(s.freq_mhz) + "MHz rabi=" + format_number(s.rabi_mhz) +
                   "MHz angle=" + format_number(s.angle_pi) + "pi phase=" + format_number(s.phase_pi) +
                   "pi mode=" + to_string(s.mode);
          } else if constexpr (std::is_same_v<T, FieldSweep>) {
            out += "sweep bz from=" + format_number(s.from) + "T to=" + format_number(s.to) +
                   "T rate=" + format_number(s.rate) + "T/s";
            if (s.gap) out += " gap=" + format_number(*s.gap) + "K";
          } else if constexpr (std::is_same_v<T, Wait>) {
            out += "wait " + format_number(s.seconds) + "s";
          } else {
            out += "measure fe8";
          }
        },
        st);
    out += "\n";
  }
  return out;
}

enum class LintCode { pulse_bandwidth, no_resonance, multi_crossing, budget_exceeded };

inline const char* to_string(LintCode c) {
  switch (c) {
    case LintCode::pulse_bandwidth: return "pulse_bandwidth";
    case LintCode::no_resonance: return "no_resonance";
    case LintCode::multi_crossing: return "multi_crossing";
    case LintCode::budget_exceeded: return "budget_exceeded";
  }
  return "lint";
}

struct Lint {
  LintCode code;
  int line = 0;
  std::string message;
};

inline double program_duration(const PulseProgram& prog) {
  double t = 0.0;
  for (const auto& st : prog.statements) {
    if (const auto* p = std::get_if<EsrPulse>(&st)) t += p->duration();
    else if (const auto* s = std::get_if<FieldSweep>(&st)) t += s->duration();
    else if (const auto* w = std::get_if<Wait>(&st)) t += w->seconds;
  }
  return t;
}

/// Warnings only: pulses too broad to address a single Fe8 column, carriers
/// matching no column, sweeps crossing several ground-doublet crossings, and
/// programs that outlast the linewidth-limited dephasing time.
inline std::vector<Lint> validate(const PulseProgram& prog, const SystemParams& p,
                                  Convention convention = Convention::paper) {
  std::vector<Lint> lints;
  const double j_mhz = units::kelvin_to_mhz(std::abs(p.j_eff));
  double bz = 0.0;
  for (std::size_t i = 0; i < prog.statements.size(); ++i) {
    const int line = i < prog.lines.size() ? prog.lines[i] : 0;
    const auto& st = prog.statements[i];
    if (const auto* set = std::get_if<SetField>(&st)) {
      bz = set->bz;
    } else if (const auto* pulse = std::get_if<EsrPulse>(&st)) {
      if (pulse->rabi_mhz >= j_mhz) {
        lints.push_back({LintCode::pulse_bandwidth, line,
                         "pulse bandwidth " + detail::format_number(pulse->rabi_mhz) + " MHz is not narrower than J = " +
                             detail::format_number(j_mhz) + " MHz; neighbouring Fe8 columns will be driven"});
      }
      SystemParams q = p;
      q.rabi = pulse->rabi_rad_per_s();
      try {
        resonant_column(q, bz, pulse->freq_mhz);
      } catch (const PhysicsError& e) {
        lints.push_back({LintCode::no_resonance, line, e.what()});
      }
    } else if (const auto* sweep = std::get_if<FieldSweep>(&st)) {
      const auto inside = first_order_in_window(p, sweep->from, sweep->to);
      if (inside.size() > 1) {
        std::string where;
        for (const auto& cp : inside) where += (where.empty() ? "" : ", ") + detail::format_number(cp.bz_star) + " T";
        lints.push_back({LintCode::multi_crossing, line, "sweep crosses several ground-doublet crossings (" + where + ")"});
      }
      bz = sweep->to;
    }
  }
  const double total = program_duration(prog);
  const Budget budget = timing_budget(rabi_mhz(p), p.linewidth, 0.0, convention);
  if (total > budget.decoherence_time) {
    lints.push_back({LintCode::budget_exceeded, 0,
                     "program lasts " + detail::format_number(total) + " s, beyond the dephasing time " +
                         detail::format_number(budget.decoherence_time) + " s"});
  }
  return lints;
}

struct RunOptions {
  Model hold_model = Model::diagonal;
  std::optional<double> default_gap;  // K; otherwise computed with avoided_gap
  ReadoutMapping readout;
};

struct Measurement {
  int line = 0;
  double time = 0;  // s
  double bz = 0;    // T
  Readout readout;
};

struct RunResult {
  EvolutionResult evolution;
  std::vector<Measurement> measurements;
  std::vector<std::string> notes;
  double final_bz = 0;
};

inline QuantumState initial_state(const PulseProgram& prog) {
  if (!prog.init) return product_state({HalfInt::from_twice(3), HalfInt(-10)});
  Vector v = Vector::Zero(kProductDim);
  for (const auto& t : prog.init->terms) v(product_index(t.state)) += t.coefficient;
  QuantumState s(std::move(v), product_basis());
  s.normalize();
  return s;
}

/// Runs the program from its init state at Bz = 0. `set bz` is a sudden field
/// step; sweeps start with a sudden step to their `from` field.
inline RunResult execute(const PulseProgram& prog, const SystemParams& p, const RunOptions& opts = {}) {
  RunResult rr;
  QuantumState state = initial_state(prog);
  if (!prog.init) rr.notes.push_back("no init statement; starting from |3/2,-10>");
  double bz = 0.0;
  double t = 0.0;
  std::map<std::pair<StateLabel, StateLabel>, double> gap_cache;

  for (std::size_t i = 0; i < prog.statements.size(); ++i) {
    const int line = i < prog.lines.size() ? prog.lines[i] : 0;
    SegmentRecord rec;
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, SetField>) {
            rec.kind = "set_field";
            bz = s.bz;
          } else if constexpr (std::is_same_v<T, EsrPulse>) {
            rec.kind = "esr_pulse";
            SystemParams q = p;
            q.rabi = s.rabi_rad_per_s();
            state = esr_pulse(state, q, bz, s.freq_mhz, s.angle_pi * std::numbers::pi, s.phase_pi * std::numbers::pi,
                              s.mode);
            rec.duration = s.duration();
          } else if constexpr (std::is_same_v<T, FieldSweep>) {
            rec.kind = "field_sweep";
            bz = s.from;
            const double lo = std::min(s.from, s.to);
            const double hi = std::max(s.from, s.to);
            for (const auto& cp : enumerate_crossings(p, lo, hi)) {
              if (cp.order == CrossingOrder::higher_order) {
                rr.notes.push_back("line " + std::to_string(line) + ": higher-order crossing " + cp.state_a.str() +
                                   " / " + cp.state_b.str() + " at " + detail::format_number(cp.bz_star) +
                                   " T not modelled");
              }
            }
            // Split the ramp halfway between successive first-order crossings.
            auto crossings = first_order_in_window(p, lo, hi);
            if (s.from > s.to) std::reverse(crossings.begin(), crossings.end());
            double seg_from = s.from;
            for (std::size_t k = 0; k < crossings.size(); ++k) {
              CrossingPoint cp = crossings[k];
              const double seg_to = k + 1 < crossings.size() ? 0.5 * (cp.bz_star + crossings[k + 1].bz_star) : s.to;
              if (s.gap) {
                cp.gap = *s.gap;
              } else if (opts.default_gap) {
                cp.gap = *opts.default_gap;
              } else {
                const auto key = std::make_pair(cp.state_a, cp.state_b);
                auto it = gap_cache.find(key);
                if (it == gap_cache.end()) it = gap_cache.emplace(key, avoided_gap(cp.state_a, cp.state_b, p)).first;
                cp.gap = it->second;
              }
              state = sweep_through_crossing(state, cp, s.rate, p, SweepWindow{seg_from, seg_to});
              seg_from = seg_to;
            }
            if (crossings.empty()) {
              Vector amp = state.amplitudes();
              endospin::detail::ramp_phases(amp, p, s.from, s.to, s.duration());
              state = QuantumState(std::move(amp), state.basis());
            }
            bz = s.to;
            rec.duration = s.duration();
          } else if constexpr (std::is_same_v<T, Wait>) {
            rec.kind = "wait";
            state = propagate_hold(state, p, bz, s.seconds, opts.hold_model);
            rec.duration = s.seconds;
          } else {
            rec.kind = "measure";
            rr.measurements.push_back({line, t, bz, readout_map(state, opts.readout)});
          }
        },
        prog.statements[i]);
    t += rec.duration;
    rec.populations = populations(state);
    rr.evolution.segments.push_back(std::move(rec));
  }
  rr.evolution.final_state = state;
  rr.evolution.elapsed = t;
  rr.final_bz = bz;
  return rr;
}

}  // namespace endospin::pulse

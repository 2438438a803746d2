// Copyright 2026 The shuffleopt Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shuffleopt/lp_text.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <vector>

namespace shuffleopt::milp {
namespace {

constexpr int kTermsPerLine = 8;

void append_terms(std::string& out, const std::vector<Term>& terms, const Model& m) {
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const double c = terms[k].coef;
    const std::string& name = m.variable(terms[k].var).name;
    if (k > 0 && k % kTermsPerLine == 0) out += "\n  ";
    if (k == 0) {
      out += format_number(c);
    } else {
      out += c < 0 ? " - " : " + ";
      out += format_number(std::abs(c));
    }
    out += ' ';
    out += name;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view tok, std::size_t line_no) {
  std::string buf(tok);
  char* end = nullptr;
  double v = std::strtod(buf.c_str(), &end);
  if (end == buf.c_str() || *end != '\0') {
    throw FormatError("line " + std::to_string(line_no) + ": malformed number '" + buf + "'");
  }
  return v;
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string write_lp(const Model& m) {
  std::string out;
  out += m.direction() == Direction::minimize ? "Minimize\n" : "Maximize\n";
  std::vector<Term> obj;
  for (std::size_t j = 0; j < m.num_variables(); ++j) {
    if (m.objective()[j] != 0.0) obj.push_back(Term{VarId{static_cast<int>(j)}, m.objective()[j]});
  }
  out += " obj: ";
  if (obj.empty() && m.num_variables() > 0) {
    out += "0 " + m.variables().front().name;
  } else {
    append_terms(out, obj, m);
  }
  out += "\nSubject To\n";
  for (const LinearConstraint& c : m.constraints()) {
    out += ' ';
    out += c.name;
    out += ": ";
    if (c.terms.empty()) {
      out += "0 " + m.variables().front().name;
    } else {
      append_terms(out, c.terms, m);
    }
    out += ' ';
    out += to_string(c.sense);
    out += ' ';
    out += format_number(c.rhs);
    out += '\n';
  }
  out += "Bounds\n";
  for (const Variable& v : m.variables()) {
    const bool lo_inf = std::isinf(v.lower);
    const bool hi_inf = std::isinf(v.upper);
    if (v.kind == VarKind::binary && v.lower == 0.0 && v.upper == 1.0) continue;
    out += ' ';
    if (lo_inf && hi_inf) {
      out += v.name + " free";
    } else if (!lo_inf && v.lower == v.upper) {
      out += v.name + " = " + format_number(v.lower);
    } else if (hi_inf) {
      out += v.name + " >= " + format_number(v.lower);
    } else {
      out += format_number(v.lower) + " <= " + v.name + " <= " + format_number(v.upper);
    }
    out += '\n';
  }
  if (m.num_binaries() > 0) out += "Binaries\n";
  int on_line = 0;
  for (const Variable& v : m.variables()) {
    if (v.kind != VarKind::binary) continue;
    out += ' ';
    out += v.name;
    if (++on_line == kTermsPerLine) {
      out += '\n';
      on_line = 0;
    }
  }
  if (on_line != 0) out += '\n';
  out += "End\n";
  return out;
}

Assignment parse_solution(std::string_view text, const Model& m) {
  Assignment a;
  bool have_status = false;
  std::vector<bool> seen(m.num_variables(), false);
  a.values.assign(m.num_variables(), 0.0);
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto sp = line.find_first_of(" \t");
    if (sp == std::string_view::npos) {
      throw FormatError("line " + std::to_string(line_no) + ": expected '<key> <value>'");
    }
    std::string_view key = line.substr(0, sp);
    std::string_view val = trim(line.substr(sp));
    if (val.find_first_of(" \t") != std::string_view::npos) {
      throw FormatError("line " + std::to_string(line_no) + ": trailing tokens");
    }
    if (key == "status") {
      auto st = parse_status(val);
      if (!st) throw FormatError("line " + std::to_string(line_no) + ": unknown status '" + std::string(val) + "'");
      a.status = *st;
      have_status = true;
    } else if (key == "objective") {
      a.objective_value = parse_real(val, line_no);
    } else {
      auto id = m.find(key);
      if (!id) throw FormatError("line " + std::to_string(line_no) + ": unknown variable '" + std::string(key) + "'");
      a.values[id->index] = parse_real(val, line_no);
      seen[id->index] = true;
    }
  }
  if (!have_status) throw FormatError("missing status line");
  if (a.status == SolveStatus::infeasible || a.status == SolveStatus::unbounded) {
    a.values.clear();
    return a;
  }
  bool any_seen = false;
  for (bool s : seen) any_seen = any_seen || s;
  if (a.status == SolveStatus::limit && !any_seen) {
    a.values.clear();
    return a;
  }
  for (bool s : seen) {
    if (!s) ++a.warnings;
  }
  return a;
}

std::string format_solution(const Model& m, const Assignment& a) {
  std::string out = "status " + std::string(to_string(a.status)) + "\n";
  out += "objective " + format_number(a.objective_value) + "\n";
  for (std::size_t j = 0; j < a.values.size() && j < m.num_variables(); ++j) {
    out += m.variables()[j].name + " " + format_number(a.values[j]) + "\n";
  }
  return out;
}

namespace {

enum class Section { none, objective, rows, bounds, binaries, generals, end };

struct Token {
  enum Kind { number, name, op, colon } kind;
  std::string text;
  double value = 0.0;
  std::size_t line = 0;
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::optional<Section> section_keyword(std::string_view line, Direction* dir) {
  std::string key = lower(line);
  std::string squeezed;
  for (char c : key) {
    if (!std::isspace(static_cast<unsigned char>(c))) squeezed += c;
  }
  if (squeezed == "minimize" || squeezed == "minimise" || squeezed == "minimum" || squeezed == "min") {
    *dir = Direction::minimize;
    return Section::objective;
  }
  if (squeezed == "maximize" || squeezed == "maximise" || squeezed == "maximum" || squeezed == "max") {
    *dir = Direction::maximize;
    return Section::objective;
  }
  if (squeezed == "subjectto" || squeezed == "suchthat" || squeezed == "st" || squeezed == "s.t.") return Section::rows;
  if (squeezed == "bounds" || squeezed == "bound") return Section::bounds;
  if (squeezed == "binaries" || squeezed == "binary" || squeezed == "bin") return Section::binaries;
  if (squeezed == "generals" || squeezed == "general" || squeezed == "gen" || squeezed == "integers") {
    return Section::generals;
  }
  if (squeezed == "end") return Section::end;
  return std::nullopt;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw FormatError("line " + std::to_string(line) + ": " + what);
}

void tokenize(std::string_view line, std::size_t line_no, std::vector<Token>& out) {
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::string rest(line.substr(i));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) fail(line_no, "malformed number");
      const std::size_t len = static_cast<std::size_t>(end - rest.c_str());
      out.push_back({Token::number, rest.substr(0, len), v, line_no});
      i += len;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
      out.push_back({Token::name, std::string(line.substr(i, j - i)), 0.0, line_no});
      i = j;
    } else if (c == ':') {
      out.push_back({Token::colon, ":", 0.0, line_no});
      ++i;
    } else if (c == '+' || c == '-') {
      out.push_back({Token::op, std::string(1, c), 0.0, line_no});
      ++i;
    } else if (c == '<' || c == '>' || c == '=') {
      std::string op(1, c);
      if (i + 1 < line.size() && (line[i + 1] == '=' || line[i + 1] == '<' || line[i + 1] == '>')) op += line[++i];
      ++i;
      if (op == "<" || op == "=<") op = "<=";
      if (op == ">" || op == "=>") op = ">=";
      if (op == "==") op = "=";
      if (op != "<=" && op != ">=" && op != "=") fail(line_no, "unknown operator '" + op + "'");
      out.push_back({Token::op, op, 0.0, line_no});
    } else {
      fail(line_no, std::string("unexpected character '") + c + "'");
    }
  }
}

bool is_sense(const Token& t) { return t.kind == Token::op && (t.text == "<=" || t.text == ">=" || t.text == "="); }

bool is_infinity(const Token& t) {
  if (t.kind != Token::name) return false;
  const std::string l = lower(t.text);
  return l == "inf" || l == "infinity";
}

struct NamedTerm {
  std::string var;
  double coef;
};

struct RowText {
  std::string name;
  std::vector<NamedTerm> terms;
  Sense sense = Sense::le;
  double rhs = 0.0;
};

struct ColumnText {
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = kInfinity;
  bool general = false;
  std::size_t line = 0;
};

class LpReader {
 public:
  Model read(std::string_view text) {
    Section sec = Section::none;
    std::size_t line_no = 0;
    std::vector<Token> pending;  // objective or row tokens, which may wrap
    auto flush = [&] {
      if (sec == Section::objective) parse_objective(pending);
      if (sec == Section::rows) parse_rows(pending);
      pending.clear();
    };
    while (!text.empty()) {
      const auto nl = text.find('\n');
      std::string_view line = text.substr(0, nl);
      text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
      ++line_no;
      if (const auto bs = line.find('\\'); bs != std::string_view::npos) line = line.substr(0, bs);
      line = trim(line);
      if (line.empty()) continue;
      if (sec == Section::end) fail(line_no, "text after End");
      Direction dir = direction_;
      if (const auto next = section_keyword(line, &dir)) {
        flush();
        if (*next == Section::objective) {
          if (saw_objective_) fail(line_no, "second objective section");
          saw_objective_ = true;
          direction_ = dir;
        }
        sec = *next;
        continue;
      }
      switch (sec) {
        case Section::none:
          fail(line_no, "expected Minimize or Maximize");
        case Section::objective:
        case Section::rows:
          tokenize(line, line_no, pending);
          break;
        case Section::bounds:
          parse_bound(line, line_no);
          break;
        case Section::binaries:
        case Section::generals:
          parse_names(line, line_no, sec == Section::generals);
          break;
        case Section::end:
          break;
      }
    }
    flush();
    if (!saw_objective_) throw FormatError("missing objective section");
    if (sec != Section::end) throw FormatError("missing End");
    return build();
  }

 private:
  ColumnText& column(const std::string& name, std::size_t line) {
    auto it = columns_.find(name);
    if (it == columns_.end()) {
      if (!is_valid_name(name)) fail(line, "invalid variable name '" + name + "'");
      order_.push_back(name);
      it = columns_.emplace(name, ColumnText{}).first;
      it->second.line = line;
    }
    return it->second;
  }

  // Reads `[+|-] [coef] name` terms from toks[i] until a sense token or the end.
  std::vector<NamedTerm> parse_terms(const std::vector<Token>& toks, std::size_t& i) {
    std::vector<NamedTerm> terms;
    while (i < toks.size() && !is_sense(toks[i])) {
      double sign = 1.0;
      bool have_sign = false;
      while (i < toks.size() && toks[i].kind == Token::op && (toks[i].text == "+" || toks[i].text == "-")) {
        if (toks[i].text == "-") sign = -sign;
        have_sign = true;
        ++i;
      }
      if (!terms.empty() && !have_sign) fail(toks[i - 1].line, "missing operator between terms");
      if (i >= toks.size()) fail(toks.back().line, "dangling sign");
      double coef = 1.0;
      if (toks[i].kind == Token::number) {
        coef = toks[i].value;
        ++i;
        if (i >= toks.size() || toks[i].kind != Token::name) fail(toks[i - 1].line, "constant terms are not supported");
      }
      if (toks[i].kind != Token::name) fail(toks[i].line, "expected a variable, got '" + toks[i].text + "'");
      column(toks[i].text, toks[i].line);
      terms.push_back({toks[i].text, sign * coef});
      ++i;
    }
    return terms;
  }

  void parse_objective(const std::vector<Token>& toks) {
    std::size_t i = 0;
    if (toks.size() >= 2 && toks[0].kind == Token::name && toks[1].kind == Token::colon) i = 2;
    objective_ = parse_terms(toks, i);
    if (i < toks.size()) fail(toks[i].line, "relational operator in the objective");
  }

  void parse_rows(const std::vector<Token>& toks) {
    std::size_t i = 0;
    while (i < toks.size()) {
      RowText row;
      if (i + 1 < toks.size() && toks[i].kind == Token::name && toks[i + 1].kind == Token::colon) {
        row.name = toks[i].text;
        i += 2;
      } else {
        row.name = "c" + std::to_string(rows_.size() + 1);
      }
      const std::size_t start_line = i < toks.size() ? toks[i].line : toks.back().line;
      row.terms = parse_terms(toks, i);
      if (i >= toks.size()) fail(start_line, "row '" + row.name + "' has no relational operator");
      row.sense = toks[i].text == "<=" ? Sense::le : toks[i].text == ">=" ? Sense::ge : Sense::eq;
      ++i;
      double sign = 1.0;
      while (i < toks.size() && toks[i].kind == Token::op && (toks[i].text == "+" || toks[i].text == "-")) {
        if (toks[i].text == "-") sign = -sign;
        ++i;
      }
      if (i >= toks.size() || toks[i].kind != Token::number) fail(start_line, "row '" + row.name + "' needs a numeric rhs");
      row.rhs = sign * toks[i].value;
      ++i;
      rows_.push_back(std::move(row));
    }
  }

  // A signed number or infinity at toks[i], advancing i.
  std::optional<double> value_at(const std::vector<Token>& toks, std::size_t& i) {
    std::size_t j = i;
    double sign = 1.0;
    if (j < toks.size() && toks[j].kind == Token::op && (toks[j].text == "+" || toks[j].text == "-")) {
      if (toks[j].text == "-") sign = -1.0;
      ++j;
    }
    if (j >= toks.size()) return std::nullopt;
    if (toks[j].kind == Token::number) {
      i = j + 1;
      return sign * toks[j].value;
    }
    if (is_infinity(toks[j])) {
      i = j + 1;
      return sign * kInfinity;
    }
    return std::nullopt;
  }

  void apply(ColumnText& c, const std::string& op, double v, bool value_first) {
    std::string o = op;
    if (value_first && o != "=") o = o == "<=" ? ">=" : "<=";
    if (o == "<=") c.upper = v;
    if (o == ">=") c.lower = v;
    if (o == "=") c.lower = c.upper = v;
  }

  void parse_bound(std::string_view line, std::size_t line_no) {
    std::vector<Token> toks;
    tokenize(line, line_no, toks);
    std::size_t i = 0;
    if (toks.size() == 2 && toks[0].kind == Token::name && lower(toks[1].text) == "free") {
      ColumnText& c = column(toks[0].text, line_no);
      c.lower = -kInfinity;
      c.upper = kInfinity;
      return;
    }
    const std::optional<double> lead = value_at(toks, i);
    if (lead) {
      if (i + 1 >= toks.size() || !is_sense(toks[i]) || toks[i + 1].kind != Token::name) fail(line_no, "malformed bound");
      const std::string op = toks[i].text;
      ColumnText& c = column(toks[i + 1].text, line_no);
      apply(c, op, *lead, true);
      i += 2;
      if (i == toks.size()) return;
      if (!is_sense(toks[i]) || toks[i].text != op) fail(line_no, "malformed bound");
      const std::string op2 = toks[i].text;
      ++i;
      const std::optional<double> tail = value_at(toks, i);
      if (!tail || i != toks.size()) fail(line_no, "malformed bound");
      apply(c, op2, *tail, false);
      return;
    }
    if (toks.size() < 3 || toks[0].kind != Token::name || !is_sense(toks[1])) fail(line_no, "malformed bound");
    i = 2;
    const std::optional<double> v = value_at(toks, i);
    if (!v || i != toks.size()) fail(line_no, "malformed bound");
    apply(column(toks[0].text, line_no), toks[1].text, *v, false);
  }

  void parse_names(std::string_view line, std::size_t line_no, bool general) {
    std::vector<Token> toks;
    tokenize(line, line_no, toks);
    for (const Token& t : toks) {
      if (t.kind != Token::name) fail(line_no, "expected variable names");
      ColumnText& c = column(t.text, line_no);
      if (general) {
        c.general = true;
      } else {
        c.kind = VarKind::binary;
      }
    }
  }

  Model build() {
    Model m;
    try {
      for (const std::string& name : order_) {
        ColumnText& c = columns_.at(name);
        if (c.general && c.kind != VarKind::binary) {
          const bool unit = c.lower >= 0.0 && c.upper <= 1.0 && !std::isinf(c.upper);
          if (!unit) fail(c.line, "general integer '" + name + "' must lie within [0, 1]");
          c.kind = VarKind::binary;
        }
        m.add_variable(Variable{name, c.kind, c.lower, c.upper});
      }
      auto resolve = [&m](const std::vector<NamedTerm>& named) {
        std::vector<Term> terms;
        for (const NamedTerm& t : named) terms.push_back(Term{*m.find(t.var), t.coef});
        return terms;
      };
      for (const RowText& r : rows_) m.add_constraint(LinearConstraint{r.name, resolve(r.terms), r.sense, r.rhs}, "lp_row");
      m.set_objective(direction_, resolve(objective_));
    } catch (const ModelError& e) {
      throw FormatError(e.what());
    }
    return m;
  }

  Direction direction_ = Direction::minimize;
  bool saw_objective_ = false;
  std::vector<NamedTerm> objective_;
  std::vector<RowText> rows_;
  std::vector<std::string> order_;
  std::map<std::string, ColumnText> columns_;
};

}  // namespace

Model read_lp(std::string_view text) { return LpReader{}.read(text); }

}  // namespace shuffleopt::milp

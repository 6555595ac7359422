// Copyright 2026 The qls Authors
//
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

#include "qls/cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qls/cohom.hpp"
#include "qls/errors.hpp"
#include "qls/products.hpp"
#include "qls/ttp.hpp"
#include "qls/twist.hpp"

namespace qls {
namespace {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Lexical rules shared by the file scanner and the expression parser.

bool name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' ||
         c == '[' || c == ']' || c == ',' || c == '\'' || c == '.';
}

bool valid_name(const std::string& s) {
  if (s.empty() || !name_start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), name_char);
}

[[noreturn]] void fail_at(const std::string& origin, int line, int col,
                          const std::string& msg) {
  std::string text = origin + ":" + std::to_string(line);
  if (col > 0) text += ":" + std::to_string(col);
  throw parse_error(text + ": " + msg, static_cast<std::size_t>(col),
                    static_cast<std::size_t>(line));
}

// ---------------------------------------------------------------------------
// Relation expressions: noncommutative polynomials in the generators with
// coefficients in the session field.

struct Token {
  enum Kind {
    number,
    name,
    plus,
    minus,
    star,
    slash,
    caret,
    lparen,
    rparen,
    end
  };
  Kind kind = end;
  std::string text;
  int col = 0;  // 1-based column in the original line
};

std::vector<Token> lex_line(const std::string& s, const std::string& origin,
                            int line, int col0) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    int col = col0 + static_cast<int>(i) + 1;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
        ++j;
      out.push_back({Token::number, s.substr(i, j - i), col});
      i = j;
      continue;
    }
    if (name_start(c)) {
      std::size_t j = i;
      while (j < s.size() && name_char(s[j])) ++j;
      out.push_back({Token::name, s.substr(i, j - i), col});
      i = j;
      continue;
    }
    Token::Kind k;
    switch (c) {
      case '+': k = Token::plus; break;
      case '-': k = Token::minus; break;
      case '*': k = Token::star; break;
      case '/': k = Token::slash; break;
      case '^': k = Token::caret; break;
      case '(': k = Token::lparen; break;
      case ')': k = Token::rparen; break;
      default:
        fail_at(origin, line, col,
                std::string("unexpected character '") + c + "'");
    }
    out.push_back({k, std::string(1, c), col});
    ++i;
  }
  out.push_back({Token::end, "", col0 + static_cast<int>(s.size()) + 1});
  return out;
}

struct DeglexLess {
  bool operator()(const MultiIndex& x, const MultiIndex& y) const {
    return deglex_less(x, y);
  }
};

// Words with coefficients, all degrees mixed; zero coefficients pruned.
using FreePoly = std::map<MultiIndex, Scalar, DeglexLess>;

void fp_add_term(FreePoly& p, const MultiIndex& w, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = p.find(w);
  if (it == p.end()) {
    p.emplace(w, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) p.erase(it);
}

FreePoly fp_add(const FreePoly& a, const FreePoly& b) {
  FreePoly out = a;
  for (const auto& [w, c] : b) fp_add_term(out, w, c);
  return out;
}

FreePoly fp_neg(const FreePoly& a) {
  FreePoly out;
  for (const auto& [w, c] : a) out.emplace(w, -c);
  return out;
}

FreePoly fp_mul(const FreePoly& a, const FreePoly& b) {
  FreePoly out;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) fp_add_term(out, wa.concat(wb), ca * cb);
  return out;
}

FreePoly fp_scale(const FreePoly& a, const Scalar& s) {
  FreePoly out;
  if (s.is_zero()) return out;
  for (const auto& [w, c] : a) out.emplace(w, c * s);
  return out;
}

bool fp_is_scalar(const FreePoly& p) {
  return p.empty() || (p.size() == 1 && p.begin()->first.degree() == 0);
}

class RelParser {
 public:
  RelParser(std::vector<Token> toks, std::string origin, int line,
            const FieldSpec& session, const std::vector<std::string>& params,
            const std::vector<std::string>& gens)
      : toks_(std::move(toks)),
        origin_(std::move(origin)),
        line_(line),
        session_(session),
        params_(params),
        gens_(gens),
        nv_(session.nvars()) {}

  FreePoly run() {
    FreePoly v = poly();
    if (cur().kind != Token::end) fail(cur(), "unexpected trailing input");
    return v;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    fail_at(origin_, line_, t.col, msg);
  }

  FreePoly poly() {
    bool neg = false;
    if (cur().kind == Token::plus || cur().kind == Token::minus)
      neg = take().kind == Token::minus;
    FreePoly v = term();
    if (neg) v = fp_neg(v);
    while (cur().kind == Token::plus || cur().kind == Token::minus) {
      bool m = take().kind == Token::minus;
      FreePoly t = term();
      v = fp_add(v, m ? fp_neg(t) : t);
    }
    return v;
  }

  FreePoly term() {
    FreePoly v = factor();
    while (cur().kind == Token::star || cur().kind == Token::slash) {
      Token op = take();
      FreePoly r = factor();
      if (op.kind == Token::slash) {
        if (!fp_is_scalar(r)) fail(op, "division by a non-scalar");
        if (r.empty()) fail(op, "division by zero");
        v = fp_scale(v, r.begin()->second.inv());
      } else {
        v = fp_mul(v, r);
      }
    }
    return v;
  }

  FreePoly factor() {
    FreePoly v = atom();
    if (cur().kind != Token::caret) return v;
    Token op = take();
    int sign = 1;
    if (cur().kind == Token::plus || cur().kind == Token::minus)
      sign = take().kind == Token::minus ? -1 : 1;
    if (cur().kind != Token::number) fail(cur(), "expected an exponent");
    Token etok = take();
    if (etok.text.size() > 2) fail(etok, "exponent out of range");
    int e = sign * std::stoi(etok.text);
    if (fp_is_scalar(v)) {
      Scalar base = v.empty() ? Scalar::zero(nv_) : v.begin()->second;
      if (base.is_zero() && e < 0) fail(op, "zero to a negative power");
      if (base.is_zero() && e == 0) base = Scalar::one(nv_);
      FreePoly out;
      Scalar powed = base.is_zero() ? base : base.pow(e);
      fp_add_term(out, MultiIndex::empty(), powed);
      return out;
    }
    if (e < 0) fail(op, "negative power of a generator word");
    FreePoly out;
    fp_add_term(out, MultiIndex::empty(), Scalar::one(nv_));
    for (int k = 0; k < e; ++k) out = fp_mul(out, v);
    return out;
  }

  FreePoly atom() {
    const Token t = take();
    if (t.kind == Token::number) {
      if (t.text.size() > 9) fail(t, "integer literal out of range");
      FreePoly out;
      fp_add_term(out, MultiIndex::empty(),
                  Scalar::from_int(std::stol(t.text), nv_));
      return out;
    }
    if (t.kind == Token::name) {
      auto g = std::find(gens_.begin(), gens_.end(), t.text);
      if (g != gens_.end()) {
        FreePoly out;
        int idx = static_cast<int>(g - gens_.begin());
        fp_add_term(out, MultiIndex::single(idx), Scalar::one(nv_));
        return out;
      }
      if (std::find(params_.begin(), params_.end(), t.text) != params_.end()) {
        FreePoly out;
        int idx = *session_.index_of(t.text);
        fp_add_term(out, MultiIndex::empty(), Scalar::variable(idx, nv_));
        return out;
      }
      if (session_.index_of(t.text).has_value())
        fail(t, "unknown parameter '" + t.text +
                    "' (not declared in this file's field line)");
      fail(t, "unknown generator '" + t.text + "'");
    }
    if (t.kind == Token::lparen) {
      FreePoly v = poly();
      if (cur().kind != Token::rparen) fail(cur(), "expected ')'");
      take();
      return v;
    }
    fail(t, "expected a number, a name or '('");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::string origin_;
  int line_;
  const FieldSpec& session_;
  const std::vector<std::string>& params_;
  const std::vector<std::string>& gens_;
  int nv_;
};

// ---------------------------------------------------------------------------
// Presentation file scanner.

struct RelSource {
  std::string text;
  int line = 0;
  int col = 0;  // 0-based offset of the expression within the line
};

struct QlsFile {
  std::string origin;
  std::vector<std::string> params;
  std::string name;
  bool has_space = false;
  std::vector<std::string> gens;
  bool has_gens = false;
  std::vector<RelSource> rels;
};

std::vector<std::pair<std::string, int>> split_tokens(const std::string& s) {
  std::vector<std::pair<std::string, int>> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i])) != 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j])) == 0)
      ++j;
    out.push_back({s.substr(i, j - i), static_cast<int>(i)});
    i = j;
  }
  return out;
}

std::string strip_comment(const std::string& raw) {
  std::size_t h = raw.find('#');
  return h == std::string::npos ? raw : raw.substr(0, h);
}

QlsFile scan_qls(const SourceFile& src) {
  QlsFile f;
  f.origin = src.origin;
  std::istringstream in(src.text);
  std::string raw;
  int ln = 0;
  bool saw_field = false;
  while (std::getline(in, raw)) {
    ++ln;
    std::string s = strip_comment(raw);
    auto toks = split_tokens(s);
    if (toks.empty()) continue;
    const std::string& dir = toks[0].first;
    if (dir == "field") {
      if (saw_field) fail_at(f.origin, ln, toks[0].second + 1,
                             "duplicate field line");
      saw_field = true;
      for (std::size_t k = 1; k < toks.size(); ++k) {
        if (!valid_name(toks[k].first))
          fail_at(f.origin, ln, toks[k].second + 1,
                  "invalid parameter name '" + toks[k].first + "'");
        if (std::find(f.params.begin(), f.params.end(), toks[k].first) !=
            f.params.end())
          fail_at(f.origin, ln, toks[k].second + 1,
                  "duplicate parameter '" + toks[k].first + "'");
        f.params.push_back(toks[k].first);
      }
    } else if (dir == "space") {
      if (f.has_space)
        fail_at(f.origin, ln, toks[0].second + 1, "duplicate space line");
      if (toks.size() != 2)
        fail_at(f.origin, ln, toks[0].second + 1,
                "space line takes exactly one name");
      f.has_space = true;
      f.name = toks[1].first;
    } else if (dir == "gens") {
      if (f.has_gens)
        fail_at(f.origin, ln, toks[0].second + 1, "duplicate gens line");
      f.has_gens = true;
      for (std::size_t k = 1; k < toks.size(); ++k) {
        if (!valid_name(toks[k].first))
          fail_at(f.origin, ln, toks[k].second + 1,
                  "invalid generator name '" + toks[k].first + "'");
        if (std::find(f.gens.begin(), f.gens.end(), toks[k].first) !=
            f.gens.end())
          fail_at(f.origin, ln, toks[k].second + 1,
                  "duplicate generator '" + toks[k].first + "'");
        if (std::find(f.params.begin(), f.params.end(), toks[k].first) !=
            f.params.end())
          fail_at(f.origin, ln, toks[k].second + 1,
                  "generator name '" + toks[k].first +
                      "' collides with a parameter");
        f.gens.push_back(toks[k].first);
      }
    } else if (dir == "rel") {
      int col = toks[0].second + static_cast<int>(dir.size());
      while (col < static_cast<int>(s.size()) &&
             std::isspace(static_cast<unsigned char>(s[col])) != 0)
        ++col;
      std::string expr = s.substr(col);
      if (split_tokens(expr).empty())
        fail_at(f.origin, ln, toks[0].second + 1, "empty relation");
      f.rels.push_back({expr, ln, col});
    } else {
      fail_at(f.origin, ln, toks[0].second + 1,
              "unknown directive '" + dir + "'");
    }
  }
  if (!f.has_space) {
    f.name = std::filesystem::path(f.origin).stem().string();
    if (f.name.empty()) f.name = "A";
  }
  return f;
}

// ---------------------------------------------------------------------------
// Canonical rendering.

bool has_toplevel_sign(const std::string& s) {
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    else if (c == ')') --depth;
    else if (depth == 0 && (c == '+' || c == '-')) return true;
  }
  return false;
}

std::string row_text(const Tensor& t, const std::vector<std::string>& gens,
                     const FieldSpec& field) {
  std::string s;
  bool first = true;
  for (const auto& [w, c] : t.terms()) {
    std::string cs = scalar_format(c, field);
    bool neg = false;
    if (cs.size() > 1 && cs[0] == '-' && !has_toplevel_sign(cs.substr(1))) {
      neg = true;
      cs = cs.substr(1);
    } else if (has_toplevel_sign(cs)) {
      cs = "(" + cs + ")";
    }
    std::string word;
    for (int i = 0; i < w.degree(); ++i) {
      if (i > 0) word += "*";
      word += gens[static_cast<std::size_t>(w.slots[i])];
    }
    std::string body;
    if (word.empty())
      body = cs;
    else if (cs == "1")
      body = word;
    else
      body = cs + "*" + word;
    if (first) {
      s += neg ? "-" + body : body;
      first = false;
    } else {
      s += neg ? " - " + body : " + " + body;
    }
  }
  return s;
}

std::vector<std::string> relation_rows(const Presentation& p) {
  std::vector<std::string> rows;
  for (int d = 2; d <= p.cap(); ++d) {
    const Subspace& comp = p.given_component(d);
    for (const Tensor& row : comp.basis())
      rows.push_back(row_text(row, p.gens(), p.field()));
  }
  return rows;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report output.

void write_report(const IdentityReport& rep, OutputFormat fmt,
                  std::ostream& out) {
  if (fmt == OutputFormat::machine) {
    ordered_json j;
    j["checks"] = ordered_json::array();
    for (const IdentityCheck& it : rep.items)
      j["checks"].push_back({{"name", it.name}, {"passed", it.passed}});
    j["all_passed"] = rep.all_passed;
    out << j.dump(2) << "\n";
    return;
  }
  int failed = 0;
  for (const IdentityCheck& it : rep.items) {
    out << "check " << it.name << ": " << (it.passed ? "pass" : "FAIL")
        << "\n";
    if (!it.passed) ++failed;
  }
  if (rep.all_passed)
    out << "result: all " << rep.items.size() << " checks passed\n";
  else
    out << "result: " << failed << " of " << rep.items.size()
        << " checks FAILED\n";
}

void write_presentation(const Presentation& p, OutputFormat fmt,
                        std::ostream& out) {
  out << (fmt == OutputFormat::machine ? emit_machine(p) : emit_canonical(p));
}

// ---------------------------------------------------------------------------
// Input loading and session plumbing.

SourceFile load_source(const std::string& spec) {
  if (!spec.empty() && spec[0] == '@') {
    auto text = preset_text(spec.substr(1));
    if (!text) throw parse_error("unknown preset '" + spec + "'", 0);
    return {spec, *text};
  }
  std::ifstream in(spec, std::ios::binary);
  if (!in) throw parse_error("cannot open '" + spec + "'", 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return {spec, ss.str()};
}

const std::string& required_option(const CommandSpec& cmd,
                                   const std::string& key) {
  auto it = cmd.options.find(key);
  if (it == cmd.options.end())
    throw parse_error("verb '" + cmd.verb + "' needs --" + key, 0);
  return it->second;
}

void need_inputs(const CommandSpec& cmd, std::size_t n) {
  if (cmd.inputs.size() != n)
    throw parse_error("verb '" + cmd.verb + "' expects " + std::to_string(n) +
                          " input" + (n == 1 ? "" : "s") + ", got " +
                          std::to_string(cmd.inputs.size()),
                      0);
}

struct Session {
  FieldSpec field{std::vector<std::string>{}};
  std::vector<Presentation> pres;
};

Session build_session(const CommandSpec& cmd, const SessionConfig& cfg,
                      const std::vector<std::string>& implied) {
  std::vector<SourceFile> sources;
  sources.reserve(cmd.inputs.size());
  for (const std::string& spec : cmd.inputs)
    sources.push_back(load_source(spec));
  std::vector<std::string> extras = implied;
  for (const std::string& name : cfg.field) extras.push_back(name);
  Session s;
  s.field = session_field(sources, extras);
  for (const SourceFile& src : sources)
    s.pres.push_back(parse_presentation(src, s.field, cfg.degree));
  return s;
}

LinearMap option_matrix(const CommandSpec& cmd, const std::string& key,
                        const FieldSpec& session) {
  SourceFile src = load_source(required_option(cmd, key));
  return parse_matrix(src, session);
}

// ---------------------------------------------------------------------------
// Verb bodies beyond one-line dispatch.

int run_hilbert(const Presentation& p, const SessionConfig& cfg,
                std::ostream& out) {
  if (cfg.format == OutputFormat::machine) {
    ordered_json j;
    j["space"] = p.name();
    j["hilbert"] = ordered_json::array();
    for (int d = 0; d <= p.cap(); ++d) j["hilbert"].push_back(p.hilbert(d));
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "space " << p.name() << "\n";
  out << "degree dim\n";
  for (int d = 0; d <= p.cap(); ++d) out << d << " " << p.hilbert(d) << "\n";
  return 0;
}

int run_factor_tau(const CommandSpec& cmd, const SessionConfig& cfg,
                   std::ostream& out) {
  need_inputs(cmd, 1);
  FieldSpec field = session_field({}, cfg.field);
  LinearMap tau = parse_matrix(load_source(cmd.inputs[0]), field);
  int n = 0;
  while ((n + 1) * (n + 1) * (n + 1) <= tau.rows()) ++n;
  if (n == 0 || n * n * n != tau.rows() || tau.rows() != tau.cols())
    throw precondition_error(
        "the matrix size is not the cube of a generator count");
  TauFactorization fac = factor_tau(tau, n);
  if (cfg.format == OutputFormat::machine) {
    ordered_json j;
    j["ok"] = fac.ok;
    if (!fac.ok) {
      j["reason"] = fac.reason;
    } else {
      auto matrix_json = [&](const LinearMap& m) {
        ordered_json rows = ordered_json::array();
        for (int r = 0; r < m.rows(); ++r) {
          ordered_json row = ordered_json::array();
          for (int c = 0; c < m.cols(); ++c)
            row.push_back(scalar_format(m.at(r, c), field));
          rows.push_back(row);
        }
        return rows;
      };
      j["sigma"] = matrix_json(fac.sigma);
      j["sigma_bar"] = matrix_json(fac.sigma_bar);
    }
    out << j.dump(2) << "\n";
  } else if (!fac.ok) {
    out << "ok: no\nreason: " << fac.reason << "\n";
  } else {
    out << "ok: yes\nsigma:\n" << emit_matrix(fac.sigma, field);
    out << "sigma_bar:\n" << emit_matrix(fac.sigma_bar, field);
  }
  return fac.ok ? 0 : 4;
}

int run_frt(const CommandSpec& cmd, const SessionConfig& cfg,
            std::ostream& out) {
  need_inputs(cmd, 0);
  std::vector<std::string> implied = {"q"};
  FieldSpec field = session_field({}, [&] {
    std::vector<std::string> names = implied;
    for (const std::string& extra : cfg.field) names.push_back(extra);
    return names;
  }());
  LinearMap phi = LinearMap::identity(2, field.nvars());
  if (cmd.options.count("twist") != 0)
    phi = option_matrix(cmd, "twist", field);
  FrtReport rep = frt_suite(field, phi, cfg.degree);
  if (cfg.format == OutputFormat::machine) {
    ordered_json j;
    j["plane_relations"] = relation_rows(rep.a_r);
    j["matrix_algebra_rows"] = relation_rows(rep.matrices).size();
    j["twisted_plane_relations"] = relation_rows(rep.a_r_phi);
    j["checks"] = ordered_json::array();
    for (const IdentityCheck& it : rep.checks.items)
      j["checks"].push_back({{"name", it.name}, {"passed", it.passed}});
    j["all_passed"] = rep.checks.all_passed;
    out << j.dump(2) << "\n";
  } else {
    out << "plane relations: " << join(relation_rows(rep.a_r), "; ") << "\n";
    out << "matrix algebra relation count: "
        << relation_rows(rep.matrices).size() << "\n";
    out << "twisted plane relations: "
        << join(relation_rows(rep.a_r_phi), "; ") << "\n";
    write_report(rep.checks, cfg.format, out);
  }
  return rep.checks.all_passed ? 0 : 4;
}

int run_selftest(const CommandSpec& cmd, const SessionConfig& cfg,
                 std::ostream& out) {
  std::string suite = "appendix";
  if (auto it = cmd.options.find("suite"); it != cmd.options.end())
    suite = it->second;
  if (suite != "appendix")
    throw parse_error("unknown selftest suite '" + suite + "'", 0);
  const int nv = 1;
  LinearMap sig(2, 2, nv);
  sig.at(0, 0) = Scalar::variable(0, nv);
  sig.at(1, 1) = Scalar::one(nv);
  LinearMap id = LinearMap::identity(2, nv);
  CollapseReport probe =
      nongraded_crossing_probe(Scalar::one(nv), sig, sig, sig);
  CollapseReport lam0 =
      nongraded_crossing_probe(Scalar::zero(nv), sig, sig, sig);
  CollapseReport ident = nongraded_crossing_probe(Scalar::one(nv), id, id, id);
  bool ok =
      probe.failure_detected && !lam0.failure_detected && !ident.failure_detected;
  if (cfg.format == OutputFormat::machine) {
    auto report_json = [](const CollapseReport& r) {
      return ordered_json{{"forced_collapse", r.forced_collapse},
                          {"surviving_dim", r.surviving_dim},
                          {"obstructed", r.obstructed},
                          {"failure_detected", r.failure_detected}};
    };
    ordered_json j;
    j["probe"] = report_json(probe);
    j["control_lambda_zero"] = report_json(lam0);
    j["control_identity"] = report_json(ident);
    j["ok"] = ok;
    out << j.dump(2) << "\n";
    return ok ? 0 : 4;
  }
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  out << "probe: crossing x + 1 past one global collection, sigma = "
         "diag(p,1)\n";
  out << "  forced collapse: " << yn(probe.forced_collapse)
      << " (surviving dimension " << probe.surviving_dim << ")\n";
  out << "  composite crossing obstructed: " << yn(probe.obstructed) << "\n";
  out << (probe.failure_detected ? "FAILURE DETECTED (expected)\n"
                                 : "no failure detected (UNEXPECTED)\n");
  out << "control lambda = 0: "
      << (lam0.failure_detected ? "FAILURE DETECTED (unexpected)" : "passes")
      << "\n";
  out << "control identity collection: "
      << (ident.failure_detected ? "FAILURE DETECTED (unexpected)" : "passes")
      << "\n";
  out << (ok ? "selftest appendix: ok\n"
             : "selftest appendix: UNEXPECTED OUTCOME\n");
  return ok ? 0 : 4;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public surface.

FieldSpec session_field(const std::vector<SourceFile>& sources,
                        const std::vector<std::string>& extras) {
  std::vector<std::string> names;
  auto push = [&](const std::string& n) {
    if (std::find(names.begin(), names.end(), n) == names.end())
      names.push_back(n);
  };
  for (const SourceFile& src : sources) {
    QlsFile f = scan_qls(src);
    for (const std::string& n : f.params) push(n);
  }
  for (const std::string& n : extras) {
    if (!valid_name(n))
      throw parse_error("invalid indeterminate name '" + n + "'", 0);
    push(n);
  }
  return FieldSpec(names);
}

Presentation parse_presentation(const SourceFile& src, const FieldSpec& session,
                                int cap) {
  QlsFile f = scan_qls(src);
  for (const std::string& p : f.params)
    if (!session.index_of(p).has_value())
      throw parse_error(
          src.origin + ": parameter '" + p + "' missing from the session", 0);
  std::vector<FreeElement> rels;
  rels.reserve(f.rels.size());
  for (const RelSource& r : f.rels) {
    RelParser parser(lex_line(r.text, f.origin, r.line, r.col), f.origin,
                     r.line, session, f.params, f.gens);
    FreePoly v = parser.run();
    FreeElement e;
    e.reserve(v.size());
    for (const auto& [w, c] : v) e.push_back({w, c});
    e = free_normalize(std::move(e));
    if (e.empty())
      fail_at(f.origin, r.line, r.col + 1, "relation is identically zero");
    int d = 0;
    if (!free_is_homogeneous(e, &d))
      fail_at(f.origin, r.line, r.col + 1,
              "inhomogeneous relation (mixed word degrees)");
    if (d < 2)
      fail_at(f.origin, r.line, r.col + 1,
              "relation of degree " + std::to_string(d) +
                  "; homogeneous degree at least 2 required");
    rels.push_back(std::move(e));
  }
  return Presentation::make(session, f.name, f.gens, std::move(rels), cap);
}

LinearMap parse_matrix(const SourceFile& src, const FieldSpec& session) {
  std::istringstream in(src.text);
  std::string raw;
  int ln = 0;
  int rows = -1, cols = -1, next_row = 0;
  LinearMap m;
  while (std::getline(in, raw)) {
    ++ln;
    std::string s = strip_comment(raw);
    auto toks = split_tokens(s);
    if (toks.empty()) continue;
    if (rows < 0) {
      bool ok = toks.size() == 2;
      for (const auto& [t, c] : toks)
        ok = ok && !t.empty() &&
             std::all_of(t.begin(), t.end(), [](char ch) {
               return std::isdigit(static_cast<unsigned char>(ch)) != 0;
             }) &&
             t.size() <= 4;
      if (!ok)
        fail_at(src.origin, ln, toks[0].second + 1,
                "matrix header must be 'rows cols'");
      rows = std::stoi(toks[0].first);
      cols = std::stoi(toks[1].first);
      if (rows < 1 || cols < 1)
        fail_at(src.origin, ln, toks[0].second + 1,
                "matrix dimensions must be positive");
      m = LinearMap(rows, cols, session.nvars());
      continue;
    }
    if (next_row >= rows)
      fail_at(src.origin, ln, toks[0].second + 1, "unexpected extra row");
    if (static_cast<int>(toks.size()) != cols)
      fail_at(src.origin, ln, toks[0].second + 1,
              "expected " + std::to_string(cols) + " entries, got " +
                  std::to_string(toks.size()));
    for (int c = 0; c < cols; ++c) {
      try {
        m.at(next_row, c) = scalar_parse(toks[c].first, session);
      } catch (const parse_error& e) {
        fail_at(src.origin, ln,
                toks[c].second + 1 + static_cast<int>(e.pos), e.what());
      }
    }
    ++next_row;
  }
  if (rows < 0) throw parse_error(src.origin + ": empty matrix file", 0);
  if (next_row != rows)
    throw parse_error(src.origin + ": expected " + std::to_string(rows) +
                          " rows, got " + std::to_string(next_row),
                      0);
  return m;
}

std::string emit_canonical(const Presentation& p) {
  std::string out;
  if (p.field().nvars() > 0)
    out += "field " + join(p.field().indeterminates, " ") + "\n";
  out += "space " + p.name() + "\n";
  out += "gens";
  for (const std::string& g : p.gens()) out += " " + g;
  out += "\n";
  std::vector<std::string> rows = relation_rows(p);
  for (const std::string& row : rows) out += "rel " + row + "\n";
  if (rows.empty()) out += "# (no relations)\n";
  return out;
}

std::string emit_machine(const Presentation& p) {
  ordered_json j;
  j["space"] = p.name();
  j["field"] = p.field().indeterminates;
  j["gens"] = p.gens();
  j["cap"] = p.cap();
  j["hilbert"] = ordered_json::array();
  for (int d = 0; d <= p.cap(); ++d) j["hilbert"].push_back(p.hilbert(d));
  j["relations"] = ordered_json::object();
  for (int d = 2; d <= p.cap(); ++d) {
    const Subspace& comp = p.given_component(d);
    if (comp.dim() == 0) continue;
    ordered_json rows = ordered_json::array();
    for (const Tensor& row : comp.basis())
      rows.push_back(row_text(row, p.gens(), p.field()));
    j["relations"][std::to_string(d)] = rows;
  }
  return j.dump(2) + "\n";
}

std::string emit_matrix(const LinearMap& m, const FieldSpec& field) {
  std::string out =
      std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (c > 0) out += " ";
      out += scalar_format(m.at(r, c), field);
    }
    out += "\n";
  }
  return out;
}

std::optional<std::string> preset_text(const std::string& name) {
  if (name == "qplane")
    return "field q\nspace qplane\ngens x y\nrel x*y - q*y*x\n";
  if (name == "k") return "space K\ngens e\n";
  if (name == "u2") return "space U2\ngens e\nrel e*e\n";
  if (name == "u3") return "space U3\ngens e\nrel e*e*e\n";
  if (name == "cubic")
    return "field q\nspace cubic\ngens x y\nrel x*x*y - q*y*x*x\n";
  return std::nullopt;
}

int run_command(const CommandSpec& cmd, const SessionConfig& cfg,
                std::ostream& out) {
  if (cfg.degree < 2)
    throw precondition_error("the degree bound must be at least 2");
  const std::string& v = cmd.verb;
  const int D = cfg.degree;

  if (v == "parse") {
    need_inputs(cmd, 1);
    Session s = build_session(cmd, cfg, {});
    write_presentation(s.pres[0], cfg.format, out);
    return 0;
  }
  if (v == "hilbert") {
    need_inputs(cmd, 1);
    Session s = build_session(cmd, cfg, {});
    return run_hilbert(s.pres[0], cfg, out);
  }
  if (v == "product") {
    need_inputs(cmd, 2);
    const std::string& kind = required_option(cmd, "kind");
    Session s = build_session(cmd, cfg, {});
    Presentation p;
    if (kind == "ttp") {
      LinearMap tau = option_matrix(cmd, "twist", s.field);
      p = ttp_presentation(twisting_from_matrix(tau, s.pres[0], s.pres[1]));
    } else if (kind == "circ" || kind == "odot" || kind == "bullet") {
      ProductKind k = kind == "circ"   ? ProductKind::circ
                      : kind == "odot" ? ProductKind::odot
                                       : ProductKind::bullet;
      p = product(k, s.pres[0], s.pres[1]);
    } else {
      throw parse_error("unknown product kind '" + kind + "'", 0);
    }
    write_presentation(p, cfg.format, out);
    return 0;
  }
  if (v == "dual") {
    need_inputs(cmd, 1);
    Session s = build_session(cmd, cfg, {});
    write_presentation(bang(s.pres[0]), cfg.format, out);
    return 0;
  }
  if (v == "hom") {
    need_inputs(cmd, 2);
    Session s = build_session(cmd, cfg, {});
    write_presentation(hom_object(s.pres[0], s.pres[1]).pres, cfg.format, out);
    return 0;
  }
  if (v == "end") {
    need_inputs(cmd, 1);
    Session s = build_session(cmd, cfg, {});
    if (cmd.options.count("twist") == 0) {
      if (cmd.check_equivalence)
        throw parse_error("--check-equivalence needs --twist", 0);
      write_presentation(end_object(s.pres[0]).pres, cfg.format, out);
      return 0;
    }
    LinearMap sigma = option_matrix(cmd, "twist", s.field);
    if (cmd.check_equivalence) {
      IdentityReport rep = twist_equivalences(s.pres[0], sigma, D);
      write_report(rep, cfg.format, out);
      return rep.all_passed ? 0 : 4;
    }
    HomObject h =
        hom_upsilon(s.pres[0], s.pres[0], FactorizableTwist{sigma, sigma}, D);
    write_presentation(h.pres, cfg.format, out);
    return 0;
  }
  if (v == "emarked") {
    need_inputs(cmd, 1);
    Session s = build_session(cmd, cfg, {});
    write_presentation(e_marked(s.pres[0]), cfg.format, out);
    return 0;
  }
  if (v == "cocompose") {
    need_inputs(cmd, 3);
    Session s = build_session(cmd, cfg, {});
    CocompositionReport rep = cocomposition(s.pres[0], s.pres[1], s.pres[2], D);
    IdentityReport items;
    items.add("cocomposition well-defined", !rep.failure.has_value());
    items.add("coevaluation square commutes", rep.square_commutes);
    write_report(items, cfg.format, out);
    return items.all_passed ? 0 : 4;
  }
  if (v == "twist-hom") {
    need_inputs(cmd, 2);
    Session s = build_session(cmd, cfg, {});
    FactorizableTwist tw{option_matrix(cmd, "sigma-a", s.field),
                         option_matrix(cmd, "sigma-b", s.field)};
    HomObject h = hom_upsilon(s.pres[0], s.pres[1], tw, D);
    write_presentation(h.pres, cfg.format, out);
    return 0;
  }
  if (v == "saturate") {
    need_inputs(cmd, 2);
    Session s = build_session(cmd, cfg, {});
    LinearMap tau = option_matrix(cmd, "twist", s.field);
    HomObject h = saturate_hom_general(s.pres[0], s.pres[1], tau, D);
    write_presentation(h.pres, cfg.format, out);
    return 0;
  }
  if (v == "factor-tau") return run_factor_tau(cmd, cfg, out);
  if (v == "cocycle-check") {
    need_inputs(cmd, 1);
    Session s = build_session(cmd, cfg, {});
    LinearMap sigma = option_matrix(cmd, "sigma", s.field);
    IdentityReport rep = cocycle_checks(make_cocycle(sigma), s.pres[0], D);
    write_report(rep, cfg.format, out);
    return rep.all_passed ? 0 : 4;
  }
  if (v == "equivalence") {
    if (cmd.inputs.size() == 1) {
      Session s = build_session(cmd, cfg, {});
      LinearMap sigma = option_matrix(cmd, "sigma", s.field);
      IdentityReport rep = twist_equivalences(s.pres[0], sigma, D);
      write_report(rep, cfg.format, out);
      return rep.all_passed ? 0 : 4;
    }
    need_inputs(cmd, 2);
    Session s = build_session(cmd, cfg, {});
    LinearMap sb = option_matrix(cmd, "sigma-b", s.field);
    LinearMap sa = option_matrix(cmd, "sigma-a", s.field);
    IdentityReport rep =
        twist_equivalences_pair(s.pres[0], sb, s.pres[1], sa, D);
    write_report(rep, cfg.format, out);
    return rep.all_passed ? 0 : 4;
  }
  if (v == "frt") return run_frt(cmd, cfg, out);
  if (v == "selftest") return run_selftest(cmd, cfg, out);
  throw parse_error("unknown verb '" + v + "'", 0);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CommandSpec cmd;
  SessionConfig cfg;
  std::string format_str = "table";
  std::string field_str;
  std::string kind_str;
  std::string suite_str = "appendix";
  std::map<std::string, std::string> files;  // option key -> path

  CLI::App app{"exact computations with graded quantum linear spaces", "qls"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* c) {
    c->add_option("--degree", cfg.degree,
                  "degree bound for all computations (default 4)");
    c->add_option("--format", format_str, "output format: table or machine")
        ->check(CLI::IsMember({"table", "machine"}));
    c->add_option("--field", field_str,
                  "extra field indeterminates, comma or space separated");
  };
  auto add_inputs = [&](CLI::App* c, int lo, int hi, const char* desc) {
    auto* opt = c->add_option("inputs", cmd.inputs, desc);
    if (lo == hi && lo > 0) opt->required()->expected(lo);
    else if (hi > 0) opt->expected(lo, hi);
    if (lo > 0) opt->required();
    return opt;
  };
  auto add_file = [&](CLI::App* c, const char* name, const char* desc,
                      bool required) {
    std::string key = std::string(name).substr(2);
    auto* opt = c->add_option(name, files[key], desc);
    if (required) opt->required();
    return opt;
  };

  CLI::App* c;
  c = app.add_subcommand("parse", "echo a presentation in canonical form");
  add_inputs(c, 1, 1, "presentation file or @preset");
  add_common(c);

  c = app.add_subcommand("hilbert", "degreewise dimensions of the quotient");
  add_inputs(c, 1, 1, "presentation file or @preset");
  add_common(c);

  c = app.add_subcommand("product", "monoidal product of two presentations");
  c->add_option("kind", kind_str, "circ, odot, bullet or ttp")->required();
  add_inputs(c, 2, 2, "the two presentation files");
  add_file(c, "--twist", "twisting matrix for kind ttp", false);
  add_common(c);

  c = app.add_subcommand("dual", "annihilator dual of a presentation");
  add_inputs(c, 1, 1, "presentation file or @preset");
  add_common(c);

  c = app.add_subcommand("hom", "internal hom of two presentations: hom B A");
  add_inputs(c, 2, 2, "source B, then target A");
  add_common(c);

  c = app.add_subcommand("end", "internal end, optionally twisted by --twist");
  add_inputs(c, 1, 1, "presentation file or @preset");
  add_file(c, "--twist", "degree-one symmetry for the twisted end", false);
  c->add_flag("--check-equivalence", cmd.check_equivalence,
              "verify the cocycle equivalences instead of printing");
  add_common(c);

  c = app.add_subcommand("emarked",
                         "end with the marked simultaneous-coaction rows");
  add_inputs(c, 1, 1, "presentation file or @preset");
  add_common(c);

  c = app.add_subcommand("cocompose",
                         "cocomposition checks: cocompose B C A");
  add_inputs(c, 3, 3, "B, C, A presentation files");
  add_common(c);

  c = app.add_subcommand("twist-hom",
                         "twisted hom for a factorizable pair of symmetries");
  add_inputs(c, 2, 2, "source B, then target A");
  add_file(c, "--sigma-a", "symmetry on the target side", true);
  add_file(c, "--sigma-b", "symmetry on the source side", true);
  add_common(c);

  c = app.add_subcommand("saturate",
                         "twisted hom by saturation from a twisting matrix");
  add_inputs(c, 2, 2, "source B, then target A");
  add_file(c, "--twist", "twisting matrix on B1 (x) A1", true);
  add_common(c);

  c = app.add_subcommand(
      "factor-tau", "factor a collection entry into id (x) sigma (x) inverse");
  add_inputs(c, 1, 1, "matrix file");
  add_common(c);

  c = app.add_subcommand("cocycle-check",
                         "cocycle laws for the ladder form of a symmetry");
  add_inputs(c, 1, 1, "presentation file or @preset");
  add_file(c, "--sigma", "the degree-one symmetry", true);
  add_common(c);

  c = app.add_subcommand("equivalence",
                         "twist-vs-convolution equivalences (one or two "
                         "presentations)");
  add_inputs(c, 1, 2, "A, or B then A");
  add_file(c, "--sigma", "symmetry for the single-presentation form", false);
  add_file(c, "--sigma-a", "target-side symmetry for the pair form", false);
  add_file(c, "--sigma-b", "source-side symmetry for the pair form", false);
  add_common(c);

  c = app.add_subcommand("frt", "braid-matrix suite over the field of q");
  add_file(c, "--twist", "diagonal change of basis phi", false);
  add_common(c);

  c = app.add_subcommand("selftest", "built-in checks");
  c->add_option("suite", suite_str,
                "suite name; 'appendix' probes the non-graded crossing");
  add_common(c);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  cmd.verb = sub->get_name();
  if (cmd.verb == "product") cmd.options["kind"] = kind_str;
  if (cmd.verb == "selftest") cmd.options["suite"] = suite_str;
  for (const auto& [key, path] : files) {
    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt != nullptr && opt->count() > 0) cmd.options[key] = path;
  }
  cfg.format =
      format_str == "machine" ? OutputFormat::machine : OutputFormat::table;
  std::replace(field_str.begin(), field_str.end(), ',', ' ');
  for (const auto& [name, pos] : split_tokens(field_str)) {
    (void)pos;
    cfg.field.push_back(name);
  }

  try {
    return run_command(cmd, cfg, out);
  } catch (const parse_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const precondition_error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const internal_check_error& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qls

#include "ucw/witness_parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

#include "ucw/error.hpp"

namespace ucw {
namespace {

// Intermediate value while parsing: sqrt/abs terms plus an affine part.
struct Expr {
  std::vector<FunctionalTerm> sqrt_terms;
  std::vector<FunctionalTerm> abs_terms;
  LinearForm linear;

  bool is_affine() const { return sqrt_terms.empty() && abs_terms.empty(); }
  bool is_constant() const { return is_affine() && linear.is_constant(); }

  Expr& operator+=(const Expr& o) {
    sqrt_terms.insert(sqrt_terms.end(), o.sqrt_terms.begin(), o.sqrt_terms.end());
    abs_terms.insert(abs_terms.end(), o.abs_terms.begin(), o.abs_terms.end());
    linear += o.linear;
    return *this;
  }
  Expr& scale(const Rational& s) {
    for (auto& t : sqrt_terms) t.coefficient *= s;
    for (auto& t : abs_terms) t.coefficient *= s;
    linear *= s;
    return *this;
  }
};

class Parser {
 public:
  Parser(std::string_view text, int line, int column) : text_(text), line_(line), col0_(column) {}

  Expr parse_all() {
    Expr e = parse_sum();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
  int col0_;
  std::size_t line_start_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, col0_ + static_cast<int>(pos_ - line_start_));
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char ch = text_[pos_];
      if (ch == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (ch == '\n') {
        ++pos_;
        ++line_;
        line_start_ = pos_;
        col0_ = 1;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool accept(char ch) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char ch) {
    if (!accept(ch)) fail(std::string("expected '") + ch + "'");
  }

  Expr parse_sum() {
    Expr lhs;
    bool negate = false;
    if (accept('-')) {
      negate = true;
    } else {
      accept('+');
    }
    lhs = parse_product();
    if (negate) lhs.scale(-1);
    for (;;) {
      if (accept('+')) {
        lhs += parse_product();
      } else if (accept('-')) {
        lhs += parse_product().scale(-1);
      } else {
        return lhs;
      }
    }
  }

  Expr parse_product() {
    Expr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        const std::size_t at = pos_;
        Expr rhs = parse_factor();
        if (lhs.is_constant()) {
          rhs.scale(lhs.linear.offset());
          lhs = std::move(rhs);
        } else if (rhs.is_constant()) {
          lhs.scale(rhs.linear.offset());
        } else {
          pos_ = at;
          fail("product of two non-constant expressions");
        }
      } else if (accept('/')) {
        Expr rhs = parse_factor();
        if (!rhs.is_constant()) fail("division by a non-constant expression");
        if (rhs.linear.offset().is_zero()) fail("division by zero");
        lhs.scale(Rational(1) / rhs.linear.offset());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_factor() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      Expr e = parse_sum();
      expect(')');
      return e;
    }
    if (ch == '-') {
      ++pos_;
      return parse_factor().scale(-1);
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return constant(parse_number());
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') return parse_call();
    fail("unexpected '" + std::string(1, ch) + "'");
  }

  static Expr constant(Rational r) {
    Expr e;
    e.linear = LinearForm::constant(r);
    return e;
  }

  static Expr affine(LinearForm f) {
    Expr e;
    e.linear = std::move(f);
    return e;
  }

  Rational parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    try {
      return Rational::parse(std::string(text_.substr(start, pos_ - start)));
    } catch (const Error& e) {
      pos_ = start;
      fail(std::string("bad number: ") + e.what());
    }
  }

  int parse_bit() {
    skip_space();
    if (pos_ < text_.size() && (text_[pos_] == '0' || text_[pos_] == '1')) return text_[pos_++] - '0';
    fail("expected 0 or 1");
  }

  std::string parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Expr parse_call() {
    const std::size_t start = pos_;
    const std::string id = parse_identifier();
    expect('(');
    if (id == "sqrt" || id == "abs") {
      const std::size_t arg_at = pos_;
      Expr arg = parse_sum();
      expect(')');
      if (!arg.is_affine()) {
        pos_ = arg_at;
        fail(id + "() argument must be affine in the probabilities");
      }
      Expr e;
      if (id == "sqrt") {
        if (!arg.linear.is_nonnegative_combination()) {
          throw SemanticError("sqrt argument '" + arg.linear.to_string() +
                              "' is not a nonnegative combination of probabilities (line " +
                              std::to_string(line_) + ")");
        }
        e.sqrt_terms.push_back({1, arg.linear});
      } else {
        e.abs_terms.push_back({1, arg.linear});
      }
      return e;
    }
    Expr e;
    if (id == "P") {
      const int a = parse_bit();
      expect(',');
      const int b = parse_bit();
      expect(',');
      const int c = parse_bit();
      e = affine(LinearForm::coordinate(prob_coord(a, b, c)));
    } else if (id == "PdoA" || id == "PdoC") {
      const int o = parse_bit();
      expect('|');
      const int b = parse_bit();
      e = affine(LinearForm::coordinate(id == "PdoA" ? do_a_coord(o, b) : do_c_coord(o, b)));
    } else if (id == "E_A" || id == "E_C" || id == "E_AC" || id == "PB") {
      const int b = parse_bit();
      const int i = (id == "E_A" || id == "E_AC") ? 1 : 0;
      const int j = (id == "E_C" || id == "E_AC") ? 1 : 0;
      e = affine(LinearForm::correlator(b, i, j));
    } else if (id == "EdoA" || id == "EdoC") {
      const int b = parse_bit();
      e = affine(id == "EdoA" ? LinearForm::do_expect_a(b) : LinearForm::do_expect_c(b));
    } else {
      pos_ = start;
      fail("unknown function '" + id + "'");
    }
    expect(')');
    return e;
  }
};

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return std::string(line.substr(0, hash));
}

}  // namespace

FunctionalSpec parse_witness(std::string_view text) {
  std::string name;
  std::string body;
  int body_line = 0;
  int body_col = 1;
  bool in_body = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip_comment(raw);
    if (trim(line).empty()) {
      if (in_body) body += '\n';
      continue;
    }
    const auto colon = line.find(':');
    const std::string key = colon == std::string::npos ? std::string{} : trim(line.substr(0, colon));
    if (key == "name") {
      if (!name.empty()) throw ParseError("duplicate 'name:'", line_no, 1);
      name = trim(line.substr(colon + 1));
      if (name.empty()) throw ParseError("empty witness name", line_no, static_cast<int>(colon) + 2);
      in_body = false;
    } else if (key == "maximize") {
      if (body_line != 0) throw ParseError("duplicate 'maximize:'", line_no, 1);
      in_body = true;
      body_line = line_no;
      body_col = static_cast<int>(colon) + 2;
      body = line.substr(colon + 1) + '\n';
    } else if (in_body) {
      body += line + '\n';
    } else if (name.empty() && body_line == 0) {
      // Bare expression without headers.
      in_body = true;
      body_line = line_no;
      body_col = 1;
      body = line + '\n';
    } else {
      throw ParseError("expected 'name:' or 'maximize:'", line_no, 1);
    }
  }
  if (body_line == 0) throw ParseError("missing 'maximize:' section", line_no + 1, 1);
  if (trim(body).empty()) throw ParseError("empty 'maximize:' expression", body_line, body_col);

  Parser parser(body, body_line, body_col);
  const Expr e = parser.parse_all();

  FunctionalSpec spec(name);
  for (const auto& t : e.sqrt_terms) spec.add_sqrt(t.coefficient, t.form);
  for (const auto& t : e.abs_terms) spec.add_abs(t.coefficient, t.form);
  if (!(e.linear == LinearForm{})) spec.add_linear(1, e.linear);
  return spec;
}

FunctionalSpec load_witness_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open witness file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_witness(ss.str());
}

std::string to_text(const FunctionalSpec& spec) {
  std::ostringstream os;
  if (!spec.name().empty()) os << "name: " << spec.name() << "\n";
  os << "maximize:\n";
  bool first = true;
  auto emit = [&](const Rational& c, const char* fn, const LinearForm& f) {
    const bool negative = c.sign() < 0;
    os << "  " << (negative ? "- " : (first ? "" : "+ "));
    os << (negative ? -c : c) << "*" << fn << "(" << f.to_string() << ")\n";
    first = false;
  };
  for (const auto& t : spec.sqrt_terms()) emit(t.coefficient, "sqrt", t.form);
  for (const auto& t : spec.abs_terms()) emit(t.coefficient, "abs", t.form);
  for (const auto& t : spec.linear_terms()) emit(t.coefficient, "", t.form);
  if (first) os << "  0\n";
  return os.str();
}

}  // namespace ucw

#include <cctype>

#include "kontact/error.hpp"
#include "kontact/expr.hpp"

namespace kontact {

const char* errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownSymbol: return "UnknownSymbol";
    case Errc::ZeroDenominator: return "ZeroDenominator";
    case Errc::PoleAtPoint: return "PoleAtPoint";
    case Errc::UnboundSymbol: return "UnboundSymbol";
    case Errc::ChartMismatch: return "ChartMismatch";
    case Errc::DegreeZero: return "DegreeZero";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::RankComputationOverflow: return "RankComputationOverflow";
    case Errc::NotKContact: return "NotKContact";
    case Errc::SingularSolve: return "SingularSolve";
    case Errc::NotHamiltonianInput: return "NotHamiltonianInput";
    case Errc::NoAnnihilator: return "NoAnnihilator";
    case Errc::SymmetryFailure: return "SymmetryFailure";
    case Errc::SpanFailure: return "SpanFailure";
    case Errc::NotMaxNonintegrable: return "NotMaxNonintegrable";
    case Errc::NotProjectable: return "NotProjectable";
    case Errc::NotClosed: return "NotClosed";
    case Errc::DegenerateFrame: return "DegenerateFrame";
    case Errc::LambdaNotConstant: return "LambdaNotConstant";
    case Errc::DependentProjections: return "DependentProjections";
    case Errc::SampleNotOnZeroSet: return "SampleNotOnZeroSet";
    case Errc::PoleEncountered: return "PoleEncountered";
    case Errc::DegenerateSeeds: return "DegenerateSeeds";
    case Errc::UnknownExample: return "UnknownExample";
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::Internal: return "Internal";
  }
  return "Internal";
}

namespace {

class Parser {
 public:
  Parser(const std::string& s, const SpacePtr& sp) : s_(s), sp_(sp) {}

  Expr run() {
    skip();
    if (pos_ >= s_.size()) throw SyntaxError(pos_, "empty expression");
    Expr e = expr();
    skip();
    if (pos_ < s_.size()) throw SyntaxError(pos_, std::string("unexpected '") + s_[pos_] + "'");
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  Expr expr() {
    Expr e = term();
    for (char c = peek(); c == '+' || c == '-'; c = peek()) {
      ++pos_;
      Expr t = term();
      e = c == '+' ? e + t : e - t;
    }
    return e;
  }

  Expr term() {
    Expr e = factor();
    for (char c = peek(); c == '*' || c == '/'; c = peek()) {
      std::size_t at = pos_++;
      Expr f = factor();
      if (c == '*') {
        e = e * f;
      } else {
        if (f.is_zero()) throw Error(Errc::ZeroDenominator, "division by zero at " + std::to_string(at));
        e = e / f;
      }
    }
    return e;
  }

  Expr factor() {
    char c = peek();
    if (c == '+') {
      ++pos_;
      return factor();
    }
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    Expr b = base();
    if (peek() == '^') {
      ++pos_;
      skip();
      std::size_t at = pos_;
      bool neg = false;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
        neg = s_[pos_] == '-';
        ++pos_;
      }
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) throw SyntaxError(at, "integer exponent expected");
      if (pos_ - start > 4) throw SyntaxError(at, "exponent too large");
      long n = std::stol(s_.substr(start, pos_ - start));
      if (neg && b.is_zero()) throw Error(Errc::ZeroDenominator, "0 to a negative power");
      b = b.pow(neg ? -n : n);
    }
    return b;
  }

  Expr base() {
    char c = peek();
    if (c == '(') {
      std::size_t open = pos_++;
      Expr e = expr();
      if (peek() != ')') throw SyntaxError(pos_, "missing ')' for '(' at " + std::to_string(open));
      ++pos_;
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      auto idx = sp_ ? sp_->find(name) : std::nullopt;
      if (!idx) fail(Errc::UnknownSymbol, "'" + name + "' at " + std::to_string(start));
      return Expr::symbol(sp_, *idx);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '\0') throw SyntaxError(pos_, "unexpected end of input");
    throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
  }

  // Decimal literal, kept exact: 1.25 -> 5/4, 2e-3 -> 1/500.
  Expr number() {
    std::size_t start = pos_;
    mpz_class mant = 0;
    long scale = 0;
    bool digits = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      mant = mant * 10 + (s_[pos_++] - '0');
      digits = true;
    }
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        mant = mant * 10 + (s_[pos_++] - '0');
        --scale;
        digits = true;
      }
    }
    if (!digits) throw SyntaxError(start, "malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t at = pos_++;
      bool neg = false;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) neg = s_[pos_++] == '-';
      std::size_t es = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (es == pos_ || pos_ - es > 4) throw SyntaxError(at, "malformed exponent");
      long ev = std::stol(s_.substr(es, pos_ - es));
      scale += neg ? -ev : ev;
    }
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    mpq_class q = scale < 0 ? mpq_class(mant, p10) : mpq_class(mant * p10);
    q.canonicalize();
    return Expr(q);
  }

  const std::string& s_;
  SpacePtr sp_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(const std::string& text, const SpacePtr& space) {
  Expr e = Parser(text, space).run();
  if (!e.space() && space) e = e.rebase(space);
  return e;
}

mpq_class parse_rational(const std::string& s) {
  Expr e = parse_expr(s, nullptr);
  auto q = e.as_rational();
  if (!q) fail(Errc::InvalidInput, "not a rational constant: " + s);
  return *q;
}

}  // namespace kontact

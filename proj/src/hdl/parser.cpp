#include "rtlmut/hdl/parser.hpp"

#include <cctype>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace rtlmut::hdl {

namespace {

enum class Tok {
  End, Ident, Number,
  LParen, RParen, LBrack, RBrack, LBrace, RBrace,
  Comma, Semi, Colon, At, Quest, Hash,
  Assign,       // =
  NbAssign,     // <=  (also consumed as Le in expression context)
  Tilde, Bang, Amp, Pipe, Caret, AmpAmp, PipePipe,
  Plus, Minus, Star, Shl, Shr, EqEq, NotEq, Lt, Gt, GtEq,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;    // identifier text
  BitVec number;       // literal value
  int line = 1;
  int col = 1;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {
      "module", "endmodule", "input",  "output",  "wire",    "reg",
      "assign", "always",    "begin",  "end",     "if",      "else",
      "case",   "endcase",   "default", "posedge", "negedge", "or",
      "parameter",
  };
  return kw;
}

class Lexer {
public:
  explicit Lexer(const std::string& text) : s_(text) {}

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    t.col = col_;
    if (eof()) return t;
    char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::Ident;
      while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '$'))
        t.text += get();
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '\'') {
      t.kind = Tok::Number;
      t.number = lex_number(t.line, t.col);
      return t;
    }
    get();
    switch (c) {
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case '[': t.kind = Tok::LBrack; return t;
      case ']': t.kind = Tok::RBrack; return t;
      case '{': t.kind = Tok::LBrace; return t;
      case '}': t.kind = Tok::RBrace; return t;
      case ',': t.kind = Tok::Comma; return t;
      case ';': t.kind = Tok::Semi; return t;
      case ':': t.kind = Tok::Colon; return t;
      case '@': t.kind = Tok::At; return t;
      case '?': t.kind = Tok::Quest; return t;
      case '#': t.kind = Tok::Hash; return t;
      case '~': t.kind = Tok::Tilde; return t;
      case '^': t.kind = Tok::Caret; return t;
      case '+': t.kind = Tok::Plus; return t;
      case '-': t.kind = Tok::Minus; return t;
      case '*': t.kind = Tok::Star; return t;
      case '&':
        if (match('&')) { t.kind = Tok::AmpAmp; return t; }
        t.kind = Tok::Amp; return t;
      case '|':
        if (match('|')) { t.kind = Tok::PipePipe; return t; }
        t.kind = Tok::Pipe; return t;
      case '=':
        if (match('=')) { t.kind = Tok::EqEq; return t; }
        t.kind = Tok::Assign; return t;
      case '!':
        if (match('=')) { t.kind = Tok::NotEq; return t; }
        t.kind = Tok::Bang; return t;
      case '<':
        if (match('<')) { t.kind = Tok::Shl; return t; }
        if (match('=')) { t.kind = Tok::NbAssign; return t; }
        t.kind = Tok::Lt; return t;
      case '>':
        if (match('>')) { t.kind = Tok::Shr; return t; }
        if (match('=')) { t.kind = Tok::GtEq; return t; }
        t.kind = Tok::Gt; return t;
      default:
        fail(std::string("unexpected character '") + c + "'", t.line, t.col);
    }
  }

private:
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  char get() {
    char c = s_[pos_++];
    if (c == '\n') { ++line_; col_ = 1; } else { ++col_; }
    return c;
  }
  bool match(char c) {
    if (!eof() && peek() == c) { get(); return true; }
    return false;
  }

  void skip_ws() {
    for (;;) {
      while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) get();
      if (!eof() && peek() == '/' && pos_ + 1 < s_.size()) {
        if (s_[pos_ + 1] == '/') {
          while (!eof() && peek() != '\n') get();
          continue;
        }
        if (s_[pos_ + 1] == '*') {
          int l = line_, c = col_;
          get(); get();
          for (;;) {
            if (eof()) fail("unterminated block comment", l, c);
            if (get() == '*' && !eof() && peek() == '/') { get(); break; }
          }
          continue;
        }
      }
      break;
    }
  }

  uint64_t lex_digits(int base, int line, int col) {
    uint64_t v = 0;
    bool any = false;
    while (!eof()) {
      char c = peek();
      if (c == '_') { get(); continue; }
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (base == 16 && c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (base == 16 && c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else break;
      if (d >= base) fail("digit out of range for base", line_, col_);
      uint64_t nv = v * base + static_cast<uint64_t>(d);
      if (nv / base != v && v != 0) fail("numeric literal exceeds 64 bits", line, col);
      v = nv;
      any = true;
      get();
    }
    if (!any) fail("expected digits", line_, col_);
    return v;
  }

  BitVec lex_number(int line, int col) {
    uint64_t first = 0;
    bool have_first = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      first = lex_digits(10, line, col);
      have_first = true;
    }
    if (!eof() && peek() == '\'') {
      get();
      if (eof()) fail("expected base after '", line, col);
      char b = get();
      int base;
      switch (b) {
        case 'b': case 'B': base = 2; break;
        case 'd': case 'D': base = 10; break;
        case 'h': case 'H': base = 16; break;
        default: fail(std::string("unsupported literal base '") + b + "' (two-state b/d/h only)", line, col);
      }
      if (!have_first) fail("sized literal missing width", line, col);
      if (first == 0 || first > 64) fail("literal width must be 1..64", line, col);
      uint64_t value = lex_digits(base, line, col);
      auto w = static_cast<uint32_t>(first);
      if (w < 64 && value > BitVec::mask(w))
        fail("literal value does not fit in declared width", line, col);
      return BitVec(w, value);
    }
    // Bare decimal: conventional 32-bit self-determined width.
    if (first > 0xffffffffULL) fail("unsized literal exceeds 32 bits; use a sized literal", line, col);
    return BitVec(32, first);
  }

  const std::string& s_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Recursive-descent parser
// ---------------------------------------------------------------------------

class Parser {
public:
  explicit Parser(const std::string& text) : lex_(text) { advance(); }

  ModuleDecl parse_module() {
    ModuleDecl m;
    expect_kw("module");
    m.name = expect_ident();
    expect(Tok::LParen);
    if (!at(Tok::RParen)) {
      parse_port(m);
      while (accept(Tok::Comma)) parse_port(m);
    }
    expect(Tok::RParen);
    expect(Tok::Semi);
    while (!at_kw("endmodule")) {
      if (at(Tok::End)) fail("unexpected end of input, missing endmodule", cur_.line, cur_.col);
      parse_item(m);
    }
    advance();  // endmodule
    if (!at(Tok::End)) fail("trailing text after endmodule", cur_.line, cur_.col);
    return m;
  }

private:
  void advance() { cur_ = lex_.next(); }
  bool at(Tok k) const { return cur_.kind == k; }
  bool at_kw(const char* kw) const { return cur_.kind == Tok::Ident && cur_.text == kw; }
  bool accept(Tok k) {
    if (at(k)) { advance(); return true; }
    return false;
  }
  bool accept_kw(const char* kw) {
    if (at_kw(kw)) { advance(); return true; }
    return false;
  }
  void expect(Tok k) {
    if (!at(k)) fail("unexpected token", cur_.line, cur_.col);
    advance();
  }
  void expect_kw(const char* kw) {
    if (!at_kw(kw)) fail(std::string("expected '") + kw + "'", cur_.line, cur_.col);
    advance();
  }
  std::string expect_ident() {
    if (!at(Tok::Ident)) fail("expected identifier", cur_.line, cur_.col);
    if (keywords().count(cur_.text)) fail("'" + cur_.text + "' is a reserved word", cur_.line, cur_.col);
    std::string s = cur_.text;
    advance();
    return s;
  }

  // Range bounds and parameter values must fold to constants at parse time;
  // only previously declared parameters are visible.
  uint64_t const_fold(const Expr& e, int line, int col) {
    switch (e.kind) {
      case ExprKind::Literal:
        return e.literal.bits;
      case ExprKind::Ref: {
        auto it = const_params_.find(e.name);
        if (it == const_params_.end())
          fail("'" + e.name + "' is not a constant in this context", line, col);
        return it->second.bits;
      }
      case ExprKind::Unary: {
        uint64_t a = const_fold(e.args[0], line, col);
        switch (e.uop) {
          case UnaryOp::Not: return ~a;
          case UnaryOp::Neg: return ~a + 1;
          case UnaryOp::LogicNot: return a == 0;
          default: fail("reduction operator not allowed in constant expression", line, col);
        }
      }
      case ExprKind::Binary: {
        uint64_t a = const_fold(e.args[0], line, col);
        uint64_t b = const_fold(e.args[1], line, col);
        switch (e.bop) {
          case BinaryOp::Add: return a + b;
          case BinaryOp::Sub: return a - b;
          case BinaryOp::Mul: return a * b;
          case BinaryOp::Shl: return b >= 64 ? 0 : a << b;
          case BinaryOp::Shr: return b >= 64 ? 0 : a >> b;
          default: fail("operator not allowed in constant expression", line, col);
        }
      }
      default:
        fail("expression is not constant", line, col);
    }
  }

  std::pair<int32_t, int32_t> parse_range() {
    // '[' msb ':' lsb ']', constants, msb >= lsb >= 0
    int line = cur_.line, col = cur_.col;
    expect(Tok::LBrack);
    auto msb = static_cast<int64_t>(const_fold(parse_expr(), line, col));
    expect(Tok::Colon);
    auto lsb = static_cast<int64_t>(const_fold(parse_expr(), line, col));
    expect(Tok::RBrack);
    if (msb < lsb || lsb < 0) fail("range must satisfy msb >= lsb >= 0", line, col);
    if (msb - lsb + 1 > 64) fail("vector width is limited to 64 bits", line, col);
    return {static_cast<int32_t>(msb), static_cast<int32_t>(lsb)};
  }

  void parse_port(ModuleDecl& m) {
    PortDecl p;
    if (accept_kw("input")) p.dir = Direction::Input;
    else if (accept_kw("output")) p.dir = Direction::Output;
    else fail("expected 'input' or 'output'", cur_.line, cur_.col);
    if (accept_kw("reg")) {
      if (p.dir == Direction::Input) fail("input ports cannot be reg", cur_.line, cur_.col);
      p.is_reg = true;
    }
    if (at(Tok::LBrack)) std::tie(p.msb, p.lsb) = parse_range();
    p.name = expect_ident();
    m.ports.push_back(std::move(p));
  }

  void parse_item(ModuleDecl& m) {
    int line = cur_.line, col = cur_.col;
    if (accept_kw("wire") || at_kw("reg")) {
      bool is_reg = false;
      if (at_kw("reg")) { advance(); is_reg = true; }
      NetDecl d;
      d.is_reg = is_reg;
      if (at(Tok::LBrack)) std::tie(d.msb, d.lsb) = parse_range();
      d.name = expect_ident();
      m.nets.push_back(d);
      while (accept(Tok::Comma)) {
        NetDecl e = d;
        e.name = expect_ident();
        m.nets.push_back(e);
      }
      expect(Tok::Semi);
      return;
    }
    if (accept_kw("parameter")) {
      ParamDecl p;
      p.name = expect_ident();
      expect(Tok::Assign);
      Expr v = parse_expr();
      uint32_t w = v.kind == ExprKind::Literal ? v.literal.width : 32;
      p.value = BitVec(w, const_fold(v, line, col));
      const_params_[p.name] = p.value;
      m.params.push_back(std::move(p));
      expect(Tok::Semi);
      return;
    }
    if (accept_kw("assign")) {
      ContinuousAssign a;
      a.lhs = expect_ident();
      expect(Tok::Assign);
      a.rhs = parse_expr();
      expect(Tok::Semi);
      m.assigns.push_back(std::move(a));
      return;
    }
    if (accept_kw("always")) {
      AlwaysBlock b;
      expect(Tok::At);
      b.sens = parse_sensitivity();
      b.body = parse_stmt_as_list();
      m.blocks.push_back(std::move(b));
      return;
    }
    fail("expected wire/reg/parameter/assign/always declaration", line, col);
  }

  SensitivityList parse_sensitivity() {
    SensitivityList s;
    if (at(Tok::Star)) {  // @*
      advance();
      s.star = true;
      return s;
    }
    expect(Tok::LParen);
    if (accept(Tok::Star)) {
      expect(Tok::RParen);
      s.star = true;
      return s;
    }
    s.star = false;
    auto entry = [&] {
      SensEntry e;
      if (accept_kw("posedge")) e.edge = EdgeKind::Posedge;
      else if (accept_kw("negedge")) e.edge = EdgeKind::Negedge;
      e.signal = expect_ident();
      s.entries.push_back(std::move(e));
    };
    entry();
    while (accept_kw("or") || accept(Tok::Comma)) entry();
    expect(Tok::RParen);
    return s;
  }

  // begin/end groups are flattened into statement lists here; see grammar doc.
  std::vector<Stmt> parse_stmt_as_list() {
    if (accept_kw("begin")) {
      std::vector<Stmt> body;
      while (!at_kw("end")) {
        if (at(Tok::End)) fail("unexpected end of input inside begin/end", cur_.line, cur_.col);
        auto inner = parse_stmt_as_list();
        for (auto& s : inner) body.push_back(std::move(s));
      }
      advance();  // end
      return body;
    }
    std::vector<Stmt> one;
    one.push_back(parse_stmt());
    return one;
  }

  Stmt parse_stmt() {
    if (accept_kw("if")) {
      Stmt s;
      s.kind = StmtKind::If;
      expect(Tok::LParen);
      s.cond = parse_expr();
      expect(Tok::RParen);
      s.then_body = parse_stmt_as_list();
      if (accept_kw("else")) {
        s.has_else = true;
        s.else_body = parse_stmt_as_list();
      }
      return s;
    }
    if (accept_kw("case")) {
      Stmt s;
      s.kind = StmtKind::Case;
      expect(Tok::LParen);
      s.subject = parse_expr();
      expect(Tok::RParen);
      while (!at_kw("endcase")) {
        if (at(Tok::End)) fail("unexpected end of input inside case", cur_.line, cur_.col);
        if (accept_kw("default")) {
          accept(Tok::Colon);
          if (s.has_default) fail("duplicate default arm", cur_.line, cur_.col);
          s.has_default = true;
          s.default_body = parse_stmt_as_list();
          continue;
        }
        CaseArm arm;
        arm.labels.push_back(parse_case_label());
        while (accept(Tok::Comma)) arm.labels.push_back(parse_case_label());
        expect(Tok::Colon);
        arm.body = parse_stmt_as_list();
        s.arms.push_back(std::move(arm));
      }
      advance();  // endcase
      return s;
    }
    // assignment
    Stmt s;
    s.kind = StmtKind::Assign;
    s.lhs = expect_ident();
    if (accept(Tok::Assign)) s.assign_kind = AssignKind::Blocking;
    else if (accept(Tok::NbAssign)) s.assign_kind = AssignKind::NonBlocking;
    else fail("expected '=' or '<=' in assignment", cur_.line, cur_.col);
    s.rhs = parse_expr();
    expect(Tok::Semi);
    return s;
  }

  Expr parse_case_label() {
    // Literal or reference to a parameter; resolution checked at elaboration.
    if (at(Tok::Number)) {
      Expr e = Expr::lit(cur_.number);
      advance();
      return e;
    }
    return Expr::ref(expect_ident());
  }

  // Expression grammar, loosest to tightest:
  //   ?:  ||  &&  |  ^  &  ==/!=  </<=/>/>=  <</>>  +/-  *  unary  primary
  Expr parse_expr() { return parse_ternary(); }

  Expr parse_ternary() {
    Expr c = parse_logic_or();
    if (accept(Tok::Quest)) {
      Expr t = parse_expr();
      expect(Tok::Colon);
      Expr f = parse_ternary();
      Expr e;
      e.kind = ExprKind::Ternary;
      e.args.push_back(std::move(c));
      e.args.push_back(std::move(t));
      e.args.push_back(std::move(f));
      return e;
    }
    return c;
  }

  Expr parse_logic_or() {
    Expr e = parse_logic_and();
    while (accept(Tok::PipePipe)) e = Expr::binary(BinaryOp::LogicOr, std::move(e), parse_logic_and());
    return e;
  }
  Expr parse_logic_and() {
    Expr e = parse_bit_or();
    while (accept(Tok::AmpAmp)) e = Expr::binary(BinaryOp::LogicAnd, std::move(e), parse_bit_or());
    return e;
  }
  Expr parse_bit_or() {
    Expr e = parse_bit_xor();
    while (accept(Tok::Pipe)) e = Expr::binary(BinaryOp::Or, std::move(e), parse_bit_xor());
    return e;
  }
  Expr parse_bit_xor() {
    Expr e = parse_bit_and();
    while (accept(Tok::Caret)) e = Expr::binary(BinaryOp::Xor, std::move(e), parse_bit_and());
    return e;
  }
  Expr parse_bit_and() {
    Expr e = parse_equality();
    while (accept(Tok::Amp)) e = Expr::binary(BinaryOp::And, std::move(e), parse_equality());
    return e;
  }
  Expr parse_equality() {
    Expr e = parse_relational();
    for (;;) {
      if (accept(Tok::EqEq)) e = Expr::binary(BinaryOp::Eq, std::move(e), parse_relational());
      else if (accept(Tok::NotEq)) e = Expr::binary(BinaryOp::Ne, std::move(e), parse_relational());
      else return e;
    }
  }
  Expr parse_relational() {
    Expr e = parse_shift();
    for (;;) {
      if (accept(Tok::Lt)) e = Expr::binary(BinaryOp::Lt, std::move(e), parse_shift());
      else if (accept(Tok::NbAssign)) e = Expr::binary(BinaryOp::Le, std::move(e), parse_shift());
      else if (accept(Tok::Gt)) e = Expr::binary(BinaryOp::Gt, std::move(e), parse_shift());
      else if (accept(Tok::GtEq)) e = Expr::binary(BinaryOp::Ge, std::move(e), parse_shift());
      else return e;
    }
  }
  Expr parse_shift() {
    Expr e = parse_additive();
    for (;;) {
      if (accept(Tok::Shl)) e = Expr::binary(BinaryOp::Shl, std::move(e), parse_additive());
      else if (accept(Tok::Shr)) e = Expr::binary(BinaryOp::Shr, std::move(e), parse_additive());
      else return e;
    }
  }
  Expr parse_additive() {
    Expr e = parse_multiplicative();
    for (;;) {
      if (accept(Tok::Plus)) e = Expr::binary(BinaryOp::Add, std::move(e), parse_multiplicative());
      else if (accept(Tok::Minus)) e = Expr::binary(BinaryOp::Sub, std::move(e), parse_multiplicative());
      else return e;
    }
  }
  Expr parse_multiplicative() {
    Expr e = parse_unary();
    while (accept(Tok::Star)) e = Expr::binary(BinaryOp::Mul, std::move(e), parse_unary());
    return e;
  }
  Expr parse_unary() {
    if (accept(Tok::Tilde)) return Expr::unary(UnaryOp::Not, parse_unary());
    if (accept(Tok::Bang)) return Expr::unary(UnaryOp::LogicNot, parse_unary());
    if (accept(Tok::Minus)) return Expr::unary(UnaryOp::Neg, parse_unary());
    if (accept(Tok::Amp)) return Expr::unary(UnaryOp::RedAnd, parse_unary());
    if (accept(Tok::Pipe)) return Expr::unary(UnaryOp::RedOr, parse_unary());
    if (accept(Tok::Caret)) return Expr::unary(UnaryOp::RedXor, parse_unary());
    return parse_primary();
  }
  Expr parse_primary() {
    if (at(Tok::Number)) {
      Expr e = Expr::lit(cur_.number);
      advance();
      return e;
    }
    if (accept(Tok::LParen)) {
      Expr e = parse_expr();
      expect(Tok::RParen);
      return e;
    }
    if (at(Tok::LBrace)) {
      advance();
      Expr e;
      e.kind = ExprKind::Concat;
      e.args.push_back(parse_expr());
      while (accept(Tok::Comma)) e.args.push_back(parse_expr());
      expect(Tok::RBrace);
      return e;
    }
    int line = cur_.line, col = cur_.col;
    std::string name = expect_ident();
    if (at(Tok::LBrack)) {
      advance();
      Expr idx = parse_expr();
      if (accept(Tok::Colon)) {
        Expr lo = parse_expr();
        expect(Tok::RBrack);
        Expr e;
        e.kind = ExprKind::PartSelect;
        e.name = std::move(name);
        e.msb = static_cast<int32_t>(const_fold(idx, line, col));
        e.lsb = static_cast<int32_t>(const_fold(lo, line, col));
        if (e.msb < e.lsb || e.lsb < 0) fail("part-select must satisfy msb >= lsb >= 0", line, col);
        return e;
      }
      expect(Tok::RBrack);
      Expr e;
      e.kind = ExprKind::BitSelect;
      e.name = std::move(name);
      e.args.push_back(std::move(idx));
      return e;
    }
    return Expr::ref(std::move(name));
  }

  Lexer lex_;
  Token cur_;
  std::map<std::string, BitVec> const_params_;
};

// ---------------------------------------------------------------------------
// Elaboration: identifier resolution, width inference, driver rules
// ---------------------------------------------------------------------------

class Elaborator {
public:
  explicit Elaborator(ModuleDecl& m) : m_(m) {}

  void run() {
    collect_decls();
    for (auto& a : m_.assigns) {
      check_lhs_continuous(a.lhs);
      infer(a.rhs);
    }
    for (auto& b : m_.blocks) {
      check_sensitivity(b.sens);
      for (auto& s : b.body) infer_stmt(s, b);
    }
    check_drivers();
  }

private:
  void collect_decls() {
    auto declare = [&](const std::string& n, uint32_t w) {
      if (w == 0 || w > 64) fail("declared width of '" + n + "' must be 1..64");
      if (!names_.insert(n).second) fail("duplicate declaration of '" + n + "'");
    };
    for (const auto& p : m_.ports) declare(p.name, p.width());
    for (const auto& p : m_.params) declare(p.name, p.value.width);
    for (const auto& n : m_.nets) declare(n.name, n.width());
  }

  uint32_t width_of_signal(const std::string& n) {
    uint32_t w = m_.width_of(n);
    if (w == 0) fail("unresolved identifier '" + n + "'");
    return w;
  }

  bool is_reg(const std::string& n) const {
    if (const auto* p = m_.find_port(n)) return p->is_reg;
    if (const auto* d = m_.find_net(n)) return d->is_reg;
    return false;
  }

  std::pair<int32_t, int32_t> declared_range(const std::string& n) {
    if (const auto* p = m_.find_port(n)) return {p->msb, p->lsb};
    if (const auto* d = m_.find_net(n)) return {d->msb, d->lsb};
    fail("identifier '" + n + "' does not name a vector signal");
  }

  void infer(Expr& e) {
    switch (e.kind) {
      case ExprKind::Literal:
        e.width = e.literal.width;
        return;
      case ExprKind::Ref:
        e.width = width_of_signal(e.name);
        return;
      case ExprKind::BitSelect: {
        auto [msb, lsb] = declared_range(e.name);
        infer(e.args[0]);
        if (e.args[0].kind == ExprKind::Literal) {
          auto idx = static_cast<int64_t>(e.args[0].literal.bits);
          if (idx < lsb || idx > msb)
            fail("bit-select index " + std::to_string(idx) + " out of range for '" + e.name + "'");
        }
        e.width = 1;
        return;
      }
      case ExprKind::PartSelect: {
        auto [msb, lsb] = declared_range(e.name);
        if (e.msb > msb || e.lsb < lsb)
          fail("part-select [" + std::to_string(e.msb) + ":" + std::to_string(e.lsb) +
               "] out of range for '" + e.name + "'");
        e.width = static_cast<uint32_t>(e.msb - e.lsb + 1);
        return;
      }
      case ExprKind::Concat: {
        uint64_t w = 0;
        for (auto& a : e.args) {
          infer(a);
          w += a.width;
        }
        if (w == 0 || w > 64) fail("concatenation width must be 1..64");
        e.width = static_cast<uint32_t>(w);
        return;
      }
      case ExprKind::Unary:
        infer(e.args[0]);
        switch (e.uop) {
          case UnaryOp::Not:
          case UnaryOp::Neg:
            e.width = e.args[0].width;
            break;
          default:
            e.width = 1;  // !, reductions
        }
        return;
      case ExprKind::Binary: {
        infer(e.args[0]);
        infer(e.args[1]);
        switch (e.bop) {
          case BinaryOp::And: case BinaryOp::Or: case BinaryOp::Xor:
          case BinaryOp::Add: case BinaryOp::Sub: case BinaryOp::Mul:
            e.width = std::max(e.args[0].width, e.args[1].width);
            break;
          case BinaryOp::Shl: case BinaryOp::Shr:
            e.width = e.args[0].width;
            break;
          default:
            e.width = 1;  // comparisons and logical connectives
        }
        return;
      }
      case ExprKind::Ternary:
        infer(e.args[0]);
        infer(e.args[1]);
        infer(e.args[2]);
        e.width = std::max(e.args[1].width, e.args[2].width);
        return;
    }
  }

  void check_lhs_continuous(const std::string& lhs) {
    width_of_signal(lhs);
    if (m_.find_param(lhs)) fail("cannot assign to parameter '" + lhs + "'");
    if (const auto* p = m_.find_port(lhs); p && p->dir == Direction::Input)
      fail("continuous assign drives input port '" + lhs + "'");
    if (is_reg(lhs)) fail("continuous assign target '" + lhs + "' must be a wire, not reg");
  }

  void check_lhs_procedural(const std::string& lhs) {
    width_of_signal(lhs);
    if (m_.find_param(lhs)) fail("cannot assign to parameter '" + lhs + "'");
    if (const auto* p = m_.find_port(lhs); p && p->dir == Direction::Input)
      fail("always block drives input port '" + lhs + "'");
    if (!is_reg(lhs)) fail("procedural assignment target '" + lhs + "' must be declared reg");
  }

  void check_sensitivity(const SensitivityList& s) {
    if (s.star) {
      if (!s.entries.empty()) fail("star sensitivity list cannot carry entries");
      return;
    }
    if (s.entries.empty()) fail("explicit sensitivity list must have at least one entry");
    bool has_edge = s.has_edge();
    for (const auto& e : s.entries) {
      uint32_t w = width_of_signal(e.signal);
      if (has_edge && e.edge == EdgeKind::Level)
        fail("cannot mix edge and level entries in one sensitivity list");
      if (e.edge != EdgeKind::Level && w != 1)
        fail("edge trigger on multi-bit signal '" + e.signal + "'");
    }
  }

  void infer_stmt(Stmt& s, const AlwaysBlock& blk) {
    switch (s.kind) {
      case StmtKind::Assign:
        check_lhs_procedural(s.lhs);
        infer(s.rhs);
        return;
      case StmtKind::If:
        infer(s.cond);
        for (auto& t : s.then_body) infer_stmt(t, blk);
        for (auto& t : s.else_body) infer_stmt(t, blk);
        return;
      case StmtKind::Case: {
        infer(s.subject);
        for (auto& arm : s.arms) {
          for (auto& l : arm.labels) {
            if (l.kind == ExprKind::Ref && !m_.find_param(l.name))
              fail("case label '" + l.name + "' must be a literal or parameter");
            infer(l);
          }
          for (auto& t : arm.body) infer_stmt(t, blk);
        }
        for (auto& t : s.default_body) infer_stmt(t, blk);
        return;
      }
    }
  }

  void collect_writes(const std::vector<Stmt>& body, std::set<std::string>& out) {
    for (const auto& s : body) {
      switch (s.kind) {
        case StmtKind::Assign:
          out.insert(s.lhs);
          break;
        case StmtKind::If:
          collect_writes(s.then_body, out);
          collect_writes(s.else_body, out);
          break;
        case StmtKind::Case:
          for (const auto& arm : s.arms) collect_writes(arm.body, out);
          collect_writes(s.default_body, out);
          break;
      }
    }
  }

  void check_drivers() {
    std::map<std::string, std::string> driver;  // signal -> driving context
    auto claim = [&](const std::string& sig, const std::string& ctx) {
      auto [it, fresh] = driver.emplace(sig, ctx);
      if (!fresh && it->second != ctx)
        fail("multiple drivers for '" + sig + "' (" + it->second + " and " + ctx + ")");
    };
    for (size_t i = 0; i < m_.assigns.size(); ++i)
      claim(m_.assigns[i].lhs, "assign #" + std::to_string(i));
    for (size_t i = 0; i < m_.blocks.size(); ++i) {
      std::set<std::string> writes;
      collect_writes(m_.blocks[i].body, writes);
      for (const auto& w : writes) claim(w, "always #" + std::to_string(i));
    }
  }

  ModuleDecl& m_;
  std::set<std::string> names_;
};

}  // namespace

bool is_keyword(const std::string& word) { return keywords().count(word) != 0; }

void elaborate(ModuleDecl& m) { Elaborator(m).run(); }

ModuleDecl parse(const SourceUnit& source) {
  Parser p(source.text);
  ModuleDecl m = p.parse_module();
  elaborate(m);
  return m;
}

}  // namespace rtlmut::hdl

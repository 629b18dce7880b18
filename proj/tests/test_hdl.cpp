#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "rtlmut/hdl/emit.hpp"
#include "rtlmut/hdl/parser.hpp"
#include "rtlmut/hdl/walk.hpp"
#include "rtlmut/mutate/mutate.hpp"
#include "support/fixtures.hpp"

using namespace rtlmut;
using testsupport::corpus;
using testsupport::fixture;

namespace {

hdl::ModuleDecl parse_text(const std::string& text) {
  return hdl::parse({text, "test"});
}

void walk_all_exprs(const hdl::ModuleDecl& m, const std::function<void(const hdl::Expr&)>& fn) {
  std::function<void(const hdl::Expr&)> visit = [&](const hdl::Expr& e) {
    fn(e);
    for (const auto& a : e.args) visit(a);
  };
  std::function<void(const std::vector<hdl::Stmt>&)> body = [&](const std::vector<hdl::Stmt>& b) {
    for (const auto& s : b) {
      switch (s.kind) {
        case hdl::StmtKind::Assign:
          visit(s.rhs);
          break;
        case hdl::StmtKind::If:
          visit(s.cond);
          body(s.then_body);
          body(s.else_body);
          break;
        case hdl::StmtKind::Case:
          visit(s.subject);
          for (const auto& arm : s.arms) {
            for (const auto& l : arm.labels) visit(l);
            body(arm.body);
          }
          body(s.default_body);
          break;
      }
    }
  };
  for (const auto& a : m.assigns) visit(a.rhs);
  for (const auto& b : m.blocks) body(b.body);
}

}  // namespace

TEST_CASE("minimal well-formed module") {
  auto m = parse_text("module inv(input a, output y); assign y = ~a; endmodule");
  CHECK(m.name == "inv");
  CHECK(m.ports.size() == 2);
  CHECK(m.assigns.size() == 1);
  walk_all_exprs(m, [](const hdl::Expr& e) { CHECK(e.width == 1); });
}

TEST_CASE("counter classification is grammar-forced") {
  const auto& f = fixture("counter4");
  REQUIRE(f.module.blocks.size() == 1);
  const auto& sens = f.module.blocks[0].sens;
  CHECK(f.module.blocks[0].is_sequential());
  REQUIRE(sens.entries.size() == 2);
  CHECK(sens.entries[0].edge == hdl::EdgeKind::Posedge);
  CHECK(sens.entries[0].signal == "clk");
  CHECK(sens.entries[1].edge == hdl::EdgeKind::Negedge);
  CHECK(sens.entries[1].signal == "rst_n");
}

TEST_CASE("unresolved identifier is rejected") {
  CHECK_THROWS_WITH_AS(parse_text("module bad(input a, output y); assign y = x; endmodule"),
                       doctest::Contains("unresolved identifier 'x'"), hdl::HdlError);
}

TEST_CASE("round-trip and emit determinism over the corpus") {
  for (const auto& f : corpus()) {
    CAPTURE(f.name);
    auto emitted = hdl::emit(f.module);
    auto reparsed = hdl::parse(emitted);
    CHECK(reparsed == f.module);
    CHECK(hdl::emit(reparsed).text == emitted.text);
    CHECK(hdl::ast_fingerprint(reparsed) == hdl::ast_fingerprint(f.module));
  }
}

TEST_CASE("elaboration totality: every expression carries a width") {
  for (const auto& f : corpus()) {
    CAPTURE(f.name);
    walk_all_exprs(f.module, [](const hdl::Expr& e) { CHECK(e.width >= 1); });
  }
}

TEST_CASE("fingerprint ignores whitespace and comments") {
  auto a = parse_text("module t(input a, output y); assign y = ~a; endmodule");
  auto b = parse_text(
      "module t(input a,\n\n output y);\n  // comment\n  assign y = /* inline */ ~a;\nendmodule");
  CHECK(hdl::ast_fingerprint(a) == hdl::ast_fingerprint(b));
}

TEST_CASE("fingerprint is sensitive to structure, including renames") {
  auto golden = parse_text("module t(input a, output y); assign y = ~a; endmodule");
  auto inverted = parse_text("module t(input a, output y); assign y = a; endmodule");
  CHECK(hdl::ast_fingerprint(golden) != hdl::ast_fingerprint(inverted));

  auto renamed = mutate::apply_equivalence(fixture("lfsr8").module,
                                           {mutate::EquivalenceCategory::Stylistic, "rename_nets"}, 5);
  CHECK(hdl::ast_fingerprint(renamed.module) != hdl::ast_fingerprint(fixture("lfsr8").module));
}

TEST_CASE("mutated emit differs from golden in at least one token") {
  for (const auto& name : {"counter4", "alu4", "and2"}) {
    const auto& f = fixture(name);
    mutate::MutationOperator op{mutate::MutationCategory::SignalInversion, "invert_rhs"};
    auto sites = mutate::enumerate_sites(f.module, op);
    REQUIRE(!sites.empty());
    auto res = mutate::apply_mutation(f.module, op, sites[0], 1);
    CHECK(hdl::emit(res.module).text != hdl::emit(f.module).text);
    // and the mutant still round-trips
    CHECK(hdl::parse(hdl::emit(res.module)) == res.module);
  }
}

TEST_CASE("driver uniqueness is enforced") {
  CHECK_THROWS_WITH_AS(
      parse_text("module t(input a, output y); assign y = a; assign y = ~a; endmodule"),
      doctest::Contains("multiple drivers"), hdl::HdlError);
  CHECK_THROWS_WITH_AS(parse_text("module t(input a, input clk, output reg y);"
                                  " always @(posedge clk) y <= a;"
                                  " always @(posedge clk) y <= ~a; endmodule"),
                       doctest::Contains("multiple drivers"), hdl::HdlError);
}

TEST_CASE("structural error diagnostics") {
  SUBCASE("literal does not fit") {
    CHECK_THROWS_AS(parse_text("module t(input a, output [1:0] y); assign y = 2'd7; endmodule"),
                    hdl::HdlError);
  }
  SUBCASE("part-select out of range") {
    CHECK_THROWS_WITH_AS(
        parse_text("module t(input [3:0] a, output y); assign y = a[5:4]; endmodule"),
        doctest::Contains("out of range"), hdl::HdlError);
  }
  SUBCASE("width above 64") {
    CHECK_THROWS_AS(parse_text("module t(input [64:0] a, output y); assign y = a[0]; endmodule"),
                    hdl::HdlError);
  }
  SUBCASE("input port driven") {
    CHECK_THROWS_AS(parse_text("module t(input a, output y); assign a = 1'b1; endmodule"),
                    hdl::HdlError);
  }
  SUBCASE("mixed edge and level sensitivity") {
    CHECK_THROWS_AS(parse_text("module t(input clk, input a, output reg y);"
                               " always @(posedge clk or a) y <= a; endmodule"),
                    hdl::HdlError);
  }
  SUBCASE("procedural assignment to a wire") {
    CHECK_THROWS_WITH_AS(parse_text("module t(input a, output y);"
                                    " always @(*) y = a; endmodule"),
                         doctest::Contains("must be declared reg"), hdl::HdlError);
  }
  SUBCASE("syntax error carries a location") {
    try {
      parse_text("module t(input a output y); endmodule");
      FAIL("expected a syntax error");
    } catch (const hdl::HdlError& e) {
      CHECK(e.diag.line == 1);
      CHECK(e.diag.column > 0);
    }
  }
}

TEST_CASE("parameters resolve in expressions and case labels") {
  auto m = parse_text(
      "module t(input [1:0] s, output reg y);"
      " parameter ON = 2'b10;"
      " always @(*) begin case (s) ON: y = 1'b1; default: y = 1'b0; endcase end endmodule");
  CHECK(m.params.size() == 1);
  CHECK(m.params[0].value == hdl::BitVec(2, 2));
}

TEST_CASE("clock and reset port conventions") {
  CHECK(hdl::find_clock_port(fixture("counter4").module.ports) == "clk");
  auto rst = hdl::find_reset_port(fixture("counter4").module.ports);
  REQUIRE(rst.has_value());
  CHECK(rst->name == "rst_n");
  CHECK(rst->active_low);
  auto rst_hi = hdl::find_reset_port(fixture("counter8_en").module.ports);
  REQUIRE(rst_hi.has_value());
  CHECK(rst_hi->name == "rst");
  CHECK(!rst_hi->active_low);
  CHECK(!hdl::find_clock_port(fixture("inv").module.ports).has_value());
}

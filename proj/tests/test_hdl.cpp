// Copyright 2026 The Metahunt Authors
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

#include <gtest/gtest.h>

#include "metahunt/error.hpp"
#include "metahunt/hdl/analysis.hpp"
#include "metahunt/hdl/generator.hpp"
#include "metahunt/hdl/parser.hpp"
#include "metahunt/hdl/printer.hpp"
#include "metahunt/hdl/validate.hpp"
#include "metahunt/rng.hpp"

using namespace metahunt;
using namespace metahunt::hdl;

TEST(Parser, MinimalModule) {
  Design d = parse("module m(input a, output b); assign b = a; endmodule");
  ASSERT_EQ(d.modules.size(), 1u);
  EXPECT_EQ(d.top, "m");
  ASSERT_EQ(d.modules[0].items.size(), 1u);
  EXPECT_EQ(d.modules[0].items[0].kind, Item::Kind::Assign);
}

TEST(Parser, ShiftRightByConstant) {
  Design d = parse("module m(input [3:0] a, output [3:0] b); assign b = a >> 1; endmodule");
  const Item& it = d.modules[0].items[0];
  Expr want = Expr::binary(BinaryOp::Shr, Expr::ref("a"), Expr::constant(32, 1));
  EXPECT_EQ(it.lhs, "b");
  EXPECT_EQ(it.rhs, want);
}

TEST(Parser, SyntaxErrorHasPosition) {
  try {
    parse("module m(input a, output b);\n  assign b = ;\nendmodule", "t.v");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.pos().line, 2);
    std::string diag = format_diagnostic("t.v", e);
    EXPECT_EQ(diag.rfind("t.v:2:", 0), 0u) << diag;
  }
}

TEST(Parser, MultipleDriversRejected) {
  EXPECT_THROW(parse("module m(input a, output b); assign b = a; assign b = ~a; endmodule"), ValidationError);
}

TEST(Parser, CombLoopRejected) {
  EXPECT_THROW(parse("module m(input a, output b); wire x; assign x = b; assign b = x & a; endmodule"),
               ValidationError);
}

TEST(Parser, WidthOutOfRangeRejected) {
  EXPECT_ANY_THROW(parse("module m(input [64:0] a, output b); assign b = a[0]; endmodule"));
}

TEST(Parser, UndeclaredRejected) {
  EXPECT_THROW(parse("module m(input a, output b); assign b = c; endmodule"), ValidationError);
}

TEST(Parser, InstanceCycleRejected) {
  const char* src =
      "module p(input a, output b); q u(.a(a), .b(b)); endmodule\n"
      "module q(input a, output b); p u(.a(a), .b(b)); endmodule\n";
  EXPECT_ANY_THROW(parse(src));
}

TEST(Printer, MinimalCanonical) {
  Design d = parse("module m(input a, output b); assign b = a; endmodule");
  EXPECT_EQ(print(d), "module m(\n  input a,\n  output b\n);\n  assign b = a;\nendmodule\n");
  EXPECT_EQ(print(d), print(d));
}

TEST(Generator, Deterministic) {
  EXPECT_EQ(gen_seed(0, SizeProfile::Small), gen_seed(0, SizeProfile::Small));
  EXPECT_NE(print(gen_seed(0, SizeProfile::Small)), print(gen_seed(1, SizeProfile::Small)));
}

TEST(Generator, RoundTripSmall) {
  for (std::uint64_t k = 0; k < 1000; ++k) {
    Design d = gen_seed(k, SizeProfile::Small);
    ASSERT_NO_THROW(validate(d)) << k << "\n" << print(d);
    EXPECT_LE(statement_count(d), 30u) << k;
    EXPECT_LE(stimulus_width(d), 10) << k;
    EXPECT_LE(max_ternary_depth(d), 2) << k;
    std::string text = print(d);
    Design back = parse(text);
    ASSERT_EQ(back, d) << k << "\n" << text;
    EXPECT_EQ(print(back), text);
    EXPECT_TRUE(undriven_reads(d, d.top_module()).empty()) << k;
  }
}

TEST(Generator, RoundTripLarger) {
  for (auto profile : {SizeProfile::Medium, SizeProfile::Large}) {
    for (std::uint64_t k = 0; k < 100; ++k) {
      Design d = gen_seed(k, profile);
      ASSERT_NO_THROW(validate(d)) << k << "\n" << print(d);
      EXPECT_LE(statement_count(d), statement_budget(profile)) << k;
      EXPECT_EQ(parse(print(d)), d) << k;
    }
  }
}

TEST(Generator, MultiFileRoundTrip) {
  Design d = gen_seed(3, SizeProfile::Large);
  ASSERT_GE(d.modules.size(), 2u);
  d.modules[0].origin.file = "side.v";
  auto files = print_files(d);
  ASSERT_EQ(files.size(), 2u);
  IncludeResolver r = [&](const std::string& name) -> std::optional<std::string> {
    for (const auto& f : files) {
      if (f.name == name) return f.text;
    }
    return std::nullopt;
  };
  Design back = parse(files[0].text, files[0].name, r);
  EXPECT_EQ(print(back), print(d));
}

TEST(ParserFuzz, RandomBytesNeverCrash) {
  Rng rng(99);
  std::string base = print(gen_seed(5, SizeProfile::Small));
  for (int i = 0; i < 3000; ++i) {
    std::string s;
    if (i % 2 == 0) {
      int n = rng.range(0, 200);
      for (int k = 0; k < n; ++k) s.push_back(static_cast<char>(rng.below(256)));
    } else {
      s = base;
      int edits = rng.range(1, 6);
      for (int k = 0; k < edits && !s.empty(); ++k) {
        auto pos = rng.below(s.size());
        switch (rng.below(3)) {
          case 0: s[pos] = static_cast<char>(rng.below(128)); break;
          case 1: s.erase(pos, rng.below(8)); break;
          default: s.insert(pos, 1, "(){};=?:[]"[rng.below(10)]); break;
        }
      }
    }
    try {
      parse(s);
    } catch (const Error&) {
    }
  }
  std::string deep(5000, '(');
  EXPECT_THROW(parse("module m(input a, output b); assign b = " + deep + "a; endmodule"), SyntaxError);
}

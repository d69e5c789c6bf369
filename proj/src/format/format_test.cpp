#include "nwn/format.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "figures.hpp"
#include "nlohmann/json.hpp"
#include "nwn/explore.hpp"

using namespace nwn;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(NWN_GOLDEN_DIR) + "/" + name);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Errc code_of(std::string_view text) {
  try {
    parse_doc(text);
  } catch (const FormatError& e) {
    return e.code();
  }
  return Errc::Usage;
}

const char* kGolden[] = {"fig1.nwn", "fig2.nwn", "fig3.nwn", "fig4.nwn", "fig5.nwn", "fig8.nwn", "fig11.nwn"};

}  // namespace

TEST(Golden, EmitIsByteIdentical) {
  for (const char* f : kGolden) {
    auto text = slurp(f);
    ASSERT_FALSE(text.empty()) << f;
    EXPECT_EQ(emit_doc(parse_doc(text)), text) << f;
  }
}

TEST(Golden, Fig1MatchesFigure) {
  auto d = parse_doc(slurp("fig1.nwn"));
  EXPECT_EQ(d.kind, Formalism::PN);
  EXPECT_TRUE(d.pn == fig::fig1());
  EXPECT_EQ(*d.pn_init, (Vec{4, 1, 1, 1, 1}));
  EXPECT_EQ(*d.pn_target, (Vec{2, 0, 2, 2, 3}));
}

TEST(Golden, NuFiguresMatch) {
  auto d2 = parse_doc(slurp("fig2.nwn"));
  EXPECT_TRUE(d2.nu.base == fig::fig2());
  EXPECT_EQ(*d2.nu_init, canonical(fig::fig2_init()));
  EXPECT_EQ(*d2.nu_target, canonical(fig::fig2_result()));
  auto d4 = parse_doc(slurp("fig4.nwn"));
  EXPECT_TRUE(d4.nu == fig::fig4());
  EXPECT_EQ(*d4.nu_target, canonical(fig::fig4_result()));
  auto d5 = parse_doc(slurp("fig5.nwn"));
  EXPECT_TRUE(d5.nu == fig::fig5());
  EXPECT_EQ(*d5.nu_init, canonical(fig::fig5_init()));
  EXPECT_EQ(*d5.nu_target, canonical(fig::fig5_result()));
}

TEST(Golden, EosFiguresMatch) {
  auto d3 = parse_doc(slurp("fig3.nwn"));
  auto e3 = fig::fig3();
  EXPECT_TRUE(eos_equal(d3.eos, e3));
  EXPECT_EQ(*d3.eos_init, fig::fig3_lambda(e3));
  EXPECT_EQ(*d3.eos_target, fig::fig3_rho(e3));
  auto d8 = parse_doc(slurp("fig8.nwn"));
  auto e8 = fig::fig8();
  EXPECT_TRUE(eos_equal(d8.eos, e8));
  EXPECT_EQ(*d8.eos_init, fig::fig8_init(e8));
  auto d11 = parse_doc(slurp("fig11.nwn"));
  auto e11 = fig::lossy_example();
  EXPECT_TRUE(eos_equal(d11.eos, e11));
  EXPECT_EQ(*d11.eos_init, fig::lossy_example_init(e11));
}

TEST(Golden, Overlay) {
  auto base = parse_doc(slurp("fig11.nwn"));
  auto o = parse_overlay(slurp("fig11_target.nwn"), base);
  ASSERT_TRUE(o.eos_target);
  EXPECT_EQ(*o.eos_target, nm_canon({make_token(base.eos, "p4", {})}));
  auto bare = parse_overlay("TARGET\n<p4>\n", base);
  EXPECT_EQ(*bare.eos_target, *o.eos_target);
  EXPECT_THROW(parse_overlay("PLACES\nx\n", base), FormatError);
}

TEST(Parse, ChannelSugarEqualsExplicit) {
  auto text = slurp("fig4.nwn");
  auto pos = text.find("t : G(x2,x3)[p1] = p3\nt : G(x3,x1)[p2] = p4\n");
  ASSERT_NE(pos, std::string::npos);
  auto sugar = text;
  sugar.replace(pos, 44, "t : p1[x2] => p3[x3]\nt : p2[x3] => p4[x1]\n");
  EXPECT_TRUE(doc_equal(parse_doc(sugar), parse_doc(text)));
  EXPECT_EQ(emit_doc(parse_doc(sugar)), text);
}

TEST(Parse, ErrorClasses) {
  EXPECT_EQ(code_of(""), Errc::SyntaxError);
  EXPECT_EQ(code_of("nwn 2 pn\n"), Errc::SyntaxError);
  EXPECT_EQ(code_of("nwn 1 pn\nPLACES\np\nARCS\np -> u\n"), Errc::ResolutionError);
  EXPECT_EQ(code_of("nwn 1 pn\nPLACES\np\np\n"), Errc::ValidationError);
  const char* dup =
      "nwn 1 cnupn\nPLACES\np1\np2\np3\nTRANS\nt : x1 x2\nCHANNELS\n"
      "t : p1[x1] => p2[x2]\nt : p1[x1] => p3[x1]\n";
  EXPECT_EQ(code_of(dup), Errc::ValidationError);
  EXPECT_EQ(code_of("nwn 1 cnupn\nPLACES\np1\np2\nTRANS\nt : x1\nCHANNELS\nt : p1[x3] => p2[x1]\n"),
            Errc::ResolutionError);
  EXPECT_EQ(code_of("nwn 1 pn\nPLACES\n@gen/x\n"), Errc::ResolutionError);
  EXPECT_NO_THROW(parse_doc("nwn 1 pn\n# prov @gen/x place block -\nPLACES\n@gen/x\n"));
}

TEST(Parse, DiagnosticPosition) {
  try {
    parse_doc("nwn 1 pn\nPLACES\np\nARCS\np -> u\n");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.diag().line, 5u);
    EXPECT_GT(e.diag().col, 0u);
  }
}

TEST(Emit, EmptyNetIsMinimal) {
  Document d;
  EXPECT_EQ(emit_doc(d), "nwn 1 pn\n");
  EXPECT_TRUE(doc_equal(parse_doc(emit_doc(d)), d));
}

TEST(Emit, JsonAndDot) {
  auto d = parse_doc(slurp("fig3.nwn"));
  auto j = nlohmann::json::parse(emit_json(d));
  EXPECT_EQ(j["kind"], "eos");
  auto dot = emit_dot(d);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find("cluster"), std::string::npos);
}

TEST(RoundTrip, RandomDocuments) {
  for (auto k : {Formalism::PN, Formalism::NuPN, Formalism::CNuPN, Formalism::RNuPN, Formalism::EOS})
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      auto d = random_instance(k, seed, SizeParams{});
      auto text = emit_doc(d);
      auto back = parse_doc(text);
      ASSERT_TRUE(doc_equal(back, d)) << text;
      ASSERT_EQ(emit_doc(back), text);
    }
}

TEST(RoundTrip, TranslationTargetsKeepProvenance) {
  auto check = [](const std::string& kind, const Document& src) {
    auto d = translate_doc(kind, src);
    auto text = emit_doc(d);
    auto back = parse_doc(text);
    EXPECT_TRUE(doc_equal(back, d)) << kind;
    EXPECT_EQ(back.prov.size(), d.prov.size()) << kind;
    EXPECT_EQ(emit_doc(back), text) << kind;
  };
  check("pn2cnupn", parse_doc(slurp("fig1.nwn")));
  check("nupn2ceos", parse_doc(slurp("fig2.nwn")));
  check("cnupn2rnupn", parse_doc(slurp("fig4.nwn")));
  check("rnupn2ceos", parse_doc(slurp("fig5.nwn")));
  check("ceos2cnupn", parse_doc(slurp("fig8.nwn")));
  check("closure", parse_doc(slurp("fig11.nwn")));
  check("normalize", parse_doc(slurp("fig3.nwn")));
}

TEST(Fuzz, RandomBytesOnlyRaiseFormatErrors) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    std::string s(rng() % 64, ' ');
    for (auto& c : s) c = char(rng() % 256);
    if (i % 2) s = "nwn 1 pn\n" + s;
    try {
      parse_doc(s);
    } catch (const FormatError&) {
    }
  }
}

TEST(Fuzz, MutatedGoldensOnlyRaiseFormatErrors) {
  std::mt19937_64 rng(11);
  const std::string alphabet = "pqtx12:[]<>|,*=->#\n BLACK";
  for (const char* f : kGolden) {
    auto text = slurp(f);
    for (int i = 0; i < 500; ++i) {
      auto s = text;
      for (int k = 0; k < 3; ++k) {
        auto pos = rng() % s.size();
        switch (rng() % 3) {
          case 0: s[pos] = alphabet[rng() % alphabet.size()]; break;
          case 1: s.erase(pos, 1 + rng() % 4); break;
          default: s.insert(pos, 1, alphabet[rng() % alphabet.size()]);
        }
        if (s.empty()) s = "x";
      }
      try {
        auto d = parse_doc(s);
        auto again = emit_doc(d);
        ASSERT_EQ(emit_doc(parse_doc(again)), again);
      } catch (const FormatError&) {
      }
    }
  }
}

TEST(RoundTrip, RandomTranslationTargets) {
  struct Case {
    const char* kind;
    Formalism src;
    SizeParams sp;
  };
  SizeParams cons;
  cons.places = 3;
  cons.conservative = true;
  std::vector<Case> cases = {{"pn2cnupn", Formalism::PN, {}},      {"nupn2ceos", Formalism::NuPN, {}},
                             {"cnupn2rnupn", Formalism::CNuPN, {}}, {"rnupn2ceos", Formalism::RNuPN, {}},
                             {"ceos2cnupn", Formalism::EOS, cons},  {"closure", Formalism::EOS, {}},
                             {"normalize", Formalism::EOS, {}}};
  for (const auto& c : cases)
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto d = translate_doc(c.kind, random_instance(c.src, seed, c.sp));
      auto text = emit_doc(d);
      auto back = parse_doc(text);
      ASSERT_TRUE(doc_equal(back, d)) << c.kind << " " << seed;
      ASSERT_EQ(emit_doc(back), text) << c.kind << " " << seed;
    }
}

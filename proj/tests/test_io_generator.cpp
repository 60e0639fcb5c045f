#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "padic_orth/generator.hpp"
#include "padic_orth/io.hpp"
#include "padic_orth/oracle.hpp"
#include "support.hpp"

using namespace padic_orth;
using namespace padic_orth::testing;

TEST(Generator, Deterministic) {
  GenerationParams g;
  g.p = 3;
  g.n = 3;
  g.weight_denominator = 2;
  g.dual = true;
  EXPECT_EQ(generate_instances(7, g, 5), generate_instances(7, g, 5));
  EXPECT_NE(generate_instances(7, g, 1), generate_instances(8, g, 1));
  const auto corpus = generate_instances(7, g, 5);
  EXPECT_EQ(regenerate(corpus[3]), corpus[3]);
}

TEST(Generator, ProducesValidInstances) {
  for (std::uint64_t k = 0; k < 100; ++k) {
    GenerationParams g;
    g.p = k % 3 == 0 ? 2 : (k % 3 == 1 ? 3 : 5);
    g.n = 1 + k % 4;
    g.weight_denominator = 1 + k % 3;
    g.entry_bound = 9;
    const Instance inst = generate_instance(k, g);
    EXPECT_NE(sgn(det(inst.norm.matrix())), 0);
    EXPECT_TRUE(linearly_independent(inst.basis));
    EXPECT_EQ(inst.basis.size(), g.n);
    for (const auto& e : inst.norm.weights()) {
      EXPECT_LE(abs(e), Rational(2));
      EXPECT_EQ(Integer(g.weight_denominator) % e.get_den(), 0);
    }
    for (const auto& b : inst.basis)
      for (const auto& x : b) EXPECT_LE(abs(x), Rational(9));
  }
}

TEST(Generator, RejectsBadParameters) {
  GenerationParams g;
  g.p = 4;
  EXPECT_THROW(generate_instance(1, g), Error);
  g = {};
  g.n = 0;
  EXPECT_THROW(generate_instance(1, g), Error);
  g = {};
  g.weight_denominator = 0;
  EXPECT_THROW(generate_instance(1, g), Error);
  g = {};
  g.rank = 5;
  EXPECT_THROW(generate_instance(1, g), Error);
  Instance bare{WeightedCoordinateNorm::sup_norm(Prime(2), 1), std::nullopt, {ivec({1})}, std::nullopt, std::nullopt,
                std::nullopt};
  EXPECT_THROW(regenerate(bare), Error);
}

TEST(Io, RationalsAreExactStrings) {
  EXPECT_EQ(io::to_json(Rational(-3, 6)), "-1/2");
  EXPECT_EQ(io::rational_from_json(io::json("4/8")), Rational(1, 2));
  EXPECT_EQ(io::rational_from_json(io::json(5)), Rational(5));
  EXPECT_THROW(io::rational_from_json(io::json(0.5)), Error);
  const auto e = io::to_json(NormExponent(Rational(3, 2)), Prime(2));
  EXPECT_EQ(e.at("w"), "3/2");
  EXPECT_EQ(e.at("value"), "2^(-3/2)");
}

TEST(Io, InstanceRoundTrip) {
  for (std::uint64_t k = 0; k < 60; ++k) {
    Instance inst = small_instance(303, k, k % 2 == 0);
    if (k % 3 == 0) inst.target = inst.dimension() == 3 ? vec({"1/3", "-7/2", "5"}) : vec({"1/3", "-7/2"});
    const std::string text = io::to_json(inst).dump();
    const Instance back = io::instance_from_json(io::parse(text));
    EXPECT_EQ(back, inst);
    EXPECT_EQ(io::to_json(back).dump(), text);
  }
}

TEST(Io, CorpusRoundTrip) {
  GenerationParams g;
  g.p = 5;
  g.n = 2;
  const auto instances = generate_instances(17, g, 4);
  const auto j = io::corpus_to_json(17, g, instances);
  EXPECT_EQ(io::instances_from_json(io::parse(j.dump(2))), instances);
}

TEST(Io, MalformedInputsAreRejected) {
  const char* bad[] = {
      R"({"basis": [["1"]]})",
      R"({"norm": {"p": 4, "matrix": [["1"]], "weights": ["0"]}, "basis": [["1"]]})",
      R"({"norm": {"p": 2, "matrix": [["1", "0"]], "weights": ["0"]}, "basis": [["1"]]})",
      R"({"norm": {"p": 2, "matrix": [["1"]], "weights": ["0"]}, "basis": [["1", "2"]]})",
      R"({"norm": {"p": 2, "matrix": [["1"]], "weights": ["x"]}, "basis": [["1"]]})",
      R"({"norm": {"p": 2, "matrix": [["1"]], "weights": [0.5]}, "basis": [["1"]]})",
      R"({"format": "other/1", "norm": {"p": 2, "matrix": [["1"]], "weights": ["0"]}, "basis": [["1"]]})",
      R"({"p": 3, "norm": {"p": 2, "matrix": [["1"]], "weights": ["0"]}, "basis": [["1"]]})",
      R"({"norm": {"p": 2, "matrix": [["1"]], "weights": ["0"]}, "basis": [["1"]], "seed": "-4"})",
      R"({"instances": 3})",
      R"([1, 2)",
  };
  for (const char* text : bad) {
    EXPECT_THROW(io::instances_from_json(io::parse(text)), Error) << text;
  }
}

TEST(Io, SamplesLoad) {
  for (const char* name : {"sup_norm_2d.json", "cvp_target.json", "two_norms.json", "corpus_p3_n3.json"}) {
    std::ifstream in(std::string(PADIC_ORTH_SAMPLES_DIR) + "/" + name);
    ASSERT_TRUE(in) << name;
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_FALSE(io::instances_from_json(io::parse(ss.str())).empty());
  }
}

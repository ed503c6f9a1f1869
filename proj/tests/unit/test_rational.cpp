#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "dulab/error.hpp"
#include "dulab/format.hpp"
#include "dulab/io.hpp"
#include "dulab/rational.hpp"

using namespace dulab;

TEST(Rational, ParsesFractionsAndDecimalsExactly) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational(" -4/8 "), Rational(-1, 2));
  EXPECT_EQ(parse_rational("0.125"), Rational(1, 8));
  EXPECT_EQ(parse_rational("-.5"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("17"), Rational(17));
  EXPECT_EQ(to_string(parse_rational("6/4")), "3/2");
}

TEST(Rational, RejectsMalformedInput) {
  for (const char* bad : {"", "1/0", "a/2", "1/-2", "1.2.3", ".", "1e5", "--1"})
    EXPECT_THROW(parse_rational(bad), DomainError) << bad;
}

TEST(Rational, ModularHelpers) {
  EXPECT_EQ(mod_floor(Rational(-1, 3), 1), Rational(2, 3));
  EXPECT_EQ(mod_floor(Rational(65, 2), 30), Rational(5, 2));
  EXPECT_EQ(dist_mod(Rational(29), 30), Rational(1));
  EXPECT_EQ(dist_mod(Rational(7, 10), 1), Rational(3, 10));
  EXPECT_EQ(dist_mod(Rational(-31, 2), 30), Rational(29, 2));
}

TEST(Rational, DoubleAndIntegerConversions) {
  EXPECT_EQ(from_double(0.375), Rational(3, 8));
  EXPECT_THROW(from_double(std::nan("")), DomainError);
  EXPECT_EQ(to_u64(from_u64(UINT64_MAX)), UINT64_MAX);
  EXPECT_THROW(to_u64(BigInt(-1)), DomainError);
  EXPECT_THROW(to_u64(from_u64(UINT64_MAX) + 1), DomainError);
}

TEST(Rational, FloorRationalPowerIsExact) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const std::uint64_t x = 1 + rng() % 1'000'000'000'000ull;
    const Rational g(1 + static_cast<long>(rng() % 5), 2 + static_cast<long>(rng() % 20));
    if (g >= 1) continue;
    const std::uint64_t m = floor_rational_power(x, g);
    const auto a = static_cast<unsigned>(g.get_num().get_ui()), b = static_cast<unsigned>(g.get_den().get_ui());
    EXPECT_LE(pow(from_u64(m), b), pow(from_u64(x), a));
    EXPECT_GT(pow(from_u64(m + 1), b), pow(from_u64(x), a));
  }
  EXPECT_EQ(floor_rational_power(100'000'000, Rational(1, 4)), 100u);
  EXPECT_EQ(floor_rational_power(99'999'999, Rational(1, 4)), 99u);
  EXPECT_THROW(floor_rational_power(0, Rational(1, 2)), DomainError);
}

TEST(Format, SeventeenDigitsRoundTrip) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int t = 0; t < 1000; ++t) {
    const double v = u(rng) / (1 + rng() % 1000);
    EXPECT_EQ(std::strtod(format_real(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
}

TEST(Format, IntegerParsingAcceptsScientificNotation) {
  EXPECT_EQ(parse_u64("1e8"), 100'000'000u);
  EXPECT_EQ(parse_u64("2.5e3"), 2500u);
  EXPECT_EQ(parse_u64("18446744073709551615"), UINT64_MAX);
  EXPECT_EQ(parse_i64("-3e2"), -300);
  EXPECT_THROW(parse_u64("1.5"), DomainError);
  EXPECT_THROW(parse_u64("-1"), DomainError);
  EXPECT_THROW(parse_u64("1e"), DomainError);
  EXPECT_THROW(parse_u64("abc"), DomainError);
}

TEST(Format, RealParsingNamesTheKey) {
  EXPECT_DOUBLE_EQ(parse_real("1/4"), 0.25);
  EXPECT_DOUBLE_EQ(parse_real("2.5e-1"), 0.25);
  try {
    parse_real("1/0", "gamma");
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("gamma"), std::string::npos);
  }
  EXPECT_THROW(parse_real("x"), DomainError);
}

TEST(Config, CommentsDuplicatesAndErrors) {
  EXPECT_TRUE(parse_config("").empty());
  const auto kv = parse_config("# header\nX = 1e8\nH=10 # trailing\n\nX=2e8\n");
  EXPECT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv.at("X"), "2e8");
  EXPECT_EQ(kv.at("H"), "10");
  try {
    parse_config("X=1\nnot a pair\n", "run.cfg");
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_EQ(std::string(e.what()), "run.cfg:2: expected key=value");
  }
  EXPECT_THROW(parse_config("=3\n"), UsageError);
  EXPECT_EQ(format_config({{"b", "2"}, {"a", "1"}}), "a=1\nb=2\n");
}

TEST(Config, FileHelpers) {
  const auto dir = std::filesystem::temp_directory_path() / "dulab_cfg_test";
  std::filesystem::create_directories(dir);
  write_text_file(dir / "a.cfg", "k=3\n");
  EXPECT_EQ(load_config(dir / "a.cfg").at("k"), "3");
  EXPECT_THROW(load_config(dir / "missing.cfg"), UsageError);
  EXPECT_THROW(write_text_file(dir / "no" / "such" / "dir.csv", "x"), DomainError);
  std::filesystem::remove_all(dir);
}

#include <factorstab/config.hpp>
#include <factorstab/error.hpp>

#include <gtest/gtest.h>

using namespace factorstab;

TEST(KeyValueConfig, ParsesTypedValues) {
  KeyValueConfig cfg = KeyValueConfig::parse(
      "# comment\n n = 12 \nname = hello world\nflag = true\nlist = a, b ,c\nbig = "
      "18446744073709551615\n");
  EXPECT_EQ(cfg.take_int("n"), 12);
  EXPECT_EQ(cfg.take_string("name"), "hello world");
  EXPECT_EQ(cfg.take_bool("flag"), true);
  EXPECT_EQ(cfg.take_list("list"), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(cfg.take_u64("big"), 18446744073709551615ull);
  EXPECT_FALSE(cfg.take_int("missing").has_value());
  EXPECT_NO_THROW(cfg.expect_consumed());
}

TEST(KeyValueConfig, Errors) {
  EXPECT_THROW(KeyValueConfig::parse("a = 1\na = 2\n"), ParseError);
  EXPECT_THROW(KeyValueConfig::parse("no equals sign\n"), ParseError);
  KeyValueConfig bad = KeyValueConfig::parse("n = 1.5\n");
  EXPECT_THROW(bad.take_int("n"), ParseError);
  KeyValueConfig unused = KeyValueConfig::parse("typo = 3\n");
  try {
    unused.expect_consumed();
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Strings, TrimAndSplit) {
  EXPECT_EQ(trim("  a b \t"), "a b");
  EXPECT_EQ(split_list(" 1, 2,3 "), (std::vector<std::string>{"1", "2", "3"}));
}

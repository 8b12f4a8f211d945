/*
 Copyright 2026 The alip-stairs Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <gtest/gtest.h>

#include <sstream>

#include "alip/errors.hpp"
#include "alip/keyvalue.hpp"

using namespace alip;

namespace {

KeyValueDocument doc(const std::string& text) {
  std::istringstream in(text);
  return KeyValueDocument::parse(in, "doc");
}

int config_line(const std::string& text) {
  try {
    doc(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(KeyValue, ParsesValuesAndComments) {
  const auto d = doc("# header\n\nname = walk  # trailing\nx = 0.25\nn = 7\nflag = true\nv = 1 2 3\n");
  EXPECT_EQ(d.get_string("name"), "walk");
  EXPECT_DOUBLE_EQ(d.get_double("x"), 0.25);
  EXPECT_EQ(d.get_int("n"), 7);
  EXPECT_TRUE(d.get_bool("flag", false));
  EXPECT_EQ(d.get_doubles("v", 3), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(d.line_of("x"), 4);
  EXPECT_NO_THROW(d.reject_unused());
}

TEST(KeyValue, Fallbacks) {
  const auto d = doc("a = 1\n");
  EXPECT_DOUBLE_EQ(d.get_double("b", 2.5), 2.5);
  EXPECT_EQ(d.get_string("c", "x"), "x");
  EXPECT_THROW(d.get_double("missing"), ConfigError);
}

TEST(KeyValue, LinePreciseErrors) {
  EXPECT_EQ(config_line("a = 1\nno equals sign\n"), 2);
  EXPECT_EQ(config_line("a = 1\nb = 2\na = 3\n"), 3);
  EXPECT_EQ(config_line("a = 1\n\nb =\n"), 3);
  const auto d = doc("a = 1\nb = abc\n");
  try {
    d.get_double("b");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(KeyValue, RejectsUnusedKeys) {
  const auto d = doc("a = 1\ntypo = 2\n");
  d.get_double("a");
  try {
    d.reject_unused();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_NE(std::string(e.what()).find("typo"), std::string::npos);
  }
}

TEST(KeyValue, WrongListLength) {
  const auto d = doc("v = 1 2\n");
  EXPECT_THROW(d.get_doubles("v", 3), ConfigError);
}

TEST(KeyValue, PrefixQueryKeepsDocumentOrder) {
  const auto d = doc("p.2.a = 1\nq = 0\np.1.b = 2\n");
  EXPECT_EQ(d.keys_with_prefix("p."), (std::vector<std::string>{"p.2.a", "p.1.b"}));
}

TEST(KeyValueWriter, DoublesRoundTripExactly) {
  KeyValueWriter w;
  const double values[] = {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0};
  for (int i = 0; i < 5; ++i) w.put("v" + std::to_string(i), values[i]);
  w.put("list", std::vector<double>{0.1, 0.2, 0.30000000000000004});
  w.put("b", true);
  const auto d = doc(w.str());
  for (int i = 0; i < 5; ++i) EXPECT_EQ(d.get_double("v" + std::to_string(i)), values[i]);
  EXPECT_EQ(d.get_doubles("list", 3)[2], 0.30000000000000004);
  EXPECT_TRUE(d.get_bool("b", false));
}

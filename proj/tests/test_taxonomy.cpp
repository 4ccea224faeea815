#include <doctest.h>

#include <set>

#include "infodelta/error.hpp"
#include "infodelta/taxonomy.hpp"

using namespace infodelta;

namespace {

const std::string kDefault = std::string(INFODELTA_SOURCE_DIR) + "/data/taxonomy.json";

std::string entry(const std::string& id, const std::string& post_query = "\\\"a b\\\" OR c") {
  return R"({"id":")" + id + R"(","name":"N","topic":"T","post_query":")" + post_query +
         R"(","news_query":"x","trends_spec":"x","trends_is_topic_entity":false})";
}

std::string doc(const std::vector<std::string>& entries) {
  std::string out = R"({"schema_version":1,"subtopics":[)";
  for (std::size_t i = 0; i < entries.size(); ++i) out += (i ? "," : "") + entries[i];
  return out + "]}";
}

std::string config_error(const std::string& text) {
  try {
    parse_taxonomy(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("bundled taxonomy") {
  auto t = load_taxonomy(kDefault);
  CHECK(t.size() == 18);
  CHECK(t.topics().size() == 4);
  std::set<std::string> ids;
  for (const auto* s : t.subtopics()) ids.insert(s->id);
  CHECK(ids.size() == 18);
  for (const char* id : {"mobility_cycle_lane", "buildings_energetic_requalification", "work_green_deal"})
    CHECK(ids.count(id) == 1);

  const auto* green = t.find("buildings_green_buildings");
  REQUIRE(green != nullptr);
  CHECK_FALSE(green->placeholder);
  CHECK(green->post_query == parse_query(R"("casa green" OR "case green" OR "EPBD")"));
  CHECK(t.find("nope") == nullptr);
}

TEST_CASE("topics are grouped in order of first mention") {
  std::string text = R"({"schema_version":1,"subtopics":[
    {"id":"a","name":"A","topic":"X","post_query":"a","news_query":"a","trends_spec":"a","trends_is_topic_entity":false},
    {"id":"b","name":"B","topic":"Y","post_query":"b","news_query":"b","trends_spec":"b","trends_is_topic_entity":true},
    {"id":"c","name":"C","topic":"X","post_query":"c","news_query":"c","trends_spec":"c","trends_is_topic_entity":false}]})";
  auto t = parse_taxonomy(text);
  REQUIRE(t.topics().size() == 2);
  CHECK(t.topics()[0].name == "X");
  CHECK(t.topics()[0].subtopics.size() == 2);
  CHECK(t.find("b")->trends_is_topic_entity);
}

TEST_CASE("duplicate ids") {
  CHECK_THROWS_AS(parse_taxonomy(doc({entry("cars"), entry("cars")})), DuplicateId);
}

TEST_CASE("config errors name the subtopic and field") {
  auto msg = config_error(doc({entry("cars"), entry("fuel", "")}));
  CHECK(msg.find("fuel") != std::string::npos);
  CHECK(msg.find("post_query") != std::string::npos);

  msg = config_error(doc({entry("fuel", "a OR")}));
  CHECK(msg.find("post_query") != std::string::npos);

  CHECK_FALSE(config_error("{").empty());
  CHECK_FALSE(config_error(R"({"schema_version":2,"subtopics":[]})").empty());
  CHECK_FALSE(config_error(R"({"schema_version":1,"subtopics":[{"id":"x"}]})").empty());
  CHECK_THROWS_AS(load_taxonomy("/nonexistent/taxonomy.json"), ConfigError);
}

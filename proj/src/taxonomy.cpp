#include "infodelta/taxonomy.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "infodelta/error.hpp"
#include "infodelta/json_out.hpp"

namespace infodelta {

Taxonomy::Taxonomy(std::vector<Topic> topics) : topics_(std::move(topics)) {
  std::set<std::string, std::less<>> seen;
  for (const auto& t : topics_)
    for (const auto& s : t.subtopics)
      if (!seen.insert(s.id).second) throw DuplicateId(s.id);
}

std::vector<const Subtopic*> Taxonomy::subtopics() const {
  std::vector<const Subtopic*> out;
  for (const auto& t : topics_)
    for (const auto& s : t.subtopics) out.push_back(&s);
  return out;
}

const Subtopic* Taxonomy::find(std::string_view id) const {
  for (const auto& t : topics_)
    for (const auto& s : t.subtopics)
      if (s.id == id) return &s;
  return nullptr;
}

std::size_t Taxonomy::size() const {
  std::size_t n = 0;
  for (const auto& t : topics_) n += t.subtopics.size();
  return n;
}

namespace {

std::string where(std::size_t index, const std::string& id) {
  return id.empty() ? "subtopic #" + std::to_string(index) : "subtopic '" + id + "'";
}

std::string required_string(const nlohmann::json& entry, const char* field, const std::string& ctx) {
  auto it = entry.find(field);
  if (it == entry.end()) throw ConfigError(ctx + ": missing field '" + field + "'");
  if (!it->is_string()) throw ConfigError(ctx + ": field '" + field + "' must be a string");
  return it->get<std::string>();
}

BooleanQuery query_field(const nlohmann::json& entry, const char* field, const std::string& ctx) {
  auto text = required_string(entry, field, ctx);
  try {
    return parse_query(text);
  } catch (const EmptyQuery&) {
    throw ConfigError(ctx + ": field '" + field + "' is empty");
  } catch (const SyntaxError& e) {
    throw ConfigError(ctx + ": field '" + field + "': " + e.what());
  }
}

}  // namespace

Taxonomy parse_taxonomy(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("taxonomy is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("taxonomy must be a JSON object");
  auto version = doc.find("schema_version");
  if (version == doc.end() || !version->is_number_integer())
    throw ConfigError("taxonomy: missing integer 'schema_version'");
  if (version->get<int>() != Taxonomy::kSchemaVersion)
    throw ConfigError("taxonomy: unsupported schema_version " + std::to_string(version->get<int>()));
  auto list = doc.find("subtopics");
  if (list == doc.end() || !list->is_array() || list->empty())
    throw ConfigError("taxonomy: 'subtopics' must be a non-empty array");

  std::vector<Topic> topics;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const auto& entry = (*list)[i];
    if (!entry.is_object()) throw ConfigError(where(i, "") + ": must be an object");
    std::string id = entry.contains("id") && entry["id"].is_string() ? entry["id"].get<std::string>() : "";
    std::string ctx = where(i, id);
    if (id.empty()) throw ConfigError(ctx + ": field 'id' must be a non-empty string");

    Subtopic s;
    s.id = id;
    s.name = required_string(entry, "name", ctx);
    s.topic = required_string(entry, "topic", ctx);
    s.post_query = query_field(entry, "post_query", ctx);
    s.news_query = query_field(entry, "news_query", ctx);
    s.trends_spec = required_string(entry, "trends_spec", ctx);
    auto entity = entry.find("trends_is_topic_entity");
    if (entity == entry.end() || !entity->is_boolean())
      throw ConfigError(ctx + ": field 'trends_is_topic_entity' must be a boolean");
    s.trends_is_topic_entity = entity->get<bool>();
    if (auto p = entry.find("placeholder"); p != entry.end()) {
      if (!p->is_boolean()) throw ConfigError(ctx + ": field 'placeholder' must be a boolean");
      s.placeholder = p->get<bool>();
    }

    auto topic = std::find_if(topics.begin(), topics.end(), [&](const Topic& t) { return t.name == s.topic; });
    if (topic == topics.end()) {
      topics.push_back(Topic{s.topic, {}});
      topic = std::prev(topics.end());
    }
    topic->subtopics.push_back(std::move(s));
  }
  return Taxonomy(std::move(topics));
}

Taxonomy load_taxonomy(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return parse_taxonomy(text);
}

}  // namespace infodelta

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infodelta/query.hpp"

namespace infodelta {

struct Subtopic {
  std::string id;
  std::string name;
  std::string topic;
  BooleanQuery post_query;
  BooleanQuery news_query;
  std::string trends_spec;
  bool trends_is_topic_entity = false;
  bool placeholder = false;  // keyword list not yet curated
};

struct Topic {
  std::string name;
  std::vector<Subtopic> subtopics;
};

/// Topic -> subtopic hierarchy. Subtopic order is significant: post
/// assignment picks the first matching subtopic.
class Taxonomy {
 public:
  static constexpr int kSchemaVersion = 1;

  Taxonomy() = default;
  /// Validates id uniqueness. Throws DuplicateId.
  explicit Taxonomy(std::vector<Topic> topics);

  const std::vector<Topic>& topics() const { return topics_; }

  /// Subtopics flattened in taxonomy order.
  std::vector<const Subtopic*> subtopics() const;
  const Subtopic* find(std::string_view id) const;
  std::size_t size() const;

 private:
  std::vector<Topic> topics_;
};

/// Parses the JSON taxonomy document:
///   {"schema_version": 1, "subtopics": [{"id", "name", "topic", "post_query",
///    "news_query", "trends_spec", "trends_is_topic_entity", "placeholder"?}, ...]}
/// Topics appear in order of first mention. Throws ConfigError / DuplicateId.
Taxonomy parse_taxonomy(std::string_view json_text);
Taxonomy load_taxonomy(const std::filesystem::path& path);

}  // namespace infodelta

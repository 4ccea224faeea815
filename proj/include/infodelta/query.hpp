#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace infodelta {

/// Boolean keyword query: Or/And nodes over quoted or bare phrases.
///
/// Grammar (OR binds looser than AND, keywords case-insensitive):
///   expr   := term (OR term)*
///   term   := factor (AND factor)*
///   factor := "quoted phrase" | bareword | "(" expr ")"
struct BooleanQuery {
  enum class Kind { Or, And, Phrase };

  Kind kind = Kind::Phrase;
  std::string phrase;                  // Phrase only; trimmed, single-spaced
  std::vector<BooleanQuery> children;  // Or/And only; at least two

  static BooleanQuery make_phrase(std::string_view text);
  static BooleanQuery any_of(std::vector<BooleanQuery> children);
  static BooleanQuery all_of(std::vector<BooleanQuery> children);

  bool is_phrase() const { return kind == Kind::Phrase; }
};

bool operator==(const BooleanQuery& a, const BooleanQuery& b);

/// Throws EmptyQuery on blank input and SyntaxError (with byte offset) otherwise.
BooleanQuery parse_query(std::string_view text);

/// Canonical text form; parse_query(print_query(q)) == q.
std::string print_query(const BooleanQuery& q);

/// GDELT DOC syntax: multi-word phrases quoted, OR groups parenthesised,
/// conjunction by juxtaposition.
std::string render_gdelt(const BooleanQuery& q);

/// Case-folded tokens (maximal runs of letters/digits) of a UTF-8 text.
class TokenizedText {
 public:
  explicit TokenizedText(std::string_view text);
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
};

bool matches(const BooleanQuery& q, const TokenizedText& doc);
bool matches(const BooleanQuery& q, std::string_view document_text);

}  // namespace infodelta

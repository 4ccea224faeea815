#include "infodelta/query.hpp"

#include <algorithm>
#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "infodelta/error.hpp"

namespace infodelta {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string normalize_spaces(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += c;
    }
  }
  return out;
}

bool equals_keyword(std::string_view word, std::string_view keyword) {
  return std::equal(word.begin(), word.end(), keyword.begin(), keyword.end(), [](char a, char b) {
    return (a >= 'a' && a <= 'z' ? a - 32 : a) == b;
  });
}

bool is_token_char(UChar32 c) {
  return u_isalpha(c) || u_isdigit(c) || (U_GET_GC_MASK(c) & U_GC_M_MASK) != 0;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  BooleanQuery parse() {
    skip_ws();
    if (pos_ == text_.size()) throw EmptyQuery();
    BooleanQuery q = expr();
    skip_ws();
    if (pos_ != text_.size()) {
      if (text_[pos_] == ')') throw SyntaxError("unbalanced ')'", pos_);
      throw SyntaxError("expected OR, AND or end of query", pos_);
    }
    return q;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  std::string_view peek_word() const {
    std::size_t end = pos_;
    while (end < text_.size() && !is_space(text_[end]) && text_[end] != '(' && text_[end] != ')' &&
           text_[end] != '"')
      ++end;
    return text_.substr(pos_, end - pos_);
  }

  bool accept_keyword(std::string_view keyword) {
    skip_ws();
    auto word = peek_word();
    if (!equals_keyword(word, keyword)) return false;
    pos_ += word.size();
    return true;
  }

  BooleanQuery expr() {
    std::vector<BooleanQuery> terms;
    terms.push_back(term());
    while (accept_keyword("OR")) terms.push_back(term());
    return terms.size() == 1 ? std::move(terms.front()) : BooleanQuery::any_of(std::move(terms));
  }

  BooleanQuery term() {
    std::vector<BooleanQuery> factors;
    factors.push_back(factor());
    while (accept_keyword("AND")) factors.push_back(factor());
    return factors.size() == 1 ? std::move(factors.front()) : BooleanQuery::all_of(std::move(factors));
  }

  BooleanQuery factor() {
    skip_ws();
    if (pos_ == text_.size()) throw SyntaxError("dangling operator: expected a phrase", pos_);
    char c = text_[pos_];
    if (c == '(') {
      std::size_t open = pos_++;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ')') throw SyntaxError("empty parentheses", pos_);
      BooleanQuery inner = expr();
      skip_ws();
      if (pos_ == text_.size() || text_[pos_] != ')') throw SyntaxError("unbalanced '('", open);
      ++pos_;
      return inner;
    }
    if (c == ')') throw SyntaxError("unexpected ')'", pos_);
    if (c == '"') {
      std::size_t open = pos_;
      auto close = text_.find('"', pos_ + 1);
      if (close == std::string_view::npos) throw SyntaxError("unterminated quote", open);
      auto body = normalize_spaces(text_.substr(open + 1, close - open - 1));
      if (body.empty()) throw SyntaxError("empty phrase", open);
      pos_ = close + 1;
      return BooleanQuery::make_phrase(body);
    }
    auto word = peek_word();
    if (equals_keyword(word, "OR") || equals_keyword(word, "AND"))
      throw SyntaxError("dangling operator '" + std::string(word) + "'", pos_);
    pos_ += word.size();
    return BooleanQuery::make_phrase(word);
  }
};

void print_into(const BooleanQuery& q, std::string& out) {
  if (q.is_phrase()) {
    out += '"';
    out += q.phrase;
    out += '"';
    return;
  }
  const char* sep = q.kind == BooleanQuery::Kind::Or ? " OR " : " AND ";
  for (std::size_t i = 0; i < q.children.size(); ++i) {
    if (i) out += sep;
    const auto& child = q.children[i];
    if (child.is_phrase()) {
      print_into(child, out);
    } else {
      out += '(';
      print_into(child, out);
      out += ')';
    }
  }
}

void render_gdelt_into(const BooleanQuery& q, std::string& out) {
  switch (q.kind) {
    case BooleanQuery::Kind::Phrase:
      if (q.phrase.find(' ') != std::string::npos) {
        out += '"';
        out += q.phrase;
        out += '"';
      } else {
        out += q.phrase;
      }
      break;
    case BooleanQuery::Kind::Or:
      out += '(';
      for (std::size_t i = 0; i < q.children.size(); ++i) {
        if (i) out += " OR ";
        render_gdelt_into(q.children[i], out);
      }
      out += ')';
      break;
    case BooleanQuery::Kind::And:
      for (std::size_t i = 0; i < q.children.size(); ++i) {
        if (i) out += ' ';
        const auto& child = q.children[i];
        // GDELT has no explicit grouping for conjunctions, nested And is flattened
        render_gdelt_into(child, out);
      }
      break;
  }
}

bool contains_run(const std::vector<std::string>& doc, const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > doc.size()) return false;
  return std::search(doc.begin(), doc.end(), needle.begin(), needle.end()) != doc.end();
}

}  // namespace

BooleanQuery BooleanQuery::make_phrase(std::string_view text) {
  BooleanQuery q;
  q.kind = Kind::Phrase;
  q.phrase = normalize_spaces(text);
  return q;
}

BooleanQuery BooleanQuery::any_of(std::vector<BooleanQuery> children) {
  BooleanQuery q;
  q.kind = Kind::Or;
  q.children = std::move(children);
  return q;
}

BooleanQuery BooleanQuery::all_of(std::vector<BooleanQuery> children) {
  BooleanQuery q;
  q.kind = Kind::And;
  q.children = std::move(children);
  return q;
}

bool operator==(const BooleanQuery& a, const BooleanQuery& b) {
  return a.kind == b.kind && a.phrase == b.phrase && a.children == b.children;
}

BooleanQuery parse_query(std::string_view text) { return Parser(text).parse(); }

std::string print_query(const BooleanQuery& q) {
  std::string out;
  print_into(q, out);
  return out;
}

std::string render_gdelt(const BooleanQuery& q) {
  std::string out;
  render_gdelt_into(q, out);
  return out;
}

TokenizedText::TokenizedText(std::string_view text) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  std::string current;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c >= 0 && is_token_char(c)) {
      UChar32 folded = u_foldCase(c, U_FOLD_CASE_DEFAULT);
      char buf[U8_MAX_LENGTH];
      int32_t n = 0;
      U8_APPEND_UNSAFE(reinterpret_cast<uint8_t*>(buf), n, folded);
      current.append(buf, static_cast<std::size_t>(n));
    } else if (!current.empty()) {
      tokens_.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens_.push_back(std::move(current));
}

bool matches(const BooleanQuery& q, const TokenizedText& doc) {
  switch (q.kind) {
    case BooleanQuery::Kind::Phrase:
      return contains_run(doc.tokens(), TokenizedText(q.phrase).tokens());
    case BooleanQuery::Kind::Or:
      return std::any_of(q.children.begin(), q.children.end(), [&](const auto& c) { return matches(c, doc); });
    case BooleanQuery::Kind::And:
      return std::all_of(q.children.begin(), q.children.end(), [&](const auto& c) { return matches(c, doc); });
  }
  return false;
}

bool matches(const BooleanQuery& q, std::string_view document_text) {
  return matches(q, TokenizedText(document_text));
}

}  // namespace infodelta

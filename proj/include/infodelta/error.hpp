#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace infodelta {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// taxonomy / query
class EmptyQuery : public Error {
 public:
  EmptyQuery() : Error("empty query") {}
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error("syntax error at byte " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DuplicateId : public ConfigError {
 public:
  explicit DuplicateId(const std::string& id) : ConfigError("duplicate subtopic id '" + id + "'"), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

// ingest
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Malformed line in an input file. Carries the 1-based line number.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class RangeError : public FormatError {
 public:
  using FormatError::FormatError;
};

class EmptyFile : public Error {
 public:
  explicit EmptyFile(const std::string& path) : Error("empty file: " + path) {}
};

class IoError : public Error {
 public:
  using Error::Error;
};

class NetworkError : public Error {
 public:
  /// status is the last HTTP status seen, or 0 for transport-level failures.
  NetworkError(const std::string& what, int status) : Error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

class ApiFormatError : public Error {
 public:
  using Error::Error;
};

// series / analysis
class WindowError : public Error {
 public:
  using Error::Error;
};

class NoOverlap : public Error {
 public:
  NoOverlap() : Error("series have no weeks in common") {}
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

class TooShort : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

// pipeline
class NothingToAnalyze : public Error {
 public:
  using Error::Error;
};

}  // namespace infodelta

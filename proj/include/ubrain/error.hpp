#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ubrain {

enum class ErrorCode {
  arity,
  range,
  parse,
  config,
  split,
  degenerate_corpus,
  timer_resolution,
  resource,
  inconsistency,
  inseparable_pair,
  empty_set,
  stall,
  contradiction,
  io,
  ingestion,
  version,
  corrupt_file,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::arity: return "arity";
    case ErrorCode::range: return "range";
    case ErrorCode::parse: return "parse";
    case ErrorCode::config: return "config";
    case ErrorCode::split: return "split";
    case ErrorCode::degenerate_corpus: return "degenerate-corpus";
    case ErrorCode::timer_resolution: return "timer-resolution";
    case ErrorCode::resource: return "resource";
    case ErrorCode::inconsistency: return "inconsistency";
    case ErrorCode::inseparable_pair: return "inseparable-pair";
    case ErrorCode::empty_set: return "empty-set";
    case ErrorCode::stall: return "stall";
    case ErrorCode::contradiction: return "contradiction";
    case ErrorCode::io: return "io";
    case ErrorCode::ingestion: return "ingestion";
    case ErrorCode::version: return "version";
    case ErrorCode::corrupt_file: return "corrupt-file";
  }
  return "unknown";
}

// Process exit status for the CLI: 2 data inconsistency, 3 configuration, 4 I/O.
inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::inconsistency:
    case ErrorCode::inseparable_pair:
    case ErrorCode::empty_set:
    case ErrorCode::stall:
    case ErrorCode::contradiction:
      return 2;
    case ErrorCode::io:
    case ErrorCode::ingestion:
    case ErrorCode::version:
    case ErrorCode::corrupt_file:
      return 4;
    default:
      return 3;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + " error: " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A positive and a negative instance that no literal can tell apart.
class InseparablePairError : public Error {
 public:
  InseparablePairError(std::size_t positive, std::size_t negative)
      : Error(ErrorCode::inseparable_pair,
              "positive #" + std::to_string(positive) + " and negative #" +
                  std::to_string(negative) + " have no separating literal"),
        positive_(positive),
        negative_(negative) {}

  std::size_t positive() const noexcept { return positive_; }
  std::size_t negative() const noexcept { return negative_; }

 private:
  std::size_t positive_;
  std::size_t negative_;
};

class InconsistencyError : public Error {
 public:
  InconsistencyError(std::string positive_id, std::string negative_id, const std::string& detail)
      : Error(ErrorCode::inconsistency, detail),
        positive_id_(std::move(positive_id)),
        negative_id_(std::move(negative_id)) {}

  const std::string& positive_id() const noexcept { return positive_id_; }
  const std::string& negative_id() const noexcept { return negative_id_; }

 private:
  std::string positive_id_;
  std::string negative_id_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& detail)
      : Error(ErrorCode::parse, "at offset " + std::to_string(position) + ": " + detail),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class IngestionError : public Error {
 public:
  IngestionError(std::string source, std::size_t line, const std::string& detail)
      : Error(ErrorCode::ingestion, source + ":" + std::to_string(line) + ": " + detail),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ubrain

#pragma once

#include <stdexcept>
#include <string>

namespace bohmfin {

// Machine-readable failure categories. The CLI serializes these as
// error.kind in its JSON error object, so the strings are a stable
// interface; add new kinds at the end.
enum class ErrorKind {
  io,
  parse,
  insufficient_data,
  insufficient_sample,
  degenerate_distribution,
  insufficient_tail_resolution,
  insufficient_scales,
  invalid_argument,
  embedding,
  internal,
};

inline const char* to_string(ErrorKind k)
{
  switch (k) {
    case ErrorKind::io: return "io";
    case ErrorKind::parse: return "parse";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::insufficient_sample: return "insufficient_sample";
    case ErrorKind::degenerate_distribution: return "degenerate_distribution";
    case ErrorKind::insufficient_tail_resolution:
      return "insufficient_tail_resolution";
    case ErrorKind::insufficient_scales: return "insufficient_scales";
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::embedding: return "embedding";
    case ErrorKind::internal: return "internal";
  }
  return "internal";
}

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message)
    , kind_(kind)
  {
  }

  ErrorKind kind() const { return kind_; }
  const char* kind_name() const { return to_string(kind_); }

private:
  ErrorKind kind_;
};

} // namespace bohmfin

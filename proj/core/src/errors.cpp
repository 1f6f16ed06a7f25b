#include "invsynth/errors.hpp"

namespace invsynth {

namespace {

std::string format_frontend(FrontendError::Kind kind, const std::string& message, std::size_t line,
                            std::size_t column) {
  std::string out = to_string(kind);
  if (line != 0) out += " at " + std::to_string(line) + ":" + std::to_string(column);
  out += ": " + message;
  return out;
}

}  // namespace

FrontendError::FrontendError(Kind kind, std::string message, std::size_t line, std::size_t column)
    : Error(format_frontend(kind, message, line, column)),
      kind_(kind),
      line_(line),
      column_(column),
      detail_(std::move(message)) {}

const char* to_string(FrontendError::Kind kind) noexcept {
  switch (kind) {
    case FrontendError::Kind::Syntax: return "syntax error";
    case FrontendError::Kind::Unsupported: return "unsupported construct";
    case FrontendError::Kind::Undeclared: return "undeclared variable";
  }
  return "frontend error";
}

}  // namespace invsynth

#include "lk/errors.hpp"

namespace lk {

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

ParseError::ParseError(Raw, const std::string& message, std::size_t line) : Error(message), line_(line) {}

ParseError ParseError::in_file(const std::string& file) const { return ParseError(Raw{}, file + ": " + what(), line_); }

}  // namespace lk

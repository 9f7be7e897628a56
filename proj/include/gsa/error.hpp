#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gsa {

enum class Errc {
  domain,        // argument outside the mathematical domain (p outside [0,1], ...)
  parameter,     // invalid distribution / method parameters
  size,          // empty or undersized inputs
  parse,         // text formats and formulas
  range,         // sample file entries outside [0,1]
  dimension,     // LP-tau dimension beyond the direction table
  not_positive_definite,
  collinear,
  unsupported,
  evaluation,    // per-row model fault
  external,      // external model launch / protocol failure
  io,
  config,
  mismatch,      // design / estimator incompatibility
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Syntax errors in formulas and text files.  `offset` is a byte offset for
// formulas and a 1-based line number for files; the message says which.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error(Errc::parse, what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace gsa

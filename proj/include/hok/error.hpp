#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hok {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Formula or model-file text that does not conform to the grammar.
// `position` is 1-based; `line` is 0 for single-line formula input.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, std::size_t position, std::size_t line = 0)
      : Error(format(msg, position, line)), position_(position), line_(line) {}

  std::size_t position() const { return position_; }
  std::size_t line() const { return line_; }

 private:
  static std::string format(const std::string& msg, std::size_t pos, std::size_t line) {
    if (line == 0) return "syntax error at position " + std::to_string(pos) + ": " + msg;
    return "syntax error at line " + std::to_string(line) + ", column " + std::to_string(pos) +
           ": " + msg;
  }

  std::size_t position_;
  std::size_t line_;
};

// A structure that violates a well-formedness condition of its model class.
class ModelError : public Error {
 public:
  using Error::Error;
};

class HeredityError : public ModelError {
 public:
  HeredityError(std::string lower, std::string upper, std::string atom)
      : ModelError("heredity violated: " + lower + " <= " + upper + " but atom '" + atom +
                   "' holds at " + lower + " and not at " + upper),
        lower_(std::move(lower)),
        upper_(std::move(upper)),
        atom_(std::move(atom)) {}

  const std::string& lower() const { return lower_; }
  const std::string& upper() const { return upper_; }
  const std::string& atom() const { return atom_; }

 private:
  std::string lower_;
  std::string upper_;
  std::string atom_;
};

// Lookup of a world, submodel or object that the model does not declare.
class UnknownName : public Error {
 public:
  using Error::Error;
};

// A forcing relation was asked to evaluate a model outside the class it is
// defined for, or a formula it has no clause for.
class SemanticsError : public Error {
 public:
  using Error::Error;
};

}  // namespace hok

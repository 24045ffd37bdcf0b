#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bihar {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t offset, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        offset_(offset),
        line_(line),
        column_(column),
        detail_(message) {}

  /// Zero-based byte offset into the source.
  std::size_t offset() const { return offset_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t offset_;
  int line_;
  int column_;
  std::string detail_;
};

class UnknownSymbol : public Error {
 public:
  explicit UnknownSymbol(std::string name, const std::string& context = "symbol")
      : Error("unknown " + context + " '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::string subexpression)
      : Error(what + " in '" + subexpression + "'"), subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

class NotAdaptedFrame : public Error {
 public:
  NotAdaptedFrame(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class DegeneratePlane : public Error {
 public:
  using Error::Error;
};

class ModeUnsupported : public Error {
 public:
  using Error::Error;
};

class UnknownModel : public Error {
 public:
  explicit UnknownModel(const std::string& name) : Error("unknown model '" + name + "'") {}
};

}  // namespace bihar

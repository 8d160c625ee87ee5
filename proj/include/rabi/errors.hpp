#pragma once

#include <stdexcept>
#include <string>

namespace rabi {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

/// Configuration or argument rejected; `field()` names the offending key when known.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg, std::string field = {})
      : Error(field.empty() ? msg : field + ": " + msg), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& msg, int line)
      : ValidationError("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Adaptive integration could not proceed (step size underflow).
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& msg, double last_good_time)
      : Error(msg + " (last good t = " + std::to_string(last_good_time) + " ps)"),
        last_good_time_(last_good_time) {}
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

class IoError : public Error {
 public:
  IoError(const std::string& msg, std::string path)
      : Error(path + ": " + msg), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace rabi

#pragma once

#include <stdexcept>
#include <string>

namespace netda {

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind { config = 1, data = 2, numerical = 3 };

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
  ErrorKind kind_;
};

class ConfigError : public Error
{
public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class DataError : public Error
{
public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class NumericalError : public Error
{
public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

inline const char* to_string(ErrorKind kind)
{
  switch (kind) {
  case ErrorKind::config: return "config";
  case ErrorKind::data: return "data";
  case ErrorKind::numerical: return "numerical";
  }
  return "unknown";
}

} // namespace netda

#pragma once

#include <stdexcept>
#include <string>

namespace dnodal {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration errors carry the JSON path of the offending field.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string path)
      : Error(path.empty() ? what : path + ": " + what), message_(what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::string path_;
};

class MalformedConfig : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InvalidValue : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// No sign change of the characteristic function around the seed of index n.
class BracketFailure : public Error {
 public:
  explicit BracketFailure(int n)
      : Error("no sign change of the characteristic function near index n=" +
              std::to_string(n)),
        n_(n) {}
  int index() const noexcept { return n_; }

 private:
  int n_;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class EmptyLevel : public Error {
 public:
  explicit EmptyLevel(int n)
      : Error("no nodes available for level n=" + std::to_string(n)), n_(n) {}
  int index() const noexcept { return n_; }

 private:
  int n_;
};

class DegenerateAlpha : public Error {
 public:
  using Error::Error;
};

class WindowTooLarge : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dnodal

#pragma once

#include <stdexcept>
#include <string>

namespace twistlab {

enum class ErrorKind {
  Config,    // inadmissible request or malformed configuration
  Domain,    // argument outside the mathematical domain of an operation
  Capacity,  // a table or provider is too short for the request
  Io,        // filesystem or parse failure
  DataGap,   // required arithmetic data missing from a data file
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::Config, w) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::Domain, w) {}
};
struct CapacityError : Error {
  explicit CapacityError(const std::string& w) : Error(ErrorKind::Capacity, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::Io, w) {}
};
struct DataGapError : Error {
  explicit DataGapError(const std::string& w) : Error(ErrorKind::DataGap, w) {}
};

}  // namespace twistlab

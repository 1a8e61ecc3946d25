#ifndef EMOXAI_ERROR_H_
#define EMOXAI_ERROR_H_

#include <stdexcept>
#include <string>

namespace emoxai {

// Bad input data: malformed files, invalid labels, dimension mismatches.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration or arguments supplied by the caller.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A persisted document carries the wrong schema id or version.
class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace emoxai

#endif  // EMOXAI_ERROR_H_

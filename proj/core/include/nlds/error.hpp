#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nlds {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied parameter is outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A lookup fell outside the covered interval of a map or buffer.
class RangeError : public Error {
 public:
  RangeError(const std::string& what, double query, double lo, double hi);

  double query() const noexcept { return query_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double query_;
  double lo_;
  double hi_;
};

/// Knots or history entries were appended out of order.
class SequencingError : public Error {
 public:
  using Error::Error;
};

/// A state became non-finite or exceeded the blow-up guard.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double stamp, double linf);

  double stamp() const noexcept { return stamp_; }
  double linf() const noexcept { return linf_; }

 private:
  double stamp_;
  double linf_;
};

/// A problem specification or run configuration failed validation.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> diagnostics);

  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

class IoError : public Error {
 public:
  IoError(const std::string& what, std::string path);

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace nlds

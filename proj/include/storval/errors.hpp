#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace storval {

// All failures carry a short machine-parseable kind tag ("MissingFile",
// "OutOfRange", ...). The CLI prints "<kind>: <message>" and maps kinds to
// exit codes.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

inline Error io_error(const std::string& kind, const std::string& message) {
  return Error(kind, message);
}

}  // namespace storval

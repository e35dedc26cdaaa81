#pragma once

#include <stdexcept>
#include <string>

namespace tse {

// Invalid static configuration (grid dimensions, GA settings, CFL violations).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Runtime value outside its mathematical domain (e.g. density > k_j).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// File / parse failures in ingest and CLI artifact handling.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tse

#pragma once

#include <stdexcept>
#include <string>

namespace solwalk {

/// An operation asked for a_n or a product beyond the sequence's depth_cap.
/// The cap is a hard error boundary, never a silent truncation.
class depth_error : public std::runtime_error {
 public:
  explicit depth_error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid construction parameters or malformed run configuration.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller broke an operation contract (programming error, not input error).
class contract_error : public std::logic_error {
 public:
  explicit contract_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace solwalk

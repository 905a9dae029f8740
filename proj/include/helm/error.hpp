#pragma once

#include <stdexcept>
#include <string>

namespace helm {

enum class ErrorKind {
    validation,
    degenerate_normaliser,
    singular_system,
    gamma_plus_vanished,
    near_resonant,
    unsupported_mode,
    inapplicable_profile,
    not_in_interference,
    window_too_coarse,
};

const char* to_string(ErrorKind kind);

/// Library failure carrying a machine-readable kind and an optional magnitude.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what, double magnitude = 0.0)
        : std::runtime_error(what), kind_(kind), magnitude_(magnitude)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

    /// Offending magnitude for threshold failures (pivot, |beta_n|, ...).
    double magnitude() const noexcept { return magnitude_; }

  private:
    ErrorKind kind_;
    double magnitude_;
};

} // namespace helm

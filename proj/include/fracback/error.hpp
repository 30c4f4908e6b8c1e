#pragma once

#include <stdexcept>
#include <string>

namespace fracback {

/// A computation broke down numerically: a vanishing pivot, a factorisation
/// that lost definiteness, or an oracle quantity with the wrong sign.
/// Bad arguments are reported with std::invalid_argument instead.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fracback

#pragma once

#include <stdexcept>
#include <string>

namespace rosen {

// Raised for arguments outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

class QuadratureError : public std::runtime_error {
public:
    explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

// Mismatched grids, orders or sizes between objects that must agree.
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

class SampleSizeError : public std::invalid_argument {
public:
    explicit SampleSizeError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace rosen

#pragma once

#include <stdexcept>
#include <string>

namespace dpsw {

/// Failure to read or decode an input image; the message names the path.
class IngestionError : public std::runtime_error {
public:
    explicit IngestionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input image has a sample depth other than 8 bits per pixel.
class UnsupportedDepthError : public IngestionError {
public:
    explicit UnsupportedDepthError(const std::string& msg) : IngestionError(msg) {}
};

/// Filesystem write failure while emitting an output artifact.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Classifier training failed (degenerate classes or a singular covariance).
class ModelFitError : public std::runtime_error {
public:
    explicit ModelFitError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A class is too small to spread over the requested fold count.
class StratificationError : public std::runtime_error {
public:
    explicit StratificationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed text input (CSV/manifest); the message carries the line number.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dpsw

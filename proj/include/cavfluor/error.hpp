#pragma once

#include <stdexcept>
#include <string>

namespace cavfluor {

// Every error carries a short machine-readable class used by the CLI.
class Error : public std::runtime_error {
public:
	Error(std::string kind, const std::string &what)
	    : std::runtime_error(what), kind_(std::move(kind)) {}
	const std::string &kind() const noexcept { return kind_; }

private:
	std::string kind_;
};

struct InvalidArgument : Error {
	explicit InvalidArgument(const std::string &what) : Error("invalid_argument", what) {}
};

struct ShapeMismatch : Error {
	explicit ShapeMismatch(const std::string &what) : Error("shape_mismatch", what) {}
};

struct NumericalError : Error {
	explicit NumericalError(const std::string &what) : Error("numerical_error", what) {}
};

struct ConfigError : Error {
	explicit ConfigError(const std::string &what) : Error("config_error", what) {}
};

struct IoError : Error {
	explicit IoError(const std::string &what) : Error("io_error", what) {}
};

} // namespace cavfluor

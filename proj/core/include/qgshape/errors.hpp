#pragma once

#include <stdexcept>
#include <string>

namespace qgshape {

// Error categories, also used as CLI exit codes.
enum class ErrorCode : int {
    Generic = 1,
    Usage = 2,
    FileNotFound = 3,
    Parse = 4,
    InvalidMesh = 5,
    Cache = 6,
    Numeric = 7,
    Io = 8,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &msg) : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

struct FileNotFoundError : Error {
    explicit FileNotFoundError(const std::string &path)
        : Error(ErrorCode::FileNotFound, "file not found: " + path) {}
};

struct ParseError : Error {
    ParseError(const std::string &path, long line, const std::string &what)
        : Error(ErrorCode::Parse, path + ":" + std::to_string(line) + ": " + what), line(line) {}
    long line;
};

struct IndexOutOfRangeError : Error {
    explicit IndexOutOfRangeError(const std::string &what) : Error(ErrorCode::Parse, what) {}
};

struct InvalidMeshError : Error {
    explicit InvalidMeshError(const std::string &what) : Error(ErrorCode::InvalidMesh, what) {}
};

struct NumericError : Error {
    explicit NumericError(const std::string &what) : Error(ErrorCode::Numeric, what) {}
};

struct CacheError : Error {
    explicit CacheError(const std::string &what) : Error(ErrorCode::Cache, what) {}
};

struct IoError : Error {
    explicit IoError(const std::string &what) : Error(ErrorCode::Io, what) {}
};

} // namespace qgshape

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tapo {

/// Source position, 1-based. A zero line means "no position".
struct SourcePos {
    std::size_t line = 0;
    std::size_t column = 0;

    bool valid() const noexcept { return line != 0; }
};

enum class ErrorKind {
    Lexical,
    Syntax,
    UnknownName,
    Validation,
    ResourceLimit,
    Oracle,
    Runtime,
    Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base error for everything the engine reports. Carries a kind and, for
/// input errors, the position in the offending text.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, SourcePos pos = {});

    ErrorKind kind() const noexcept { return kind_; }
    const SourcePos& pos() const noexcept { return pos_; }
    const std::string& message() const noexcept { return message_; }

    /// True for errors caused by malformed input (lexing, parsing, names,
    /// validation, unreadable files).
    bool is_input_error() const noexcept;

    /// "source:line:col: kind: message", omitting the parts that are unknown.
    std::string describe() const;

    const std::string& source() const noexcept { return source_; }
    /// Copy of this error attributed to a file.
    Error in_source(std::string source) const;

private:
    ErrorKind kind_;
    SourcePos pos_;
    std::string message_;
    std::string source_;
};

/// Raised when the tableau exceeds its node budget.
class ResourceLimitError : public Error {
public:
    explicit ResourceLimitError(std::string message)
        : Error(ErrorKind::ResourceLimit, std::move(message)) {}
};

} // namespace tapo

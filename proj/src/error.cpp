#include "tapo/error.hpp"

namespace tapo {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Lexical: return "lexical error";
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::UnknownName: return "unknown name";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::ResourceLimit: return "resource limit exceeded";
    case ErrorKind::Oracle: return "oracle error";
    case ErrorKind::Runtime: return "runtime error";
    case ErrorKind::Io: return "i/o error";
    }
    return "error";
}

static std::string compose(ErrorKind kind, const std::string& message, const SourcePos& pos) {
    std::string out;
    if (pos.valid())
        out += std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": ";
    out += to_string(kind);
    out += ": ";
    out += message;
    return out;
}

Error::Error(ErrorKind kind, std::string message, SourcePos pos)
    : std::runtime_error(compose(kind, message, pos)), kind_(kind), pos_(pos),
      message_(std::move(message)) {}

bool Error::is_input_error() const noexcept {
    switch (kind_) {
    case ErrorKind::Lexical:
    case ErrorKind::Syntax:
    case ErrorKind::UnknownName:
    case ErrorKind::Validation:
    case ErrorKind::Io:
        return true;
    default:
        return false;
    }
}

std::string Error::describe() const {
    if (source_.empty())
        return what();
    return source_ + ":" + what();
}

Error Error::in_source(std::string source) const {
    Error copy(kind_, message_, pos_);
    copy.source_ = std::move(source);
    return copy;
}

} // namespace tapo

#pragma once

#include "tapo/context.hpp"
#include "tapo/kb.hpp"
#include "tapo/sheaf.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tapo {

/// Everything a KB file declares. Loading is all-or-nothing.
struct KBDocument {
    Signature signature;
    ContextPoset poset;
    std::vector<Covering> coverings;
    TBox tbox;
    ABox abox;
    Presheaf presheaf;

    KnowledgeState state() const { return {tbox, abox}; }
};

/// Parses the KB text format:
///
///   signature   concepts A, B.  roles r.  individuals a, b.
///   contexts    context U, V.   V <= U.
///   covers      cover U by V, W.
///   tbox        A <= exists r.B.
///   abox        a : A @ U.   (a, b) : r @ V.
///   facts       facts U : { a:A, (a,b):r }.
///
/// `#` starts a comment. Names must be declared before use.
KBDocument parse_kb(std::string_view text);

/// Reads and parses a file; errors are attributed to `path`.
KBDocument load_kb(const std::filesystem::path& path);

/// Reads a whole file, throwing Error(Io).
std::string read_file(const std::filesystem::path& path);

/// State dump: a header carrying the signature hash, then canonical_abox.
std::string write_state(const ABox& a, const Signature& sig);
/// Throws Error(Validation) if the header hash does not match `sig`.
ABox read_state(std::string_view text, const Signature& sig);

} // namespace tapo

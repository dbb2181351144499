#pragma once

#include "tapo/error.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace tapo {

enum class Tok {
    Ident,
    Amp,      // &
    Bar,      // |
    Bang,     // !
    Dot,      // .
    LParen,
    RParen,
    LBrace,
    RBrace,
    Colon,
    At,       // @
    Comma,
    Semi,
    Leq,      // <=
    Eq,       // =
    Star,     // *
    End,
};

const char* to_string(Tok t) noexcept;

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourcePos pos;
};

/// Splits text into tokens. `#` starts a comment running to end of line.
/// Throws Error(Lexical) on characters outside the token alphabet and on
/// identifiers that do not match [A-Za-z][A-Za-z0-9_]*.
std::vector<Token> tokenize(std::string_view text, SourcePos origin = {1, 1});

/// Words with fixed meaning in one of the surface grammars; never valid as
/// declared names.
bool is_reserved_word(std::string_view word) noexcept;

bool is_valid_identifier(std::string_view word) noexcept;

/// Cursor over a token vector with one-token lookahead and save/restore for
/// the few places the grammars need to backtrack.
class TokenStream {
public:
    explicit TokenStream(std::vector<Token> tokens);

    const Token& peek(std::size_t ahead = 0) const;
    const Token& next();
    bool at(Tok kind) const { return peek().kind == kind; }
    bool at_word(std::string_view word) const;
    bool accept(Tok kind);
    bool accept_word(std::string_view word);
    const Token& expect(Tok kind, std::string_view what);
    void expect_word(std::string_view word);
    /// Expect an identifier that is not a reserved word.
    const Token& expect_name(std::string_view what);
    bool at_end() const { return at(Tok::End); }

    std::size_t mark() const { return index_; }
    void reset(std::size_t mark) { index_ = mark; }

    /// Held while a recursive parser descends one level; throws
    /// Error(Syntax) past kMaxNesting so hostile input cannot exhaust the stack.
    class Nesting {
    public:
        explicit Nesting(TokenStream& ts);
        ~Nesting() { --ts_.depth_; }
        Nesting(const Nesting&) = delete;
        Nesting& operator=(const Nesting&) = delete;

    private:
        TokenStream& ts_;
    };
    static constexpr std::size_t kMaxNesting = 512;
    /// Longest run of one binary operator ('&', '|', ';'). Chains nest to
    /// the left, so every later pass over the tree recurses this deep.
    static constexpr std::size_t kMaxChain = 4096;
    /// Counts one more operand in a chain; fails past kMaxChain.
    void chain_step(std::size_t& length) const;

    [[noreturn]] void fail(std::string_view message) const;
    [[noreturn]] void fail_at(const Token& tok, std::string_view message) const;

private:
    std::vector<Token> tokens_;
    std::size_t index_ = 0;
    std::size_t depth_ = 0;
};

std::string describe_token(const Token& tok);

} // namespace tapo

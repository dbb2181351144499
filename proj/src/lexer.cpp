#include "tapo/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace tapo {

namespace {

constexpr std::array kReserved = {
    // concept and program grammars
    "top", "bot", "exists", "forall", "true", "false", "skip", "add", "del", "if", "then",
    "else", "fi", "while", "do", "od",
    // kb file grammar
    "signature", "contexts", "covers", "tbox", "abox", "facts", "concepts", "roles",
    "individuals", "context", "cover", "by",
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

} // namespace

const char* to_string(Tok t) noexcept {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Amp: return "'&'";
    case Tok::Bar: return "'|'";
    case Tok::Bang: return "'!'";
    case Tok::Dot: return "'.'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Colon: return "':'";
    case Tok::At: return "'@'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Leq: return "'<='";
    case Tok::Eq: return "'='";
    case Tok::Star: return "'*'";
    case Tok::End: return "end of input";
    }
    return "token";
}

bool is_reserved_word(std::string_view word) noexcept {
    return std::find(kReserved.begin(), kReserved.end(), word) != kReserved.end();
}

bool is_valid_identifier(std::string_view word) noexcept {
    if (word.empty() || !ident_start(word.front()))
        return false;
    return std::all_of(word.begin(), word.end(), ident_char);
}

std::vector<Token> tokenize(std::string_view text, SourcePos origin) {
    std::vector<Token> out;
    std::size_t line = origin.line;
    std::size_t col = origin.column;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n')
                advance(1);
            continue;
        }
        SourcePos pos{line, col};
        if (ident_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j]))
                ++j;
            std::string word(text.substr(i, j - i));
            if (!ident_start(word.front()))
                throw Error(ErrorKind::Lexical, "bad identifier '" + word + "'", pos);
            out.push_back({Tok::Ident, std::move(word), pos});
            advance(j - i);
            continue;
        }
        Tok kind;
        std::size_t len = 1;
        switch (c) {
        case '&': kind = Tok::Amp; break;
        case '|': kind = Tok::Bar; break;
        case '!': kind = Tok::Bang; break;
        case '.': kind = Tok::Dot; break;
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case '{': kind = Tok::LBrace; break;
        case '}': kind = Tok::RBrace; break;
        case ':': kind = Tok::Colon; break;
        case '@': kind = Tok::At; break;
        case ',': kind = Tok::Comma; break;
        case ';': kind = Tok::Semi; break;
        case '=': kind = Tok::Eq; break;
        case '*': kind = Tok::Star; break;
        case '<':
            if (i + 1 < text.size() && text[i + 1] == '=') {
                kind = Tok::Leq;
                len = 2;
                break;
            }
            [[fallthrough]];
        default: {
            std::string shown;
            if (std::isprint(static_cast<unsigned char>(c)))
                shown = std::string("'") + c + "'";
            else
                shown = "byte 0x" + [&] {
                    const char* hex = "0123456789abcdef";
                    auto u = static_cast<unsigned char>(c);
                    return std::string{hex[u >> 4], hex[u & 15]};
                }();
            throw Error(ErrorKind::Lexical, "unexpected character " + shown, pos);
        }
        }
        out.push_back({kind, std::string(text.substr(i, len)), pos});
        advance(len);
    }
    out.push_back({Tok::End, "", {line, col}});
    return out;
}

std::string describe_token(const Token& tok) {
    if (tok.kind == Tok::Ident)
        return "'" + tok.text + "'";
    return to_string(tok.kind);
}

TokenStream::TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
    if (tokens_.empty() || tokens_.back().kind != Tok::End)
        tokens_.push_back({Tok::End, "", tokens_.empty() ? SourcePos{1, 1} : tokens_.back().pos});
}

const Token& TokenStream::peek(std::size_t ahead) const {
    std::size_t k = std::min(index_ + ahead, tokens_.size() - 1);
    return tokens_[k];
}

const Token& TokenStream::next() {
    const Token& tok = tokens_[index_];
    if (index_ + 1 < tokens_.size())
        ++index_;
    return tok;
}

bool TokenStream::at_word(std::string_view word) const {
    return peek().kind == Tok::Ident && peek().text == word;
}

bool TokenStream::accept(Tok kind) {
    if (!at(kind))
        return false;
    next();
    return true;
}

bool TokenStream::accept_word(std::string_view word) {
    if (!at_word(word))
        return false;
    next();
    return true;
}

const Token& TokenStream::expect(Tok kind, std::string_view what) {
    if (!at(kind))
        fail("expected " + std::string(what) + ", found " + describe_token(peek()));
    return next();
}

void TokenStream::expect_word(std::string_view word) {
    if (!at_word(word))
        fail("expected '" + std::string(word) + "', found " + describe_token(peek()));
    next();
}

const Token& TokenStream::expect_name(std::string_view what) {
    if (!at(Tok::Ident) || is_reserved_word(peek().text))
        fail("expected " + std::string(what) + ", found " + describe_token(peek()));
    return next();
}

TokenStream::Nesting::Nesting(TokenStream& ts) : ts_(ts) {
    if (ts_.depth_ >= kMaxNesting)
        ts_.fail("expression nested more than " + std::to_string(kMaxNesting) + " levels deep");
    ++ts_.depth_;
}

void TokenStream::chain_step(std::size_t& length) const {
    if (++length > kMaxChain)
        fail("more than " + std::to_string(kMaxChain) + " operands in one chain");
}

void TokenStream::fail(std::string_view message) const { fail_at(peek(), message); }

void TokenStream::fail_at(const Token& tok, std::string_view message) const {
    throw Error(ErrorKind::Syntax, std::string(message), tok.pos);
}

} // namespace tapo

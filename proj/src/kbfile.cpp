#include "tapo/kbfile.hpp"

#include "tapo/error.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace tapo {

namespace {

enum class Section { None, Signature, Contexts, Covers, TBox, ABox, Facts };

const char* section_name(Section s) {
    switch (s) {
    case Section::None: return "(none)";
    case Section::Signature: return "signature";
    case Section::Contexts: return "contexts";
    case Section::Covers: return "covers";
    case Section::TBox: return "tbox";
    case Section::ABox: return "abox";
    case Section::Facts: return "facts";
    }
    return "?";
}

class KBParser {
public:
    explicit KBParser(std::string_view text) : ts_(tokenize(text)) {}

    KBDocument parse() {
        while (!ts_.at_end())
            statement();
        return finish();
    }

private:
    void statement() {
        const Token& head = ts_.peek();
        if (head.kind == Tok::Ident) {
            const std::string& w = head.text;
            if (w == "signature") return header(Section::Signature);
            if (w == "contexts") return header(Section::Contexts);
            if (w == "covers") return header(Section::Covers);
            if (w == "tbox") return header(Section::TBox);
            if (w == "abox") return header(Section::ABox);
            if (w == "facts") {
                if (ts_.peek(1).kind == Tok::Ident && ts_.peek(2).kind == Tok::Colon)
                    return facts_statement();
                return header(Section::Facts);
            }
            if (w == "concepts") return declaration(NameKind::Concept);
            if (w == "roles") return declaration(NameKind::Role);
            if (w == "individuals") return declaration(NameKind::Individual);
            if (w == "context") return declaration(NameKind::Context);
            if (w == "cover") return cover_statement();
        }
        switch (section_) {
        case Section::Contexts: return order_statement();
        case Section::TBox: return inclusion_statement();
        case Section::ABox: return assertion_statement();
        default:
            ts_.fail("unexpected " + describe_token(head) + " in section " +
                     section_name(section_));
        }
    }

    void header(Section s) {
        ts_.next();
        section_ = s;
    }

    void declaration(NameKind kind) {
        ts_.next();
        do {
            const Token& tok = ts_.expect_name(std::string(to_string(kind)) + " name");
            try {
                doc_.signature.declare(kind, tok.text);
            } catch (const Error& e) {
                throw Error(ErrorKind::Validation, e.message(), tok.pos);
            }
            if (kind == NameKind::Context)
                poset_.context(tok.text);
        } while (ts_.accept(Tok::Comma));
        terminator();
    }

    const Token& context_name() {
        const Token& tok = ts_.expect_name("context name");
        if (!doc_.signature.has(NameKind::Context, tok.text))
            throw Error(ErrorKind::UnknownName, "undeclared context '" + tok.text + "'", tok.pos);
        return tok;
    }

    void order_statement() {
        const Token& sub = context_name();
        ts_.expect(Tok::Leq, "'<='");
        const Token& super = context_name();
        poset_.leq(sub.text, super.text);
        order_pos_.push_back(sub.pos);
        terminator();
    }

    void cover_statement() {
        const Token& kw = ts_.next();
        Covering c;
        c.target = context_name().text;
        ts_.expect_word("by");
        do {
            c.members.push_back(context_name().text);
        } while (ts_.accept(Tok::Comma));
        terminator();
        doc_.coverings.push_back(std::move(c));
        cover_pos_.push_back(kw.pos);
    }

    void inclusion_statement() {
        Concept lhs = parse_concept(ts_, doc_.signature);
        ts_.expect(Tok::Leq, "'<=' in concept inclusion");
        Concept rhs = parse_concept(ts_, doc_.signature);
        terminator();
        doc_.tbox.add(std::move(lhs), std::move(rhs));
    }

    void assertion_statement() {
        doc_.abox.insert(parse_assertion(ts_, doc_.signature));
        terminator();
    }

    void facts_statement() {
        ts_.next();
        const Token& ctx = context_name();
        ts_.expect(Tok::Colon, "':'");
        FactSet facts = parse_fact_set(ts_, doc_.signature);
        terminator();
        if (!universes_.emplace(ctx.text, std::move(facts)).second)
            throw Error(ErrorKind::Validation, "universe of '" + ctx.text + "' declared twice", ctx.pos);
    }

    void terminator() { ts_.expect(Tok::Dot, "'.' to end the statement"); }

    KBDocument finish() {
        try {
            doc_.poset = poset_.build();
        } catch (const Error& e) {
            SourcePos pos = order_pos_.empty() ? SourcePos{1, 1} : order_pos_.back();
            throw Error(e.kind(), e.message(), pos);
        }
        for (std::size_t i = 0; i < doc_.coverings.size(); ++i) {
            auto violations = validate_covering(doc_.poset, doc_.coverings[i]);
            if (!violations.empty())
                throw Error(ErrorKind::Validation,
                            "invalid covering: " + violations.front().message, cover_pos_[i]);
        }
        doc_.presheaf = Presheaf(doc_.poset);
        for (auto& [ctx, facts] : universes_)
            doc_.presheaf.set_universe(ctx, std::move(facts));
        return std::move(doc_);
    }

    TokenStream ts_;
    Section section_ = Section::None;
    KBDocument doc_;
    ContextPoset::Builder poset_;
    std::vector<SourcePos> order_pos_;
    std::vector<SourcePos> cover_pos_;
    std::map<std::string, FactSet> universes_;
};

} // namespace

KBDocument parse_kb(std::string_view text) { return KBParser(text).parse(); }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

KBDocument load_kb(const std::filesystem::path& path) {
    std::string text = read_file(path);
    try {
        return parse_kb(text);
    } catch (const Error& e) {
        throw e.in_source(path.string());
    }
}

namespace {

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

constexpr std::string_view kStateHeader = "# tapo-state v1 signature=";

} // namespace

std::string write_state(const ABox& a, const Signature& sig) {
    return std::string(kStateHeader) + hash_hex(sig.hash()) + "\n" + canonical_abox(a);
}

ABox read_state(std::string_view text, const Signature& sig) {
    std::size_t eol = text.find('\n');
    std::string_view header = text.substr(0, eol);
    if (!header.empty() && header.back() == '\r')
        header.remove_suffix(1);
    if (header.substr(0, kStateHeader.size()) != kStateHeader)
        throw Error(ErrorKind::Syntax, "missing state header", {1, 1});
    std::string_view hash = header.substr(kStateHeader.size());
    if (hash != hash_hex(sig.hash()))
        throw Error(ErrorKind::Validation,
                    "state was written for a different signature (hash " + std::string(hash) + ")",
                    {1, kStateHeader.size() + 1});
    ABox out;
    if (eol == std::string_view::npos)
        return out;
    std::size_t line_no = 1;
    std::size_t start = eol + 1;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        ++line_no;
        std::string_view line = text.substr(start, end - start);
        if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
            TokenStream ts(tokenize(line, {line_no, 1}));
            out.insert(parse_assertion(ts, sig));
            if (!ts.at_end())
                ts.fail("unexpected " + describe_token(ts.peek()) + " after assertion");
        }
        start = end + 1;
    }
    return out;
}

} // namespace tapo

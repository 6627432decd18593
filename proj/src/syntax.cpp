#include "sessionforge/syntax.hpp"

#include <cctype>
#include <set>
#include <vector>

namespace sf {

SyntaxError::SyntaxError(const std::string& msg, SourceSpan span)
    : std::runtime_error(span.file + ":" + std::to_string(span.start.line) + ":" +
                         std::to_string(span.start.col) + ": " + msg),
      bare_(msg),
      span_(std::move(span)) {}

namespace {

enum class Tok {
    Ident,
    Number,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    DColon,
    Semi,
    Dot,
    Bar,
    Turnstile,
    TurnstileI,
    TurnstileC,
    Star,
    Lolli,
    Plus,
    Amp,
    Bang,
    Query,
    SelectOp,
    BranchOp,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    SourcePos start, end;
};

const std::set<std::string>& keywords() {
    static const std::set<std::string> k{"new", "send", "recv", "serv", "fwd",
                                         "close", "wait", "par", "bot"};
    return k;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Lexer {
public:
    Lexer(const std::string& text, const std::string& file) : s_(text), file_(file) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_ws();
            SourcePos st = pos_;
            if (i_ >= s_.size()) {
                out.push_back({Tok::End, "", st, st});
                return out;
            }
            char c = s_[i_];
            auto emit = [&](Tok k, std::size_t len) {
                std::string t = s_.substr(i_, len);
                for (std::size_t n = 0; n < len; ++n) advance();
                out.push_back({k, t, st, pos_});
            };
            auto next = [&](std::size_t k) { return i_ + k < s_.size() ? s_[i_ + k] : '\0'; };
            if (ident_start(c)) {
                std::size_t j = i_;
                while (j < s_.size() && ident_char(s_[j])) ++j;
                emit(Tok::Ident, j - i_);
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t j = i_;
                while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
                emit(Tok::Number, j - i_);
            } else if (c == '(') {
                emit(Tok::LParen, 1);
            } else if (c == ')') {
                emit(Tok::RParen, 1);
            } else if (c == '{') {
                emit(Tok::LBrace, 1);
            } else if (c == '}') {
                emit(Tok::RBrace, 1);
            } else if (c == ',') {
                emit(Tok::Comma, 1);
            } else if (c == ':') {
                if (next(1) == ':') emit(Tok::DColon, 2);
                else emit(Tok::Colon, 1);
            } else if (c == ';') {
                emit(Tok::Semi, 1);
            } else if (c == '.') {
                emit(Tok::Dot, 1);
            } else if (c == '|') {
                if (next(1) == '-') {
                    if ((next(2) == 'i' || next(2) == 'c') && !ident_char(next(3)))
                        emit(next(2) == 'i' ? Tok::TurnstileI : Tok::TurnstileC, 3);
                    else
                        emit(Tok::Turnstile, 2);
                } else {
                    emit(Tok::Bar, 1);
                }
            } else if (c == '*') {
                emit(Tok::Star, 1);
            } else if (c == '-' && next(1) == 'o' && !ident_char(next(2))) {
                emit(Tok::Lolli, 2);
            } else if (c == '+') {
                emit(Tok::Plus, 1);
            } else if (c == '&') {
                emit(Tok::Amp, 1);
            } else if (c == '!') {
                emit(Tok::Bang, 1);
            } else if (c == '?') {
                emit(Tok::Query, 1);
            } else if (c == '<' && next(1) == '<') {
                emit(Tok::SelectOp, 2);
            } else if (c == '>' && next(1) == '>') {
                emit(Tok::BranchOp, 2);
            } else {
                SourcePos en = st;
                ++en.col;
                throw SyntaxError(std::string("unexpected character '") + c + "'",
                                  {file_, st, en});
            }
        }
    }

private:
    void advance() {
        if (s_[i_] == '\n') {
            ++pos_.line;
            pos_.col = 1;
        } else {
            ++pos_.col;
        }
        ++i_;
    }
    void skip_ws() {
        for (;;) {
            while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) advance();
            if (i_ < s_.size() && s_[i_] == '#') {
                while (i_ < s_.size() && s_[i_] != '\n') advance();
                continue;
            }
            return;
        }
    }

    const std::string& s_;
    std::string file_;
    std::size_t i_ = 0;
    SourcePos pos_;
};

class Parser {
public:
    Parser(const std::string& text, const std::string& file)
        : file_(file), toks_(Lexer(text, file).run()) {}

    Type type() {
        Type a = par_level();
        if (peek().kind == Tok::Lolli) {
            take();
            return Type::lolli(a, type());
        }
        return a;
    }

    Process process() {
        Process p = prefix();
        while (peek().kind == Tok::Bar) {
            take();
            p = Process::par(p, prefix());
        }
        return p;
    }

    Judgment judgment() {
        bool classical = false;
        for (const auto& t : toks_)
            if (t.kind == Tok::TurnstileC) classical = true;
        if (classical) {
            Process p = process();
            expect(Tok::TurnstileC, "'|-c'");
            Context g = context(Tok::Semi);
            expect(Tok::Semi, "';'");
            Context d = context(Tok::End);
            Judgment j = Judgment::cll(p, g, d);
            check_wf(j);
            return j;
        }
        Context g = context(Tok::Semi);
        expect(Tok::Semi, "';'");
        Context d = context(Tok::Turnstile, Tok::TurnstileI);
        System sys = System::ULL;
        if (peek().kind == Tok::TurnstileI) {
            sys = System::ILL;
            take();
        } else {
            expect(Tok::Turnstile, "'|-' or '|-i'");
        }
        Process p = process();
        expect(Tok::DColon, "'::'");
        Context l = context(Tok::End);
        Judgment j = Judgment::ull(g, d, p, l, sys);
        check_wf(j);
        return j;
    }

    void finish() {
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after end of input");
    }

private:
    const Token& peek(std::size_t k = 0) const {
        std::size_t i = std::min(pos_ + k, toks_.size() - 1);
        return toks_[i];
    }
    const Token& take() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        throw SyntaxError(msg, {file_, t.start, t.end});
    }
    [[noreturn]] void fail_at(const Token& t, const std::string& msg) const {
        throw SyntaxError(msg, {file_, t.start, t.end});
    }
    const Token& expect(Tok k, const std::string& what) {
        if (peek().kind != k) {
            std::string got = peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'";
            fail("expected " + what + ", found " + got);
        }
        return take();
    }
    bool at_keyword(const char* kw) const {
        return peek().kind == Tok::Ident && peek().text == kw;
    }
    Name name() {
        const Token& t = peek();
        if (t.kind != Tok::Ident) fail("expected a name");
        if (keywords().count(t.text)) fail("keyword '" + t.text + "' used as a name");
        return take().text;
    }
    std::string label() {
        const Token& t = peek();
        if (t.kind == Tok::Ident || t.kind == Tok::Number) return take().text;
        fail("expected a label");
    }

    Type par_level() {
        Type a = tensor_level();
        if (at_keyword("par")) {
            take();
            return Type::par(a, par_level());
        }
        return a;
    }
    Type tensor_level() {
        Type a = unary();
        if (peek().kind == Tok::Star) {
            take();
            return Type::tensor(a, tensor_level());
        }
        return a;
    }
    Type unary() {
        if (peek().kind == Tok::Bang) {
            take();
            return Type::bang(unary());
        }
        if (peek().kind == Tok::Query) {
            take();
            return Type::query(unary());
        }
        return atom();
    }
    Type atom() {
        const Token& t = peek();
        if (t.kind == Tok::Number && t.text == "1") {
            take();
            return Type::one();
        }
        if (t.kind == Tok::Ident && t.text == "bot") {
            take();
            return Type::bot();
        }
        if (t.kind == Tok::LParen) {
            take();
            Type a = type();
            expect(Tok::RParen, "')'");
            return a;
        }
        if (t.kind == Tok::Plus || t.kind == Tok::Amp) {
            bool plus = t.kind == Tok::Plus;
            take();
            expect(Tok::LBrace, "'{'");
            Type::Branches bs;
            for (;;) {
                const Token& lt = peek();
                std::string l = label();
                expect(Tok::Colon, "':'");
                Type a = type();
                if (!bs.emplace(l, a).second) fail_at(lt, "duplicate label '" + l + "'");
                if (peek().kind == Tok::Comma) {
                    take();
                    continue;
                }
                break;
            }
            expect(Tok::RBrace, "'}'");
            return plus ? Type::plus(std::move(bs)) : Type::with(std::move(bs));
        }
        fail(t.kind == Tok::End ? "expected a type, found end of input"
                                : "expected a type, found '" + t.text + "'");
    }

    // '(' proc ('|' proc)* ')' returning the top-level items.
    std::vector<Process> group() {
        expect(Tok::LParen, "'('");
        std::vector<Process> items{prefix()};
        while (peek().kind == Tok::Bar) {
            take();
            items.push_back(prefix());
        }
        expect(Tok::RParen, "')'");
        return items;
    }

    static Process fold(const std::vector<Process>& items) {
        Process p = items[0];
        for (std::size_t i = 1; i < items.size(); ++i) p = Process::par(p, items[i]);
        return p;
    }

    Process prefix() {
        const Token& t = peek();
        if (t.kind == Tok::Number && t.text == "0") {
            take();
            return Process::inact();
        }
        if (t.kind == Tok::LParen) return fold(group());
        if (t.kind != Tok::Ident) {
            fail(t.kind == Tok::End ? "expected a process, found end of input"
                                    : "expected a process, found '" + t.text + "'");
        }
        if (t.text == "new") {
            take();
            Name x = name();
            std::optional<Type> ann;
            if (peek().kind == Tok::Colon) {
                take();
                ann = type();
            }
            return Process::restrict(x, ann, fold(group()));
        }
        if (t.text == "send") {
            take();
            Name x = name();
            expect(Tok::LParen, "'('");
            Name y = name();
            expect(Tok::RParen, "')'");
            expect(Tok::Dot, "'.'");
            if (peek().kind == Tok::LParen) {
                const Token& gt = peek();
                auto items = group();
                if (items.size() == 2) return Process::send(x, y, items[0], items[1]);
                if (items.size() == 1) return Process::copy(x, y, items[0]);
                fail_at(gt, "a bound send takes exactly two parallel components");
            }
            return Process::copy(x, y, prefix());
        }
        if (t.text == "recv" || t.text == "serv") {
            bool recv = t.text == "recv";
            take();
            Name x = name();
            expect(Tok::LParen, "'('");
            Name y = name();
            expect(Tok::RParen, "')'");
            expect(Tok::Dot, "'.'");
            Process body = prefix();
            return recv ? Process::recv(x, y, body) : Process::server(x, y, body);
        }
        if (t.text == "fwd") {
            take();
            Name x = name();
            Name y = name();
            return Process::fwd(x, y);
        }
        if (t.text == "close") {
            take();
            return Process::close(name());
        }
        if (t.text == "wait") {
            take();
            Name x = name();
            expect(Tok::Dot, "'.'");
            return Process::wait(x, prefix());
        }
        Name x = name();
        if (peek().kind == Tok::SelectOp) {
            take();
            std::string l = label();
            expect(Tok::Dot, "'.'");
            return Process::select(x, l, prefix());
        }
        if (peek().kind == Tok::BranchOp) {
            take();
            expect(Tok::LBrace, "'{'");
            Process::Arms arms;
            for (;;) {
                const Token& lt = peek();
                std::string l = label();
                expect(Tok::Colon, "':'");
                Process a = process();
                if (!arms.emplace(l, a).second) fail_at(lt, "duplicate branch label '" + l + "'");
                if (peek().kind == Tok::Comma) {
                    take();
                    continue;
                }
                break;
            }
            expect(Tok::RBrace, "'}'");
            return Process::branch(x, std::move(arms));
        }
        fail("expected '<<' or '>>' after '" + x + "'");
    }

    Context context(Tok stop1, Tok stop2 = Tok::End) {
        Context c;
        if (peek().kind == Tok::Dot) {
            take();
            return c;
        }
        if (peek().kind == stop1 || peek().kind == stop2) return c;
        for (;;) {
            const Token& nt = peek();
            Name n = name();
            expect(Tok::Colon, "':'");
            Type t = type();
            if (!c.add(n, t)) fail_at(nt, "duplicate name '" + n + "' in context");
            if (peek().kind == Tok::Comma) {
                take();
                continue;
            }
            return c;
        }
    }

    void check_wf(const Judgment& j) const {
        std::string e = judgment_problem(j);
        if (!e.empty()) throw SyntaxError(e, {file_, toks_.front().start, toks_.back().end});
    }

    std::string file_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// Precedence levels for printing: -o 0, par (never printed), * 2, prefix 3, atom 4.
int level(const Type& t) {
    switch (t.kind()) {
        case TypeKind::Lolli: return 0;
        case TypeKind::Tensor: return 2;
        case TypeKind::Bang:
        case TypeKind::Query: return 3;
        default: return 4;
    }
}

void print_type_at(const Type& t, int min_level, std::string& out) {
    bool paren = level(t) < min_level;
    if (paren) out += '(';
    switch (t.kind()) {
        case TypeKind::One:
            out += '1';
            break;
        case TypeKind::Bot:
            out += "bot";
            break;
        case TypeKind::Lolli:
            print_type_at(t.left(), 1, out);
            out += " -o ";
            print_type_at(t.right(), 0, out);
            break;
        case TypeKind::Tensor:
            print_type_at(t.left(), 3, out);
            out += " * ";
            print_type_at(t.right(), 2, out);
            break;
        case TypeKind::Bang:
        case TypeKind::Query:
            out += t.is(TypeKind::Bang) ? '!' : '?';
            print_type_at(t.body(), 3, out);
            break;
        case TypeKind::Plus:
        case TypeKind::With: {
            out += t.is(TypeKind::Plus) ? "+{" : "&{";
            bool first = true;
            for (const auto& [l, a] : t.branches()) {
                if (!first) out += ", ";
                first = false;
                out += l;
                out += ':';
                print_type_at(a, 0, out);
            }
            out += '}';
            break;
        }
    }
    if (paren) out += ')';
}

void print_proc(const Process& p, std::string& out);

// Operand of '|': parenthesize nested Par.
void print_operand(const Process& p, std::string& out) {
    if (p.is(ProcKind::Par)) {
        out += '(';
        print_proc(p, out);
        out += ')';
    } else {
        print_proc(p, out);
    }
}

// Continuation after a prefix: Par must be grouped.
void print_cont(const Process& p, std::string& out) { print_operand(p, out); }

void print_proc(const Process& p, std::string& out) {
    switch (p.kind()) {
        case ProcKind::Inact:
            out += '0';
            return;
        case ProcKind::Restrict:
            out += "new ";
            out += p.chan();
            if (p.ann()) {
                out += ':';
                print_type_at(*p.ann(), 0, out);
            }
            out += " (";
            if (p.first().is(ProcKind::Par)) {
                print_operand(p.first().first(), out);
                out += " | ";
                print_operand(p.first().second(), out);
            } else {
                print_operand(p.first(), out);
            }
            out += ')';
            return;
        case ProcKind::Par:
            print_operand(p.first(), out);
            out += " | ";
            print_operand(p.second(), out);
            return;
        case ProcKind::Send:
            out += "send " + p.chan() + "(" + p.name2() + ").";
            if (p.bound_send()) {
                out += '(';
                print_operand(p.first(), out);
                out += " | ";
                print_operand(p.second(), out);
                out += ')';
            } else if (p.first().is(ProcKind::Par)) {
                out += '(';
                print_operand(p.first(), out);
                out += ')';
            } else {
                out += ' ';
                print_cont(p.first(), out);
            }
            return;
        case ProcKind::Recv:
        case ProcKind::Server:
            out += p.is(ProcKind::Recv) ? "recv " : "serv ";
            out += p.chan() + "(" + p.name2() + "). ";
            print_cont(p.first(), out);
            return;
        case ProcKind::Select:
            out += p.chan() + " << " + p.label() + " . ";
            print_cont(p.first(), out);
            return;
        case ProcKind::Branch: {
            out += p.chan() + " >> {";
            bool first = true;
            for (const auto& [l, a] : p.arms()) {
                if (!first) out += ", ";
                first = false;
                out += l + ": ";
                print_proc(a, out);
            }
            out += '}';
            return;
        }
        case ProcKind::Forward:
            out += "fwd " + p.chan() + " " + p.name2();
            return;
        case ProcKind::Close:
            out += "close " + p.chan();
            return;
        case ProcKind::Wait:
            out += "wait " + p.chan() + " . ";
            print_cont(p.first(), out);
            return;
    }
}

}  // namespace

Type parse_type(const std::string& text, const std::string& file) {
    Parser ps(text, file);
    Type t = ps.type();
    ps.finish();
    return t;
}

Process parse_process(const std::string& text, const std::string& file) {
    Parser ps(text, file);
    Process p = ps.process();
    ps.finish();
    return p;
}

Judgment parse_judgment(const std::string& text, const std::string& file) {
    Parser ps(text, file);
    Judgment j = ps.judgment();
    ps.finish();
    return j;
}

std::string print_type(const Type& t) {
    std::string out;
    print_type_at(t, 0, out);
    return out;
}

std::string print_process(const Process& p) {
    std::string out;
    print_proc(p, out);
    return out;
}

std::string print_context(const Context& c) {
    if (c.empty()) return ".";
    std::string out;
    bool first = true;
    for (const auto& [n, t] : c.entries()) {
        if (!first) out += ", ";
        first = false;
        out += n + ":" + print_type(t);
    }
    return out;
}

std::string print_judgment(const Judgment& j) {
    if (j.system == System::CLL)
        return print_process(j.process) + " |-c " + print_context(j.gamma) + " ; " +
               print_context(j.delta);
    return print_context(j.gamma) + " ; " + print_context(j.delta) +
           (j.system == System::ILL ? " |-i " : " |- ") + print_process(j.process) + " :: " +
           print_context(j.lambda);
}

}  // namespace sf

#include "hm/sexpr.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace hm {

std::string SExpr::str() const {
    if (isAtom) return atom;
    std::string out = "(";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ' ';
        out += items[i].str();
    }
    out += ')';
    return out;
}

namespace {

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    bool atEnd() {
        skip();
        return pos_ >= text_.size();
    }

    SExpr read() {
        skip();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == ')') fail("unexpected ')'");
        if (c == '(') {
            int startLine = line_;
            ++pos_;
            std::vector<SExpr> items;
            for (;;) {
                skip();
                if (pos_ >= text_.size()) fail("unterminated list opened on line " + std::to_string(startLine));
                if (text_[pos_] == ')') {
                    ++pos_;
                    return SExpr::makeList(std::move(items), startLine);
                }
                items.push_back(read());
            }
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
               text_[pos_] != ')' && text_[pos_] != ';')
            ++pos_;
        return SExpr::makeAtom(std::string(text_.substr(start, pos_ - start)), line_);
    }

private:
    void skip() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("line " + std::to_string(line_) + ": " + msg);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

}  // namespace

std::vector<SExpr> parseSExprs(std::string_view text) {
    Reader r(text);
    std::vector<SExpr> out;
    while (!r.atEnd()) out.push_back(r.read());
    return out;
}

SExpr parseSExpr(std::string_view text) {
    auto all = parseSExprs(text);
    if (all.size() != 1) throw ParseError("expected exactly one expression, got " + std::to_string(all.size()));
    return std::move(all.front());
}

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace hm

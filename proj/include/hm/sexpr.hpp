#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hm {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A plain s-expression: either an atom or a list.
struct SExpr {
    bool isAtom = false;
    std::string atom;
    std::vector<SExpr> items;
    int line = 0;

    static SExpr makeAtom(std::string a, int line = 0) {
        SExpr s;
        s.isAtom = true;
        s.atom = std::move(a);
        s.line = line;
        return s;
    }
    static SExpr makeList(std::vector<SExpr> xs, int line = 0) {
        SExpr s;
        s.items = std::move(xs);
        s.line = line;
        return s;
    }

    bool isList() const { return !isAtom; }
    bool isAtomNamed(std::string_view name) const { return isAtom && atom == name; }
    /// True for a list whose first element is the atom `head`.
    bool isForm(std::string_view head) const {
        return !isAtom && !items.empty() && items[0].isAtomNamed(head);
    }
    std::size_t size() const { return items.size(); }
    const SExpr& operator[](std::size_t i) const { return items.at(i); }

    std::string str() const;
};

/// Parses every top-level expression in `text`. `;` starts a line comment.
std::vector<SExpr> parseSExprs(std::string_view text);
/// Parses exactly one expression.
SExpr parseSExpr(std::string_view text);

std::string readFile(const std::string& path);

}  // namespace hm

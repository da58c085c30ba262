#include "qkahler/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>

namespace qk {

int AlgExpr::max_index() const {
    int m = 0;
    for (const ExprTerm& t : terms)
        for (const Token& tok : t.word)
            if (tok.kind != Token::Kind::Q) m = std::max(m, tok.index);
    return m;
}

bool AlgExpr::uses_q() const {
    for (const ExprTerm& t : terms)
        for (const Token& tok : t.word)
            if (tok.kind == Token::Kind::Q) return true;
    return false;
}

AlgExpr AlgExpr::operator*(const AlgExpr& rhs) const {
    AlgExpr out;
    for (const ExprTerm& a : terms)
        for (const ExprTerm& b : rhs.terms) {
            ExprTerm t;
            t.coeff = a.coeff * b.coeff;
            t.word = a.word;
            t.word.insert(t.word.end(), b.word.begin(), b.word.end());
            out.terms.push_back(std::move(t));
        }
    return out;
}

AlgExpr AlgExpr::operator+(const AlgExpr& rhs) const {
    AlgExpr out = *this;
    out.terms.insert(out.terms.end(), rhs.terms.begin(), rhs.terms.end());
    return out;
}

AlgExpr AlgExpr::scaled(cplx c) const {
    AlgExpr out = *this;
    for (ExprTerm& t : out.terms) t.coeff *= c;
    return out;
}

namespace {

// canonical word order for merging: by length then elementwise
bool word_less(const std::vector<Token>& a, const std::vector<Token>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].kind != b[i].kind) return a[i].kind < b[i].kind;
        if (a[i].index != b[i].index) return a[i].index < b[i].index;
    }
    return false;
}

} // namespace

AlgExpr AlgExpr::simplified() const {
    std::map<std::vector<Token>, cplx, decltype(&word_less)> acc(&word_less);
    for (const ExprTerm& t : terms) acc[t.word] += t.coeff;
    AlgExpr out;
    for (auto& [w, c] : acc)
        if (c != cplx(0.0)) out.terms.push_back({c, w});
    return out;
}

// ---------------------------------------------------------------------------
// Recursive-descent parser
// ---------------------------------------------------------------------------

namespace {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    bool eat_mul() {
        skip_ws();
        if (pos < s.size() && s[pos] == '*') {
            ++pos;
            return true;
        }
        // UTF-8 middle dot, as emitted by the canonical printer
        if (pos + 1 < s.size() && static_cast<unsigned char>(s[pos]) == 0xC2 &&
            static_cast<unsigned char>(s[pos + 1]) == 0xB7) {
            pos += 2;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    AlgExpr parse_sum() {
        skip_ws();
        bool neg = false;
        if (eat('-')) neg = true;
        else eat('+');
        AlgExpr acc = parse_product();
        if (neg) acc = acc.scaled(-1.0);
        for (;;) {
            skip_ws();
            if (eat('+')) acc = acc + parse_product();
            else if (eat('-')) acc = acc + parse_product().scaled(-1.0);
            else break;
        }
        return acc;
    }

    AlgExpr parse_product() {
        AlgExpr acc = parse_power();
        for (;;) {
            if (eat_mul()) {
                acc = acc * parse_power();
                continue;
            }
            // implicit product before '(' or an identifier
            char c = peek();
            if (c == '(' || c == 'a' || c == 'A' || c == 'Q' || c == 'I')
                acc = acc * parse_power();
            else break;
        }
        return acc;
    }

    AlgExpr parse_power() {
        AlgExpr base = parse_atom();
        if (eat('^')) {
            skip_ws();
            std::size_t start = pos;
            long n = 0;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                n = n * 10 + (s[pos] - '0');
                ++pos;
            }
            if (pos == start) throw ParseError("expected nonnegative integer exponent", pos);
            AlgExpr acc;
            acc.terms.push_back({cplx(1.0), {}});
            for (long i = 0; i < n; ++i) acc = acc * base;
            return acc;
        }
        return base;
    }

    int parse_generator_index() {
        std::size_t start = pos;
        long n = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            n = n * 10 + (s[pos] - '0');
            ++pos;
        }
        if (pos == start) throw ParseError("expected generator index", pos);
        if (n < 1 || n > 64) throw ParseError("generator index out of range", start);
        return static_cast<int>(n);
    }

    AlgExpr parse_atom() {
        skip_ws();
        if (pos >= s.size()) throw ParseError("unexpected end of input", pos);
        char c = s[pos];
        if (c == '(') {
            ++pos;
            AlgExpr e = parse_sum();
            if (!eat(')')) throw ParseError("expected ')'", pos);
            return e;
        }
        if (c == '-') {  // unary minus inside a factor
            ++pos;
            return parse_power().scaled(-1.0);
        }
        AlgExpr e;
        if (c == 'a' || c == 'A') {
            ++pos;
            Token t;
            t.kind = c == 'a' ? Token::Kind::Ann : Token::Kind::Cre;
            t.index = parse_generator_index();
            e.terms.push_back({cplx(1.0), {t}});
            return e;
        }
        if (c == 'Q') {
            ++pos;
            e.terms.push_back({cplx(1.0), {Token{Token::Kind::Q, 1}}});
            return e;
        }
        if (c == 'I') {
            ++pos;
            e.terms.push_back({cplx(1.0), {}});
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (c == 'i' || c == 'j') {
            ++pos;
            e.terms.push_back({cplx(0.0, 1.0), {}});
            return e;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }

    AlgExpr parse_number() {
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
                s[pos] == 'e' || s[pos] == 'E' ||
                ((s[pos] == '+' || s[pos] == '-') && pos > start &&
                 (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
            ++pos;
        double v;
        try {
            v = std::stod(s.substr(start, pos - start));
        } catch (const std::exception&) {
            throw ParseError("bad numeric literal", start);
        }
        cplx value = v;
        if (pos < s.size() && (s[pos] == 'i' || s[pos] == 'j')) {
            ++pos;
            value = cplx(0.0, v);
        }
        AlgExpr e;
        e.terms.push_back({value, {}});
        return e;
    }
};

} // namespace

AlgExpr parse_expr(const std::string& text) {
    Parser p(text);
    AlgExpr e = p.parse_sum();
    p.skip_ws();
    if (p.pos != text.size()) throw ParseError("trailing input", p.pos);
    return e.simplified();
}

std::string to_string(const Token& t) {
    switch (t.kind) {
        case Token::Kind::Ann: return "a" + std::to_string(t.index);
        case Token::Kind::Cre: return "A" + std::to_string(t.index);
        case Token::Kind::Q: return "Q";
    }
    return "?";
}

namespace {

std::string format_scalar(cplx c) {
    char buf[96];
    if (c.imag() == 0.0) {
        std::snprintf(buf, sizeof buf, "%.17g", c.real());
        return buf;
    }
    if (c.real() == 0.0) {
        std::snprintf(buf, sizeof buf, "%.17gi", c.imag());
        return buf;
    }
    std::snprintf(buf, sizeof buf, "(%.17g%+.17gi)", c.real(), c.imag());
    return buf;
}

} // namespace

std::string to_string(const AlgExpr& e) {
    if (e.terms.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < e.terms.size(); ++i) {
        if (i) out += " + ";
        const ExprTerm& t = e.terms[i];
        out += format_scalar(t.coeff);
        if (t.word.empty()) {
            out += "\xC2\xB7I";
        } else {
            for (const Token& tok : t.word) out += "\xC2\xB7" + to_string(tok);
        }
    }
    return out;
}

} // namespace qk

#include "gate_parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "cvnoise/errors.hpp"

namespace cvnoise::cli {

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    bool done() {
        skip();
        return pos_ >= s_.size();
    }

    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    double expr() {
        double v = term();
        for (char c = peek(); c == '+' || c == '-'; c = peek()) {
            ++pos_;
            v = c == '+' ? v + term() : v - term();
        }
        return v;
    }

    [[noreturn]] void fail(const std::string& what) const {
        raise(ErrorKind::InvalidParameter, "cannot parse gate '" + s_ + "': " + what + " at offset " + std::to_string(pos_));
    }

    std::size_t pos_ = 0;

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    double term() {
        double v = unary();
        for (char c = peek(); c == '*' || c == '/'; c = peek()) {
            ++pos_;
            v = c == '*' ? v * unary() : v / unary();
        }
        return v;
    }

    double unary() {
        const char c = peek();
        if (c == '-') {
            ++pos_;
            return -unary();
        }
        if (c == '+') {
            ++pos_;
            return unary();
        }
        return atom();
    }

    double atom() {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            const double v = expr();
            expect(')');
            return v;
        }
        if (s_.compare(pos_, 2, "pi") == 0) {
            pos_ += 2;
            return std::numbers::pi;
        }
        double v = 0.0;
        const char* first = s_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
        if (ec != std::errc() || ptr == first) fail("expected a number");
        pos_ += static_cast<std::size_t>(ptr - first);
        return v;
    }

    std::string s_;
};

bool is_product(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == 'R' || c == 'S' || c == 'P' || c == 'F' || c == 'I';
    }
    return false;
}

Mat2 parse_product(const std::string& text) {
    Parser p(text);
    Mat2 m = Mat2::Identity();
    while (!p.done()) {
        const char name = p.peek();
        ++p.pos_;
        Mat2 f;
        if (name == 'F' || name == 'I') {
            if (p.peek() == '(') {
                ++p.pos_;
                p.expect(')');
            }
            f = name == 'F' ? fourier() : Mat2::Identity();
        } else if (name == 'R' || name == 'S' || name == 'P') {
            p.expect('(');
            const double v = p.expr();
            p.expect(')');
            if (name == 'S' && (v == 0.0 || !std::isfinite(v))) p.fail("squeeze factor must be finite and nonzero");
            f = name == 'R' ? rotation(v) : (name == 'S' ? squeeze(v) : shear(v));
        } else {
            --p.pos_;
            p.fail("unknown factor");
        }
        m = m * f;
    }
    return m;
}

Mat2 parse_entries(const std::string& text, double tol) {
    std::string norm = text;
    for (char& c : norm)
        if (c == ',' || c == ';' || c == '[' || c == ']') c = ' ';
    std::istringstream in(norm);
    std::vector<double> v;
    for (std::string tok; in >> tok;) {
        Parser p(tok);
        const double x = p.expr();
        if (!p.done()) p.fail("trailing characters");
        v.push_back(x);
    }
    if (v.size() != 4) raise(ErrorKind::InvalidParameter, "gate needs 4 matrix entries, got " + std::to_string(v.size()));
    Mat2 m;
    m << v[0], v[1], v[2], v[3];
    const double det = m.determinant();
    if (!(std::abs(det - 1.0) <= tol)) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "gate is not symplectic: determinant " << det << " (must be 1 within " << tol << ")";
        raise(ErrorKind::InvalidParameter, msg.str());
    }
    return m;
}

}  // namespace

double parse_expression(const std::string& text) {
    Parser p(text);
    const double v = p.expr();
    if (!p.done()) p.fail("trailing characters");
    return v;
}

Mat2 parse_gate(const std::string& text, double tol) {
    return is_product(text) ? parse_product(text) : parse_entries(text, tol);
}

}  // namespace cvnoise::cli

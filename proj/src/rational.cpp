#include "toricstab/rational.hpp"

#include <cmath>
#include <numeric>
#include <utility>

#include "toricstab/errors.hpp"

namespace toricstab {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Unbounded: return "Unbounded";
        case ErrorKind::EmptyOrDegenerate: return "EmptyOrDegenerate";
        case ErrorKind::NonPrimitiveNormal: return "NonPrimitiveNormal";
        case ErrorKind::NotReflexive: return "NotReflexive";
        case ErrorKind::CapacityExceeded: return "CapacityExceeded";
        case ErrorKind::DegenerateSimplex: return "DegenerateSimplex";
        case ErrorKind::ToleranceNotMet: return "ToleranceNotMet";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::RNotDominating: return "RNotDominating";
        case ErrorKind::AllSamplesDegenerate: return "AllSamplesDegenerate";
        case ErrorKind::BetaOutOfRange: return "BetaOutOfRange";
        case ErrorKind::TauOutsidePolytope: return "TauOutsidePolytope";
        case ErrorKind::NotFound: return "NotFound";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

namespace {

bool is_integer_literal(const std::string& s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    const std::string num = text.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den))
        throw Error(ErrorKind::ParseError, "not a rational literal: \"" + text + "\"");
    boost::multiprecision::mpz_int p(num[0] == '+' ? num.substr(1) : num);
    boost::multiprecision::mpz_int q(den[0] == '+' ? den.substr(1) : den);
    if (q == 0) throw Error(ErrorKind::ParseError, "zero denominator in \"" + text + "\"");
    return Rational(p, q);
}

std::string format_rational(const Rational& value) {
    if (denominator(value) == 1) return numerator(value).str();
    return numerator(value).str() + "/" + denominator(value).str();
}

Rational from_double(double value) {
    if (!std::isfinite(value)) throw Error(ErrorKind::InvalidArgument, "non-finite value");
    int exponent = 0;
    const double mantissa = std::frexp(value, &exponent);
    // mantissa * 2^53 is an exact integer
    const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
    Rational r(scaled);
    exponent -= 53;
    boost::multiprecision::mpz_int pow2 = 1;
    pow2 <<= static_cast<unsigned>(std::abs(exponent));
    if (exponent >= 0) return r * Rational(pow2);
    return r / Rational(pow2);
}

RationalVector to_rational(const IntVector& v) {
    RationalVector out;
    out.reserve(v.size());
    for (auto x : v) out.emplace_back(x);
    return out;
}

std::vector<double> to_double(const RationalVector& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(to_double(x));
    return out;
}

Rational dot(const RationalVector& a, const RationalVector& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Rational dot(const IntVector& a, const RationalVector& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += Rational(a[i]) * b[i];
    return s;
}

int rank(RationalMatrix rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows.front().size();
    int r = 0;
    for (std::size_t c = 0; c < cols && r < static_cast<int>(rows.size()); ++c) {
        std::size_t pivot = r;
        while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[pivot], rows[r]);
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            if (rows[i][c] == 0) continue;
            const Rational f = rows[i][c] / rows[r][c];
            for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[r][j];
        }
        ++r;
    }
    return r;
}

Rational determinant(RationalMatrix m) {
    const std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        while (pivot < n && m[pivot][c] == 0) ++pivot;
        if (pivot == n) return 0;
        if (pivot != c) {
            std::swap(m[pivot], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m[i][c] == 0) continue;
            const Rational f = m[i][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

std::optional<RationalVector> solve(RationalMatrix a, RationalVector b) {
    const std::size_t n = a.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        while (pivot < n && a[pivot][c] == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(a[pivot], a[c]);
        std::swap(b[pivot], b[c]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c] == 0) continue;
            const Rational f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
            b[i] -= f * b[c];
        }
    }
    RationalVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

std::optional<Rational> exact_sqrt(const Rational& value) {
    if (value < 0) return std::nullopt;
    const auto p = numerator(value);
    const auto q = denominator(value);
    const auto sp = boost::multiprecision::sqrt(p);
    const auto sq = boost::multiprecision::sqrt(q);
    if (sp * sp != p || sq * sq != q) return std::nullopt;
    return Rational(sp, sq);
}

std::int64_t gcd_of(const IntVector& v) {
    std::int64_t g = 0;
    for (auto x : v) g = std::gcd(g, x < 0 ? -x : x);
    return g;
}

}  // namespace toricstab

#include "vrpsd/rational.hpp"

#include <stdexcept>

namespace vrpsd {

Rational parse_rational(const std::string &text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch)))
            s.push_back(ch);
    if (s.empty())
        throw std::invalid_argument("empty rational");
    size_t slash = s.find('/');
    auto check = [&](const std::string &part, bool allow_sign) {
        if (part.empty())
            throw std::invalid_argument("malformed rational '" + text + "'");
        for (size_t i = 0; i < part.size(); i++) {
            bool sign = allow_sign && i == 0 && (part[i] == '-' || part[i] == '+');
            if (!sign && !std::isdigit(static_cast<unsigned char>(part[i])))
                throw std::invalid_argument("malformed rational '" + text + "'");
        }
    };
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    check(num, true);
    check(den, false);
    if (num[0] == '+')
        num = num.substr(1);
    mpz_class n(num), d(den);
    if (d == 0)
        throw std::invalid_argument("zero denominator in '" + text + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational &q) { return q.get_str(); }

long long ceil_of(const Rational &q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r.get_si();
}

} // namespace vrpsd

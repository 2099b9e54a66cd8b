#include "kreeb/rational.hpp"

#include <cctype>

#include "kreeb/errors.hpp"

namespace kreeb {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rat parse_rational(std::string_view s) {
    std::string_view rest = s;
    bool negative = false;
    if (!rest.empty() && (rest.front() == '-' || rest.front() == '+')) {
        negative = rest.front() == '-';
        rest.remove_prefix(1);
    }
    std::string_view num = rest;
    std::string_view den = "1";
    if (auto slash = rest.find('/'); slash != std::string_view::npos) {
        num = rest.substr(0, slash);
        den = rest.substr(slash + 1);
    }
    if (!all_digits(num) || !all_digits(den))
        throw SchemaError("malformed rational '" + std::string(s) + "'");
    Int n(std::string(num), 10);
    Int d(std::string(den), 10);
    if (d == 0)
        throw SchemaError("zero denominator in rational '" + std::string(s) + "'");
    if (negative) n = -n;
    Rat r(n, d);
    r.canonicalize();
    return r;
}

std::string rat_str(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Int rat_floor(const Rat& r) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

Rat mod1(const Rat& r) {
    Rat out = r - Rat(rat_floor(r));
    out.canonicalize();
    return out;
}

Int denominator_lcm(const std::vector<Rat>& rs) {
    Int l = 1;
    for (const Rat& r : rs)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.get_den().get_mpz_t());
    return l;
}

}  // namespace kreeb

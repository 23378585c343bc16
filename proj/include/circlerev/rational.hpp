#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace circlerev {

// Exact rational scalar. All geometry in this library is done over Q;
// denominators grow under composition, so the representation must be
// arbitrary precision.
using Rat = mpq_class;

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct precondition_error : std::logic_error {
    using std::logic_error::logic_error;
};

// Raised when an orbit unwinding loop exceeds its iteration cap.  Carries the
// offending point and the number of iterations performed.
struct eval_limit_error : std::runtime_error {
    Rat point;
    std::int64_t iterations;
    eval_limit_error(const Rat& p, std::int64_t n)
        : std::runtime_error("evaluation iteration cap exceeded at " + p.get_str() +
                             " after " + std::to_string(n) + " iterations"),
          point(p),
          iterations(n) {}
};

inline Rat rat_floor(const Rat& q) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return Rat(fl);
}

// q mod 1, result in [0,1).
inline Rat mod1(const Rat& q) {
    Rat r = q - rat_floor(q);
    r.canonicalize();
    return r;
}

inline long floor_to_long(const Rat& q) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    if (!fl.fits_slong_p()) throw std::overflow_error("rational floor out of long range");
    return fl.get_si();
}

// Serialized form: "p/q" or "n", no decimals.
inline std::string rat_to_string(const Rat& q) { return q.get_str(); }

inline Rat rat_from_string(const std::string& s) {
    if (s.empty()) throw parse_error("empty rational literal");
    for (char c : s) {
        if (!(c == '-' || c == '/' || (c >= '0' && c <= '9')))
            throw parse_error("bad rational literal '" + s + "'");
    }
    Rat q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
        throw parse_error("bad rational literal '" + s + "'");
    if (q.get_den() == 0) throw parse_error("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

// Number of bits in the denominator; used for verification cost reports.
inline std::size_t denominator_bits(const Rat& q) {
    return mpz_sizeinbase(q.get_den().get_mpz_t(), 2);
}

}  // namespace circlerev

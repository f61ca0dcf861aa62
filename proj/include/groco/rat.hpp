#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace groco {

using Rat = mpq_class;
using Int = mpz_class;

/* Error kinds map onto process exit codes in the CLI driver:
   input errors -> 2, internal cross-check disagreements -> 3.
   A verified-false mathematical claim is a verdict, not an exception. */
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw DomainError("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p" or "p/q"; result is canonical (q > 0, lowest terms).
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw InputError("empty rational literal");
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (!(c == '-' || c == '/' || (c >= '0' && c <= '9')))
            throw InputError("bad rational literal: " + s);
    }
    Rat r;
    if (r.set_str(s, 10) != 0) throw InputError("bad rational literal: " + s);
    if (r.get_den() == 0) throw InputError("zero denominator: " + s);
    r.canonicalize();
    return r;
}

// Canonical serialization: "p/q" with q > 0 and gcd(|p|, q) = 1, or "p" when q = 1.
inline std::string rat_str(const Rat& r) { return r.get_str(); }

}  // namespace groco

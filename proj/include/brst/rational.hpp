#ifndef BRST_RATIONAL_HPP
#define BRST_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace brst {

using Rat = mpq_class;

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// mpq_class(a, b) does not canonicalize; every fraction goes through here.
inline Rat frac(long num, long den) {
    if (den == 0) throw Error("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "a", "-a", "a/b" (base 10).
inline Rat parseRat(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw Error("bad rational literal: '" + s + "'");
    if (q.get_den() == 0) throw Error("rational with zero denominator: '" + s + "'");
    q.canonicalize();
    return q;
}

inline std::string ratStr(const Rat& q) { return q.get_str(); }

} // namespace brst

#endif

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace isingms {

// Empirical moments of a spin pair: means m1, m2 and raw correlation c12.
struct PairMoments {
    double m1 = 0.0;
    double m2 = 0.0;
    double c12 = 0.0;
};

// Joint-state counts of one spin pair over N observations.
// State order: (+1,+1), (+1,-1), (-1,+1), (-1,-1).
struct PairStats {
    std::int64_t n_pp = 0;
    std::int64_t n_pm = 0;
    std::int64_t n_mp = 0;
    std::int64_t n_mm = 0;

    std::int64_t n_obs() const { return n_pp + n_pm + n_mp + n_mm; }

    PairMoments moments() const {
        const double n = static_cast<double>(n_obs());
        if (n < 1.0) throw std::invalid_argument("PairStats: empty sample");
        PairMoments m;
        m.m1 = static_cast<double>(n_pp + n_pm - n_mp - n_mm) / n;
        m.m2 = static_cast<double>(n_pp - n_pm + n_mp - n_mm) / n;
        m.c12 = static_cast<double>(n_pp - n_pm - n_mp + n_mm) / n;
        return m;
    }
};

// True iff (m1, m2, c12) lies inside the tetrahedron of statistics achievable
// in the large-sample limit: -1 + |m1+m2| <= c12 <= 1 - |m1-m2|.
// Moments derived from integer counts always satisfy this.
inline bool physical(const PairMoments& s) {
    constexpr double slack = 1e-12;
    const double lo = -1.0 + std::abs(s.m1 + s.m2);
    const double hi = 1.0 - std::abs(s.m1 - s.m2);
    return s.c12 >= lo - slack && s.c12 <= hi + slack;
}

inline bool physical(const PairStats& s) { return physical(s.moments()); }

}  // namespace isingms

#include "gibbspp/predicates.hpp"

#include <gmpxx.h>

#include <cmath>

namespace gibbspp::pred {

namespace {

constexpr double kEps = 2.220446049250313e-16;  // 2^-52

int sign_of(const mpq_class& q) { return sgn(q); }

int orient2d_exact(const double* a, const double* b, const double* c) {
    mpq_class ax(a[0]), ay(a[1]), bx(b[0]), by(b[1]), cx(c[0]), cy(c[1]);
    mpq_class det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx);
    return sign_of(det);
}

int incircle_exact(const double* a, const double* b, const double* c, const double* d) {
    mpq_class adx = mpq_class(a[0]) - mpq_class(d[0]);
    mpq_class ady = mpq_class(a[1]) - mpq_class(d[1]);
    mpq_class bdx = mpq_class(b[0]) - mpq_class(d[0]);
    mpq_class bdy = mpq_class(b[1]) - mpq_class(d[1]);
    mpq_class cdx = mpq_class(c[0]) - mpq_class(d[0]);
    mpq_class cdy = mpq_class(c[1]) - mpq_class(d[1]);

    mpq_class alift = adx * adx + ady * ady;
    mpq_class blift = bdx * bdx + bdy * bdy;
    mpq_class clift = cdx * cdx + cdy * cdy;

    mpq_class det = alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) +
                    clift * (adx * bdy - ady * bdx);
    return sign_of(det);
}

}  // namespace

int orient2d(const double* a, const double* b, const double* c) {
    const double detleft = (a[0] - c[0]) * (b[1] - c[1]);
    const double detright = (a[1] - c[1]) * (b[0] - c[0]);
    const double det = detleft - detright;
    const double detsum = std::fabs(detleft) + std::fabs(detright);
    // (3 + 16 eps) eps is Shewchuk's A-stage bound; padded slightly.
    const double errbound = 4.0 * kEps * detsum;
    if (det > errbound) return 1;
    if (det < -errbound) return -1;
    return orient2d_exact(a, b, c);
}

int incircle(const double* a, const double* b, const double* c, const double* d) {
    const double adx = a[0] - d[0], ady = a[1] - d[1];
    const double bdx = b[0] - d[0], bdy = b[1] - d[1];
    const double cdx = c[0] - d[0], cdy = c[1] - d[1];

    const double alift = adx * adx + ady * ady;
    const double blift = bdx * bdx + bdy * bdy;
    const double clift = cdx * cdx + cdy * cdy;

    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;

    const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                       clift * (adxbdy - bdxady);
    const double permanent = alift * (std::fabs(bdxcdy) + std::fabs(cdxbdy)) +
                             blift * (std::fabs(cdxady) + std::fabs(adxcdy)) +
                             clift * (std::fabs(adxbdy) + std::fabs(bdxady));
    const double errbound = 16.0 * kEps * permanent;
    if (det > errbound) return 1;
    if (det < -errbound) return -1;
    return incircle_exact(a, b, c, d);
}

}  // namespace gibbspp::pred

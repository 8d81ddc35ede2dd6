"""Pure-Python kernels: scalar evaluators and the adaptive Gauss-Kronrod driver.

This module is the fallback twin of ``_ckernels.pyx``.  Both follow the same
operation order so the compiled and interpreted paths agree bit-for-bit on
the same platform; keep them in lockstep when editing either one.

Everything here works on plain floats and integer codes.  Validation, enums
and dataclasses live in the public modules.
"""

import heapq
from math import asin, cosh, exp, expm1, fsum, pi, sin, cos, sinh, sqrt

HALF_PI = 0.5 * pi

# |x| above which hyperbolic forms are rewritten in terms of exp(-2|x|)
SWITCH = 250.0
# |x + i*eps| below which coth(z) - 1/z is summed from its Taylor series
SERIES_RADIUS = 0.5

# coefficients of z**(2n-1) in coth(z) - 1/z, n = 1..15 (2^2n B_2n / (2n)!)
COTH_SERIES = (
    0.3333333333333333,
    -0.022222222222222223,
    0.0021164021164021165,
    -0.00021164021164021165,
    2.1377799155576935e-05,
    -2.1644042808063972e-06,
    2.1925947851873778e-07,
    -2.2214608789979678e-08,
    2.2507846516808994e-09,
    -2.2805151204592183e-10,
    2.3106432599002624e-11,
    -2.3411706819824882e-12,
    2.3721017400233653e-13,
    -2.4034415333307705e-14,
    2.4351954029183367e-15,
)
NSERIES = 15

# weight codes: eps-families 0..9, classical limits 10..17, unit weight -1
COTH, DCOTH, F, G, DF, DG, P, DP, DIFF, DDIFF = range(10)
L_COTH, L_NEG_CSCH2, L_F0, L_SIGN, L_PV_INV, L_NEG_INV_SQ, L_HDIFF, L_DHDIFF = range(10, 18)
ONE = -1

# odd weights flip sign under x -> -x
ODD_CODES = frozenset((COTH, F, G, P, DIFF, L_COTH, L_F0, L_SIGN, L_PV_INV, L_HDIFF))

# test-function kinds and modes
GAUSS, HERMITE, BUMP = 0, 1, 2
VALUE, DERIV, UNIT = 0, 1, 2

# test functions are treated as exactly zero beyond this many widths
U_CUTOFF = 40.0

# 21-point Kronrod / 10-point Gauss rule (QUADPACK qk21)
XGK = (
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
)
WGK = (
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208977683965,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
)
WG = (
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
)
EPMACH = 2.220446049250313e-16
UFLOW = 2.2250738585072014e-308
# multiple of eps*|f|-integral used as the per-interval rounding floor
ROUNDOFF_FACTOR = 2.0


def eps_consts(eps):
    """Per-eps constants shared by every family evaluator."""
    s = sin(eps)
    return (
        eps,
        s,
        s * s,
        cos(2.0 * eps),
        sin(2.0 * eps),
        HALF_PI - eps,
        cos(eps),
    )


def _inv_sinh_sq(ax):
    # 1/sinh(ax)**2 as (2 e^-ax / (1 - e^-2ax))**2, finite for every ax > 0
    r = 2.0 * exp(-ax) / -expm1(-2.0 * ax)
    return r * r


def _coth_pos(ax, k):
    ssq = k[2]
    if ax <= SWITCH:
        S = sinh(ax)
        return S * cosh(ax) / (S * S + ssq)
    t = exp(-2.0 * ax)
    om = -expm1(-2.0 * ax)
    q = _inv_sinh_sq(ax)
    return (1.0 + t) / om / (1.0 + ssq * q)


def _dcoth_pos(ax, k):
    ssq = k[2]
    c2 = k[3]
    if ax <= SWITCH:
        S = sinh(ax)
        S2 = S * S
        den = S2 + ssq
        return (ssq - c2 * S2) / den / den
    q = _inv_sinh_sq(ax)
    den = 1.0 + ssq * q
    return (ssq * q - c2) * q / den / den


def _dg_pos(ax, k):
    ssq = k[2]
    if ax <= SWITCH:
        S = sinh(ax)
        return k[4] / (k[5] * 2.0 * (S * S + ssq))
    q = _inv_sinh_sq(ax)
    return k[4] * q / (k[5] * 2.0 * (1.0 + ssq * q))


def _fg_pos(ax, k):
    """(F, G) for ax >= 0."""
    s = k[1]
    ssq = k[2]
    if ax <= SWITCH:
        S = sinh(ax)
        y = k[6] * (S / sqrt(S * S + ssq))
        if y <= 0.5:
            g = asin(y) / k[5]
            return _coth_pos(ax, k) - g, g
    # G - 1 through asin(cos(e) u) - asin(cos(e)); no cancellation near G = 1
    q = _inv_sinh_sq(ax)
    d = -k[6] * (s * q) / (sqrt(1.0 + ssq * q) * (1.0 + sqrt(1.0 + q)))
    if d < -1.0:
        d = -1.0
    gm1 = asin(d) / k[5]
    t = exp(-2.0 * ax)
    om = -expm1(-2.0 * ax)
    cm1 = (2.0 * t / om - ssq * q) / (1.0 + ssq * q)
    return cm1 - gm1, 1.0 + gm1


def _p_pos(ax, eps):
    if ax <= eps:
        return ax / (ax * ax + eps * eps)
    return 1.0 / (ax + eps * (eps / ax))


def _dp_pos(ax, eps):
    if ax <= eps:
        den = ax * ax + eps * eps
        return (eps - ax) * (eps + ax) / den / den
    rho = eps / ax
    inv = 1.0 / ax
    den = 1.0 + rho * rho
    return (rho - 1.0) * (rho + 1.0) * inv * inv / den / den


def _hseries(re, im):
    """Real parts of h(z) and h'(z), h(z) = coth(z) - 1/z, z = re + i*im."""
    wr = re * re - im * im
    wi = 2.0 * re * im
    # Horner in w = z^2 for both sums
    ar = COTH_SERIES[NSERIES - 1]
    ai = 0.0
    br = (2 * NSERIES - 1) * COTH_SERIES[NSERIES - 1]
    bi = 0.0
    for n in range(NSERIES - 2, -1, -1):
        tr = ar * wr - ai * wi
        ai = ar * wi + ai * wr
        ar = tr + COTH_SERIES[n]
        tr = br * wr - bi * wi
        bi = br * wi + bi * wr
        br = tr + (2 * n + 1) * COTH_SERIES[n]
    return ar * re - ai * im, br


def weight(code, x, k):
    """Weight function ``code`` at x; k = eps_consts(eps) for eps-families."""
    if code == ONE:
        return 1.0
    ax = -x if x < 0.0 else x
    if code == COTH:
        v = _coth_pos(ax, k)
    elif code == DCOTH:
        return _dcoth_pos(ax, k)
    elif code == F:
        v = _fg_pos(ax, k)[0]
    elif code == G:
        v = _fg_pos(ax, k)[1]
    elif code == DF:
        return _dcoth_pos(ax, k) - _dg_pos(ax, k)
    elif code == DG:
        return _dg_pos(ax, k)
    elif code == P:
        v = _p_pos(ax, k[0])
    elif code == DP:
        return _dp_pos(ax, k[0])
    elif code == DIFF:
        if ax * ax + k[0] * k[0] < SERIES_RADIUS * SERIES_RADIUS:
            v = _hseries(ax, k[0])[0]
        else:
            v = _coth_pos(ax, k) - _p_pos(ax, k[0])
    elif code == DDIFF:
        if ax * ax + k[0] * k[0] < SERIES_RADIUS * SERIES_RADIUS:
            return _hseries(ax, k[0])[1]
        return _dcoth_pos(ax, k) - _dp_pos(ax, k[0])
    elif code == L_COTH:
        v = (1.0 + exp(-2.0 * ax)) / -expm1(-2.0 * ax)
    elif code == L_NEG_CSCH2:
        return -_inv_sinh_sq(ax)
    elif code == L_F0:
        v = 2.0 * exp(-2.0 * ax) / -expm1(-2.0 * ax)
    elif code == L_SIGN:
        v = 1.0
    elif code == L_PV_INV:
        v = 1.0 / ax
    elif code == L_NEG_INV_SQ:
        v = 1.0 / ax
        return -(v * v)
    elif code == L_HDIFF:
        if ax < SERIES_RADIUS:
            v = _hseries(ax, 0.0)[0]
        else:
            v = (1.0 + exp(-2.0 * ax)) / -expm1(-2.0 * ax) - 1.0 / ax
    elif code == L_DHDIFF:
        if ax < SERIES_RADIUS:
            return _hseries(ax, 0.0)[1]
        v = 1.0 / ax
        return v * v - _inv_sinh_sq(ax)
    else:
        raise ValueError("unknown weight code %r" % (code,))
    return -v if x < 0.0 else v


def _hermite_pair(n, u):
    # (H_n(u), H_{n+1}(u)) by the physicists' recurrence
    h0 = 1.0
    h1 = 2.0 * u
    for j in range(1, n + 1):
        h0, h1 = h1, 2.0 * u * h1 - 2.0 * j * h0
    return h0, h1


def testfn(kind, mu, sigma, n, mode, x):
    """Test function (mode VALUE), its derivative (DERIV) or 1 (UNIT)."""
    if mode == UNIT:
        return 1.0
    u = (x - mu) / sigma
    if kind == BUMP:
        if u <= -1.0 or u >= 1.0:
            return 0.0
        v = 1.0 - u * u
        e = exp(1.0 - 1.0 / v)
        if mode == VALUE:
            return e
        return e * (-2.0 * u / (v * v)) / sigma
    if u > U_CUTOFF or u < -U_CUTOFF:
        return 0.0
    e = exp(-(u * u))
    if kind == GAUSS:
        if mode == VALUE:
            return e
        return -2.0 * u * e / sigma
    hn, hn1 = _hermite_pair(n, u)
    if mode == VALUE:
        return hn * e
    return -hn1 * e / sigma


def gk21(f, a, b):
    """One 21-point Gauss-Kronrod panel: (integral, error, rounded).

    ``rounded`` is true when the rounding floor, not the Kronrod-Gauss
    difference, sets the error; bisecting such a panel cannot help.
    """
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = f(c)
    resg = 0.0
    resk = WGK[10] * fc
    resabs = abs(resk)
    fv1 = [0.0] * 10
    fv2 = [0.0] * 10
    for j in range(5):
        jtw = 2 * j + 1
        dx = h * XGK[jtw]
        f1 = f(c - dx)
        f2 = f(c + dx)
        fv1[jtw] = f1
        fv2[jtw] = f2
        resg += WG[j] * (f1 + f2)
        resk += WGK[jtw] * (f1 + f2)
        resabs += WGK[jtw] * (abs(f1) + abs(f2))
    for j in range(5):
        jtwm1 = 2 * j
        dx = h * XGK[jtwm1]
        f1 = f(c - dx)
        f2 = f(c + dx)
        fv1[jtwm1] = f1
        fv2[jtwm1] = f2
        resk += WGK[jtwm1] * (f1 + f2)
        resabs += WGK[jtwm1] * (abs(f1) + abs(f2))
    reskh = resk * 0.5
    resasc = WGK[10] * abs(fc - reskh)
    for j in range(10):
        resasc += WGK[j] * (abs(fv1[j] - reskh) + abs(fv2[j] - reskh))
    result = resk * h
    ah = abs(h)
    resabs *= ah
    resasc *= ah
    err = abs((resk - resg) * h)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    # u/2 * int |x f'|: what rounding the nodes themselves costs, from the
    # |x|-weighted variation over the 21 ordered samples
    xp = abs(c - h * XGK[0])
    fp = fv1[0]
    tv = 0.0
    for j in range(1, 11):
        if j < 10:
            xn = abs(c - h * XGK[j])
            fn = fv1[j]
        else:
            xn = abs(c)
            fn = fc
        tv += max(xn, xp) * abs(fn - fp)
        xp = xn
        fp = fn
    for j in range(9, -1, -1):
        xn = abs(c + h * XGK[j])
        fn = fv2[j]
        tv += max(xn, xp) * abs(fn - fp)
        xp = xn
        fp = fn
    rounded = False
    if resabs > UFLOW / (50.0 * EPMACH):
        floor = ROUNDOFF_FACTOR * EPMACH * resabs + 0.5 * EPMACH * tv
        if floor >= err:
            err = floor
            rounded = True
    return result, err, rounded


def adapt(f, points, abs_tol, rel_tol, max_intervals):
    """Globally adaptive bisection over the panels between ``points``.

    Returns ``(value, error, intervals, converged)``.  The panel with the
    largest error is split first; ties go to the smaller left endpoint.
    Panels at their rounding floor, or too narrow to bisect, are set aside.
    """
    heap = []
    frozen = []
    val_sum = 0.0
    err_sum = 0.0
    nint = 0
    for i in range(len(points) - 1):
        a = points[i]
        b = points[i + 1]
        v, e, r = gk21(f, a, b)
        heapq.heappush(heap, (-e, a, b, v, r))
        val_sum += v
        err_sum += e
        nint += 1
    frozen_err = 0.0
    converged = False
    while True:
        tol = max(abs_tol, rel_tol * abs(val_sum))
        if err_sum <= tol:
            # resync the running sums before trusting them
            val_sum = fsum([it[3] for it in heap] + [it[3] for it in frozen])
            err_sum = fsum([-it[0] for it in heap] + [-it[0] for it in frozen])
            tol = max(abs_tol, rel_tol * abs(val_sum))
            if err_sum <= tol:
                converged = True
                break
        if not heap or nint >= max_intervals:
            break
        if frozen_err > tol and err_sum - frozen_err <= frozen_err:
            # the rounding floor alone misses tol; splitting cannot recover it
            break
        item = heapq.heappop(heap)
        a = item[1]
        b = item[2]
        m = 0.5 * (a + b)
        if item[4] or not (a < m < b):
            frozen.append(item)
            frozen_err -= item[0]
            continue
        v1, e1, r1 = gk21(f, a, m)
        v2, e2, r2 = gk21(f, m, b)
        val_sum += (v1 + v2) - item[3]
        err_sum += (e1 + e2) + item[0]
        heapq.heappush(heap, (-e1, a, m, v1, r1))
        heapq.heappush(heap, (-e2, m, b, v2, r2))
        nint += 1
    value = fsum([it[3] for it in heap] + [it[3] for it in frozen])
    error = fsum([-it[0] for it in heap] + [-it[0] for it in frozen])
    return value, error, nint, converged


def make_integrand(wcode, eps, kind, mu, sigma, n, mode):
    k = eps_consts(eps) if 0 <= wcode < 10 else None

    def f(x):
        return weight(wcode, x, k) * testfn(kind, mu, sigma, n, mode, x)

    return f


def family(code, x, eps):
    return weight(code, x, eps_consts(eps))


def limit(code, x):
    return weight(code, x, None)


def integrate_product(wcode, eps, kind, mu, sigma, n, mode, points,
                      abs_tol, rel_tol, max_intervals):
    """Adaptive integral of weight(wcode) * testfn over the panels ``points``."""
    f = make_integrand(wcode, eps, kind, mu, sigma, n, mode)
    return adapt(f, list(points), abs_tol, rel_tol, max_intervals)

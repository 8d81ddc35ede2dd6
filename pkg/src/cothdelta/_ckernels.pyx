# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; operation-for-operation twin of ``_purepy``.

Any change here must be mirrored in ``_purepy.py``: the test suite checks
that both backends return identical doubles.
"""

from libc.math cimport asin, cosh, exp, expm1, fabs, pow, sin, cos, sinh, sqrt, M_PI
from libc.stdlib cimport malloc, realloc, free
from math import fsum

from cothdelta._purepy import (
    COTH_SERIES as _PY_SERIES,
    XGK as _PY_XGK,
    WGK as _PY_WGK,
    WG as _PY_WG,
    SWITCH as _PY_SWITCH,
    SERIES_RADIUS as _PY_SERIES_RADIUS,
    ROUNDOFF_FACTOR as _PY_ROUNDOFF,
    U_CUTOFF as _PY_U_CUTOFF,
)

cdef double HALF_PI = 0.5 * M_PI
cdef double SWITCH = _PY_SWITCH
cdef double SERIES_RADIUS = _PY_SERIES_RADIUS
cdef double ROUNDOFF_FACTOR = _PY_ROUNDOFF
cdef double U_CUTOFF = _PY_U_CUTOFF
cdef double EPMACH = 2.220446049250313e-16
cdef double UFLOW = 2.2250738585072014e-308
cdef int NSERIES = 15
cdef double SERIES[15]
cdef double XK[11]
cdef double WK[11]
cdef double WGs[5]

cdef int _i
for _i in range(15):
    SERIES[_i] = _PY_SERIES[_i]
for _i in range(11):
    XK[_i] = _PY_XGK[_i]
    WK[_i] = _PY_WGK[_i]
for _i in range(5):
    WGs[_i] = _PY_WG[_i]


cdef enum:
    C_COTH = 0
    C_DCOTH = 1
    C_F = 2
    C_G = 3
    C_DF = 4
    C_DG = 5
    C_P = 6
    C_DP = 7
    C_DIFF = 8
    C_DDIFF = 9
    C_L_COTH = 10
    C_L_NEG_CSCH2 = 11
    C_L_F0 = 12
    C_L_SIGN = 13
    C_L_PV_INV = 14
    C_L_NEG_INV_SQ = 15
    C_L_HDIFF = 16
    C_L_DHDIFF = 17
    C_ONE = -1
    K_GAUSS = 0
    K_HERMITE = 1
    K_BUMP = 2
    M_VALUE = 0
    M_DERIV = 1
    M_UNIT = 2


cdef struct EpsK:
    double eps
    double s
    double ssq
    double c2
    double sin2e
    double hpe
    double cose


cdef EpsK _eps_consts(double eps):
    cdef EpsK k
    cdef double s = sin(eps)
    k.eps = eps
    k.s = s
    k.ssq = s * s
    k.c2 = cos(2.0 * eps)
    k.sin2e = sin(2.0 * eps)
    k.hpe = HALF_PI - eps
    k.cose = cos(eps)
    return k


cdef inline double _inv_sinh_sq(double ax):
    cdef double r = 2.0 * exp(-ax) / -expm1(-2.0 * ax)
    return r * r


cdef double _coth_pos(double ax, EpsK* k):
    cdef double S, t, om, q
    if ax <= SWITCH:
        S = sinh(ax)
        return S * cosh(ax) / (S * S + k.ssq)
    t = exp(-2.0 * ax)
    om = -expm1(-2.0 * ax)
    q = _inv_sinh_sq(ax)
    return (1.0 + t) / om / (1.0 + k.ssq * q)


cdef double _dcoth_pos(double ax, EpsK* k):
    cdef double S, S2, den, q
    if ax <= SWITCH:
        S = sinh(ax)
        S2 = S * S
        den = S2 + k.ssq
        return (k.ssq - k.c2 * S2) / den / den
    q = _inv_sinh_sq(ax)
    den = 1.0 + k.ssq * q
    return (k.ssq * q - k.c2) * q / den / den


cdef double _dg_pos(double ax, EpsK* k):
    cdef double S, q
    if ax <= SWITCH:
        S = sinh(ax)
        return k.sin2e / (k.hpe * 2.0 * (S * S + k.ssq))
    q = _inv_sinh_sq(ax)
    return k.sin2e * q / (k.hpe * 2.0 * (1.0 + k.ssq * q))


cdef void _fg_pos(double ax, EpsK* k, double* fout, double* gout):
    cdef double S, y, g, q, d, gm1, t, om, cm1
    if ax <= SWITCH:
        S = sinh(ax)
        y = k.cose * (S / sqrt(S * S + k.ssq))
        if y <= 0.5:
            g = asin(y) / k.hpe
            fout[0] = _coth_pos(ax, k) - g
            gout[0] = g
            return
    q = _inv_sinh_sq(ax)
    d = -k.cose * (k.s * q) / (sqrt(1.0 + k.ssq * q) * (1.0 + sqrt(1.0 + q)))
    if d < -1.0:
        d = -1.0
    gm1 = asin(d) / k.hpe
    t = exp(-2.0 * ax)
    om = -expm1(-2.0 * ax)
    cm1 = (2.0 * t / om - k.ssq * q) / (1.0 + k.ssq * q)
    fout[0] = cm1 - gm1
    gout[0] = 1.0 + gm1


cdef inline double _p_pos(double ax, double eps):
    if ax <= eps:
        return ax / (ax * ax + eps * eps)
    return 1.0 / (ax + eps * (eps / ax))


cdef inline double _dp_pos(double ax, double eps):
    cdef double den, rho, inv
    if ax <= eps:
        den = ax * ax + eps * eps
        return (eps - ax) * (eps + ax) / den / den
    rho = eps / ax
    inv = 1.0 / ax
    den = 1.0 + rho * rho
    return (rho - 1.0) * (rho + 1.0) * inv * inv / den / den


cdef void _hseries(double re, double im, double* h, double* dh):
    cdef double wr = re * re - im * im
    cdef double wi = 2.0 * re * im
    cdef double ar = SERIES[NSERIES - 1]
    cdef double ai = 0.0
    cdef double br = (2 * NSERIES - 1) * SERIES[NSERIES - 1]
    cdef double bi = 0.0
    cdef double tr
    cdef int n
    for n in range(NSERIES - 2, -1, -1):
        tr = ar * wr - ai * wi
        ai = ar * wi + ai * wr
        ar = tr + SERIES[n]
        tr = br * wr - bi * wi
        bi = br * wi + bi * wr
        br = tr + (2 * n + 1) * SERIES[n]
    h[0] = ar * re - ai * im
    dh[0] = br


cdef double _weight(int code, double x, EpsK* k):
    cdef double ax, v, f, g, h, dh
    if code == C_ONE:
        return 1.0
    ax = -x if x < 0.0 else x
    if code == C_COTH:
        v = _coth_pos(ax, k)
    elif code == C_DCOTH:
        return _dcoth_pos(ax, k)
    elif code == C_F:
        _fg_pos(ax, k, &f, &g)
        v = f
    elif code == C_G:
        _fg_pos(ax, k, &f, &g)
        v = g
    elif code == C_DF:
        return _dcoth_pos(ax, k) - _dg_pos(ax, k)
    elif code == C_DG:
        return _dg_pos(ax, k)
    elif code == C_P:
        v = _p_pos(ax, k.eps)
    elif code == C_DP:
        return _dp_pos(ax, k.eps)
    elif code == C_DIFF:
        if ax * ax + k.eps * k.eps < SERIES_RADIUS * SERIES_RADIUS:
            _hseries(ax, k.eps, &h, &dh)
            v = h
        else:
            v = _coth_pos(ax, k) - _p_pos(ax, k.eps)
    elif code == C_DDIFF:
        if ax * ax + k.eps * k.eps < SERIES_RADIUS * SERIES_RADIUS:
            _hseries(ax, k.eps, &h, &dh)
            return dh
        return _dcoth_pos(ax, k) - _dp_pos(ax, k.eps)
    elif code == C_L_COTH:
        v = (1.0 + exp(-2.0 * ax)) / -expm1(-2.0 * ax)
    elif code == C_L_NEG_CSCH2:
        return -_inv_sinh_sq(ax)
    elif code == C_L_F0:
        v = 2.0 * exp(-2.0 * ax) / -expm1(-2.0 * ax)
    elif code == C_L_SIGN:
        v = 1.0
    elif code == C_L_PV_INV:
        v = 1.0 / ax
    elif code == C_L_NEG_INV_SQ:
        v = 1.0 / ax
        return -(v * v)
    elif code == C_L_HDIFF:
        if ax < SERIES_RADIUS:
            _hseries(ax, 0.0, &h, &dh)
            v = h
        else:
            v = (1.0 + exp(-2.0 * ax)) / -expm1(-2.0 * ax) - 1.0 / ax
    elif code == C_L_DHDIFF:
        if ax < SERIES_RADIUS:
            _hseries(ax, 0.0, &h, &dh)
            return dh
        v = 1.0 / ax
        return v * v - _inv_sinh_sq(ax)
    else:
        return 0.0
    return -v if x < 0.0 else v


cdef double _testfn(int kind, double mu, double sigma, int n, int mode, double x):
    cdef double u, v, e, h0, h1, h2
    cdef int j
    if mode == M_UNIT:
        return 1.0
    u = (x - mu) / sigma
    if kind == K_BUMP:
        if u <= -1.0 or u >= 1.0:
            return 0.0
        v = 1.0 - u * u
        e = exp(1.0 - 1.0 / v)
        if mode == M_VALUE:
            return e
        return e * (-2.0 * u / (v * v)) / sigma
    if u > U_CUTOFF or u < -U_CUTOFF:
        return 0.0
    e = exp(-(u * u))
    if kind == K_GAUSS:
        if mode == M_VALUE:
            return e
        return -2.0 * u * e / sigma
    h0 = 1.0
    h1 = 2.0 * u
    for j in range(1, n + 1):
        h2 = 2.0 * u * h1 - 2.0 * j * h0
        h0 = h1
        h1 = h2
    if mode == M_VALUE:
        return h0 * e
    return -h1 * e / sigma


cdef struct Integrand:
    int wcode
    EpsK k
    int kind
    double mu
    double sigma
    int n
    int mode


cdef inline double _eval(Integrand* it, double x):
    return _weight(it.wcode, x, &it.k) * _testfn(it.kind, it.mu, it.sigma, it.n, it.mode, x)


cdef void _gk21(Integrand* it, double a, double b, double* result, double* abserr, bint* rounded):
    cdef double c = 0.5 * (a + b)
    cdef double h = 0.5 * (b - a)
    cdef double fc = _eval(it, c)
    cdef double resg = 0.0
    cdef double resk = WK[10] * fc
    cdef double resabs = fabs(resk)
    cdef double fv1[10]
    cdef double fv2[10]
    cdef double dx, f1, f2, reskh, resasc, ah, err, floor
    cdef int j, jtw, jtwm1
    for j in range(5):
        jtw = 2 * j + 1
        dx = h * XK[jtw]
        f1 = _eval(it, c - dx)
        f2 = _eval(it, c + dx)
        fv1[jtw] = f1
        fv2[jtw] = f2
        resg += WGs[j] * (f1 + f2)
        resk += WK[jtw] * (f1 + f2)
        resabs += WK[jtw] * (fabs(f1) + fabs(f2))
    for j in range(5):
        jtwm1 = 2 * j
        dx = h * XK[jtwm1]
        f1 = _eval(it, c - dx)
        f2 = _eval(it, c + dx)
        fv1[jtwm1] = f1
        fv2[jtwm1] = f2
        resk += WK[jtwm1] * (f1 + f2)
        resabs += WK[jtwm1] * (fabs(f1) + fabs(f2))
    reskh = resk * 0.5
    resasc = WK[10] * fabs(fc - reskh)
    for j in range(10):
        resasc += WK[j] * (fabs(fv1[j] - reskh) + fabs(fv2[j] - reskh))
    result[0] = resk * h
    ah = fabs(h)
    resabs *= ah
    resasc *= ah
    err = fabs((resk - resg) * h)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, pow(200.0 * err / resasc, 1.5))
    cdef double xp = fabs(c - h * XK[0])
    cdef double fp = fv1[0]
    cdef double tv = 0.0
    cdef double xn, fn
    for j in range(1, 11):
        if j < 10:
            xn = fabs(c - h * XK[j])
            fn = fv1[j]
        else:
            xn = fabs(c)
            fn = fc
        tv += max(xn, xp) * fabs(fn - fp)
        xp = xn
        fp = fn
    for j in range(9, -1, -1):
        xn = fabs(c + h * XK[j])
        fn = fv2[j]
        tv += max(xn, xp) * fabs(fn - fp)
        xp = xn
        fp = fn
    rounded[0] = False
    if resabs > UFLOW / (50.0 * EPMACH):
        floor = ROUNDOFF_FACTOR * EPMACH * resabs + 0.5 * EPMACH * tv
        if floor >= err:
            err = floor
            rounded[0] = True
    abserr[0] = err


cdef struct Panel:
    double err
    double a
    double b
    double val
    bint rounded


cdef inline bint _before(Panel* p, Panel* q):
    # max-heap on error, ties to the smaller left endpoint
    if p.err != q.err:
        return p.err > q.err
    return p.a < q.a


cdef void _push(Panel* heap, Py_ssize_t* size, Panel item):
    cdef Py_ssize_t i = size[0]
    cdef Py_ssize_t parent
    heap[i] = item
    size[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if _before(&heap[i], &heap[parent]):
            heap[i], heap[parent] = heap[parent], heap[i]
            i = parent
        else:
            break


cdef Panel _pop(Panel* heap, Py_ssize_t* size):
    cdef Panel top = heap[0]
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t l, r, best
    size[0] -= 1
    heap[0] = heap[size[0]]
    while True:
        l = 2 * i + 1
        r = l + 1
        best = i
        if l < size[0] and _before(&heap[l], &heap[best]):
            best = l
        if r < size[0] and _before(&heap[r], &heap[best]):
            best = r
        if best == i:
            break
        heap[i], heap[best] = heap[best], heap[i]
        i = best
    return top


cdef tuple _sums(Panel* heap, Py_ssize_t size, Panel* frozen, Py_ssize_t nfrozen):
    # order-independent exact sums, matching the fsum resync in _purepy
    vals = [heap[i].val for i in range(size)] + [frozen[i].val for i in range(nfrozen)]
    errs = [heap[i].err for i in range(size)] + [frozen[i].err for i in range(nfrozen)]
    return fsum(vals), fsum(errs)


cdef tuple _adapt(Integrand* it, list points, double abs_tol, double rel_tol, Py_ssize_t max_intervals):
    cdef Py_ssize_t npts = len(points)
    cdef Py_ssize_t cap = npts + 64
    cdef Panel* heap = <Panel*> malloc(cap * sizeof(Panel))
    cdef Panel* frozen = <Panel*> malloc(cap * sizeof(Panel))
    cdef Py_ssize_t size = 0
    cdef Py_ssize_t nfrozen = 0
    cdef Py_ssize_t nint = 0
    cdef double val_sum = 0.0
    cdef double err_sum = 0.0
    cdef double a, b, m, v, e, v1, e1, v2, e2, tol
    cdef bint r, r1, r2
    cdef Panel item, p
    cdef bint converged = False
    cdef double frozen_err = 0.0
    cdef Py_ssize_t i
    if heap == NULL or frozen == NULL:
        free(heap)
        free(frozen)
        raise MemoryError()
    try:
        for i in range(npts - 1):
            a = points[i]
            b = points[i + 1]
            _gk21(it, a, b, &v, &e, &r)
            p.err = e
            p.a = a
            p.b = b
            p.val = v
            p.rounded = r
            _push(heap, &size, p)
            val_sum += v
            err_sum += e
            nint += 1
        while True:
            tol = max(abs_tol, rel_tol * fabs(val_sum))
            if err_sum <= tol:
                val_sum, err_sum = _sums(heap, size, frozen, nfrozen)
                tol = max(abs_tol, rel_tol * fabs(val_sum))
                if err_sum <= tol:
                    converged = True
                    break
            if size == 0 or nint >= max_intervals:
                break
            if frozen_err > tol and err_sum - frozen_err <= frozen_err:
                break
            item = _pop(heap, &size)
            a = item.a
            b = item.b
            m = 0.5 * (a + b)
            if item.rounded or not (a < m and m < b):
                frozen[nfrozen] = item
                nfrozen += 1
                frozen_err += item.err
                continue
            if size + 2 > cap or nfrozen + 2 > cap:
                cap = 2 * cap
                heap = <Panel*> realloc(heap, cap * sizeof(Panel))
                frozen = <Panel*> realloc(frozen, cap * sizeof(Panel))
                if heap == NULL or frozen == NULL:
                    raise MemoryError()
            _gk21(it, a, m, &v1, &e1, &r1)
            _gk21(it, m, b, &v2, &e2, &r2)
            val_sum += (v1 + v2) - item.val
            err_sum += (e1 + e2) + (-item.err)
            p.err = e1
            p.a = a
            p.b = m
            p.val = v1
            p.rounded = r1
            _push(heap, &size, p)
            p.err = e2
            p.a = m
            p.b = b
            p.val = v2
            p.rounded = r2
            _push(heap, &size, p)
            nint += 1
        value, error = _sums(heap, size, frozen, nfrozen)
    finally:
        free(heap)
        free(frozen)
    return value, error, nint, converged


def eps_consts(double eps):
    cdef EpsK k = _eps_consts(eps)
    return (k.eps, k.s, k.ssq, k.c2, k.sin2e, k.hpe, k.cose)


def family(int code, double x, double eps):
    cdef EpsK k = _eps_consts(eps)
    return _weight(code, x, &k)


def limit(int code, double x):
    cdef EpsK k = _eps_consts(0.1)
    return _weight(code, x, &k)


def testfn(int kind, double mu, double sigma, int n, int mode, double x):
    return _testfn(kind, mu, sigma, n, mode, x)


def integrate_product(int wcode, double eps, int kind, double mu, double sigma,
                      int n, int mode, points, double abs_tol, double rel_tol,
                      Py_ssize_t max_intervals):
    """Adaptive integral of weight(wcode) * testfn over the panels ``points``."""
    cdef Integrand it
    it.wcode = wcode
    it.k = _eps_consts(eps if eps > 0.0 else 0.1)
    it.kind = kind
    it.mu = mu
    it.sigma = sigma
    it.n = n
    it.mode = mode
    return _adapt(&it, [float(p) for p in points], abs_tol, rel_tol, max_intervals)

"""Exact scalars, polynomials and matrices.

Scalars are ``int``/``Fraction`` for Q, :class:`QuadElt` for the real
quadratic field F = Q(omega), and :class:`ExtElt` for Q[x]/(g).  Large
matrices over Q and F are held as python-flint ``fmpq_mat`` objects; their
kernels and particular solutions are found modulo several primes, lifted by
CRT and rational reconstruction, and then checked exactly, so every result
returned here is exact.
"""

from fractions import Fraction
import itertools
import math

import flint
import mpmath

from .errors import (FactorizationIncomplete, NotSubspace, SingularMatrix,
                     UnsupportedField, ZeroDivisorPivot)


def _norm_q(x):
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def qdiv(a, b):
    """Exact a / b; plain ints are promoted to Fraction."""
    if isinstance(b, int):
        b = Fraction(b)
    if isinstance(a, int) and isinstance(b, Fraction):
        a = Fraction(a)
    return _norm_q(a / b) if isinstance(a, Fraction) else a / b


def is_zero(x):
    if isinstance(x, (int, Fraction)):
        return x == 0
    return x.is_zero()


# ---------------------------------------------------------------------------
# quadratic fields

class FieldData:
    """Q(sqrt D) with integral basis 1, omega and omega^2 = t*omega + c."""

    def __init__(self, D, t, c, eps):
        self.D = D
        self.t = t
        self.c = c
        self.omega = QuadElt(0, 1, self)
        self.eps = QuadElt(eps[0], eps[1], self)
        e2 = self.eps * self.eps
        e2w = e2 * self.omega
        self.A, self.B = e2.a, e2.b
        self.C, self.D_rel = e2w.a, e2w.b
        self.log_eps = math.log(abs(float(self.eps)))
        self._eps_pow = {0: self.one(), 1: self.eps}

    def __repr__(self):
        return "Q(sqrt%d)" % self.D

    def __eq__(self, other):
        return isinstance(other, FieldData) and other.D == self.D

    def __hash__(self):
        return hash(("F", self.D))

    def __reduce__(self):
        return (quad_field, (self.D,))

    def elt(self, a, b=0):
        return QuadElt(a, b, self)

    def one(self):
        return QuadElt(1, 0, self)

    def zero(self):
        return QuadElt(0, 0, self)

    def sqrtD(self):
        return QuadElt(-self.t, 2, self)

    def eps_pow(self, n):
        e = self._eps_pow.get(n)
        if e is None:
            e = self.eps ** n if n >= 0 else (self.eps.inverse()) ** (-n)
            self._eps_pow[n] = e
        return e

    def unit_log(self, u):
        """Return (s, n) with u = s*eps^n, or None if u is not a unit."""
        u = self.coerce(u)
        if u.is_zero() or not u.is_integral() or abs(u.norm()) != 1:
            return None
        n = round(math.log(abs(float(u))) / self.log_eps)
        for m in (n, n - 1, n + 1):
            q = u * self.eps_pow(-m)
            if q.b == 0 and q.a in (1, -1):
                return (q.a, m)
        raise AssertionError("unit logarithm failed")

    def coerce(self, x):
        if isinstance(x, QuadElt):
            return x
        return QuadElt(x, 0, self)


_FIELDS = {}


def quad_field(D):
    """The two fields used here; omega = eps is the fundamental unit."""
    F = _FIELDS.get(D)
    if F is not None:
        return F
    if D == 5:
        F = FieldData(5, 1, 1, (0, 1))
    elif D == 13:
        F = FieldData(13, 3, 1, (0, 1))
    else:
        raise UnsupportedField("only D = 5 and D = 13 are supported, got %r" % (D,))
    _FIELDS[D] = F
    return F


class QuadElt:
    """a + b*omega.  The coefficients may be rationals or ExtElt."""

    __slots__ = ("a", "b", "F")

    def __init__(self, a, b, F):
        self.a = _norm_q(a)
        self.b = _norm_q(b)
        self.F = F

    def _lift(self, y):
        if isinstance(y, QuadElt):
            return y
        return QuadElt(y, 0, self.F)

    def __add__(self, y):
        if isinstance(y, QuadElt):
            return QuadElt(self.a + y.a, self.b + y.b, self.F)
        return QuadElt(self.a + y, self.b, self.F)

    __radd__ = __add__

    def __neg__(self):
        return QuadElt(-self.a, -self.b, self.F)

    def __sub__(self, y):
        if isinstance(y, QuadElt):
            return QuadElt(self.a - y.a, self.b - y.b, self.F)
        return QuadElt(self.a - y, self.b, self.F)

    def __rsub__(self, y):
        return QuadElt(y - self.a, -self.b, self.F)

    def __mul__(self, y):
        if isinstance(y, QuadElt):
            F = self.F
            bb = self.b * y.b
            return QuadElt(self.a * y.a + F.c * bb,
                           self.a * y.b + self.b * y.a + F.t * bb, F)
        return QuadElt(self.a * y, self.b * y, self.F)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        r = QuadElt(1, 0, self.F)
        x = self
        while n:
            if n & 1:
                r = r * x
            x = x * x
            n >>= 1
        return r

    def conj(self):
        return QuadElt(self.a + self.F.t * self.b, -self.b, self.F)

    def norm(self):
        return _norm_q(self.a * self.a + self.F.t * self.a * self.b - self.F.c * self.b * self.b)

    def trace(self):
        return _norm_q(2 * self.a + self.F.t * self.b)

    def inverse(self):
        n = self.norm()
        if is_zero(n):
            raise ZeroDivisionError("inverse of zero in %r" % self.F)
        if isinstance(n, int):
            n = Fraction(n)
        if isinstance(n, Fraction):
            ni = 1 / n
        else:
            ni = n.inverse()
        return self.conj() * ni

    def __truediv__(self, y):
        if isinstance(y, QuadElt):
            return self * y.inverse()
        if isinstance(y, int):
            y = Fraction(y)
        if isinstance(y, Fraction):
            return self * (1 / y)
        return self * y.inverse()

    def __rtruediv__(self, y):
        return self._lift(y) * self.inverse()

    def __eq__(self, y):
        if isinstance(y, QuadElt):
            return self.a == y.a and self.b == y.b
        if isinstance(y, (int, Fraction)):
            return is_zero(self.b) and self.a == y
        return NotImplemented

    def __hash__(self):
        if is_zero(self.b):
            return hash(self.a)
        return hash((self.a, self.b))

    def is_zero(self):
        return is_zero(self.a) and is_zero(self.b)

    def is_rational(self):
        return is_zero(self.b)

    def is_integral(self):
        return (isinstance(self.a, int) and isinstance(self.b, int))

    def coords(self):
        return (self.a, self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * (self.F.t + math.sqrt(self.F.D)) / 2

    def sign(self):
        """Exact sign in the embedding omega -> (t + sqrt D)/2."""
        p = Fraction(self.a) + Fraction(self.b) * Fraction(self.F.t, 2)
        q = Fraction(self.b, 2)
        return _sign_sqrt(p, q, self.F.D)

    def sign2(self):
        """Exact sign in the conjugate embedding."""
        return self.conj().sign()

    def is_totally_positive(self):
        return self.sign() > 0 and self.sign2() > 0

    def __repr__(self):
        if is_zero(self.b):
            return str(self.a)
        w = "w" if self.F is None else ("e" if self.F.omega == self.F.eps else "w")
        if is_zero(self.a):
            return "%s*%s" % (self.b, w)
        return "%s%+d*%s" % (self.a, self.b, w) if isinstance(self.b, int) else \
            "%s+(%s)*%s" % (self.a, self.b, w)

    def __lt__(self, y):
        return (self - y).sign() < 0

    def __gt__(self, y):
        return (self - y).sign() > 0


def _sign_sqrt(p, q, D):
    """Sign of p + q*sqrt(D) for rationals p, q."""
    sp = (p > 0) - (p < 0)
    sq = (q > 0) - (q < 0)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    d = p * p - q * q * D
    return sp if d > 0 else -sp


def euclid_div(y, x):
    """q, r with y = q*x + r and |N(r)| < |N(x)|."""
    F = x.F
    y = F.coerce(y)
    if x.is_zero():
        raise ZeroDivisionError("euclid_div by zero")
    z = y / x
    a0, b0 = math.floor(z.a), math.floor(z.b)
    best = None
    for da in range(-2, 4):
        for db in range(-2, 4):
            q = QuadElt(a0 + da, b0 + db, F)
            r = y - q * x
            n = abs(r.norm())
            if best is None or n < best[0]:
                best = (n, q, r)
    if best[0] >= abs(x.norm()):
        raise AssertionError("no Euclidean remainder found")
    return best[1], best[2]


def divides(x, y):
    """True when x | y in O_F."""
    if x.is_zero():
        return y.is_zero()
    return (y / x).is_integral()


# ---------------------------------------------------------------------------
# univariate polynomials

class Poly:
    """Dense polynomial, coefficients listed from the constant term up."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        c = [_norm_q(Fraction(x)) if isinstance(x, (int, Fraction)) else x for x in coeffs]
        while c and is_zero(c[-1]):
            c.pop()
        self.c = c

    @classmethod
    def x(cls):
        return cls([0, 1])

    def degree(self):
        return len(self.c) - 1

    def lead(self):
        return self.c[-1]

    def is_monic(self):
        return bool(self.c) and self.c[-1] == 1

    def monic(self):
        l = self.lead()
        return Poly([qdiv(ci, l) for ci in self.c])

    def __add__(self, o):
        o = o if isinstance(o, Poly) else Poly([o])
        n = max(len(self.c), len(o.c))
        return Poly([(self.c[i] if i < len(self.c) else 0) + (o.c[i] if i < len(o.c) else 0)
                     for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-x for x in self.c])

    def __sub__(self, o):
        return self + (-(o if isinstance(o, Poly) else Poly([o])))

    def __rsub__(self, o):
        return Poly([o]) - self

    def __mul__(self, o):
        if not isinstance(o, Poly):
            return Poly([x * o for x in self.c])
        if not self.c or not o.c:
            return Poly([])
        r = [0] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            if is_zero(a):
                continue
            for j, b in enumerate(o.c):
                r[i + j] = r[i + j] + a * b
        return Poly(r)

    __rmul__ = __mul__

    def __pow__(self, n):
        r = Poly([1])
        for _ in range(n):
            r = r * self
        return r

    def __divmod__(self, o):
        if not o.c:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        q = [0] * max(len(r) - len(o.c) + 1, 0)
        lo = o.c[-1]
        for k in range(len(r) - len(o.c), -1, -1):
            f = r[k + len(o.c) - 1]
            if is_zero(f):
                continue
            f = qdiv(f, lo)
            q[k] = f
            for j, b in enumerate(o.c):
                r[k + j] = r[k + j] - f * b
        return Poly(q), Poly(r[:len(o.c) - 1])

    def __floordiv__(self, o):
        return divmod(self, o)[0]

    def __mod__(self, o):
        return divmod(self, o)[1]

    def __eq__(self, o):
        if not isinstance(o, Poly):
            o = Poly([o])
        return self.c == o.c

    def __hash__(self):
        return hash(tuple(self.c))

    def __call__(self, x):
        r = 0
        for a in reversed(self.c):
            r = r * x + a
        return r

    def deriv(self):
        return Poly([i * a for i, a in enumerate(self.c)][1:])

    def gcd(self, o):
        a, b = self, o
        while b.c:
            a, b = b, a % b
        return a.monic() if a.c else a

    def is_integral(self):
        return all(isinstance(x, int) for x in self.c)

    def coeffs_int(self):
        return [int(x) for x in self.c]

    def __repr__(self):
        if not self.c:
            return "0"
        out = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if is_zero(a):
                continue
            mon = "" if i == 0 else ("x" if i == 1 else "x^%d" % i)
            if isinstance(a, (int, Fraction)):
                s = "-" if a < 0 else "+"
                m = abs(a)
                coef = "" if (m == 1 and mon) else str(m)
                body = coef + ("*" if coef and mon else "") + mon
                out.append(s + body)
            else:
                out.append("+(%r)%s" % (a, "*" + mon if mon else ""))
        s = "".join(out)
        return s[1:] if s.startswith("+") else s


def poly_from_roots_product(polys):
    r = Poly([1])
    for p in polys:
        r = r * p
    return r


# ---------------------------------------------------------------------------
# Q[x]/(g)

class ExtElt:
    """Element of Q[x]/(g), g monic over Q."""

    __slots__ = ("g", "c")

    def __init__(self, g, coeffs):
        self.g = g
        p = coeffs if isinstance(coeffs, Poly) else Poly(coeffs)
        if p.degree() >= g.degree():
            p = p % g
        self.c = p

    @classmethod
    def gen(cls, g):
        return cls(g, [0, 1])

    def _coerce(self, y):
        if isinstance(y, ExtElt):
            return y
        return ExtElt(self.g, [y])

    def __add__(self, y):
        if isinstance(y, (QuadElt,)):
            return NotImplemented
        return ExtElt(self.g, self.c + self._coerce(y).c)

    __radd__ = __add__

    def __neg__(self):
        return ExtElt(self.g, -self.c)

    def __sub__(self, y):
        if isinstance(y, QuadElt):
            return NotImplemented
        return ExtElt(self.g, self.c - self._coerce(y).c)

    def __rsub__(self, y):
        return ExtElt(self.g, self._coerce(y).c - self.c)

    def __mul__(self, y):
        if isinstance(y, QuadElt):
            return NotImplemented
        if isinstance(y, ExtElt):
            return ExtElt(self.g, self.c * y.c)
        return ExtElt(self.g, self.c * y)

    __rmul__ = __mul__

    def inverse(self):
        # extended Euclid on (c, g)
        r0, r1 = self.g, self.c
        s0, s1 = Poly([0]), Poly([1])
        while r1.c:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r0.degree() != 0:
            raise ZeroDivisorPivot("zero divisor in Q[x]/(%r): gcd %r" % (self.g, r0.monic()))
        return ExtElt(self.g, s0 * (Fraction(1) / r0.c[0]))

    def __truediv__(self, y):
        if isinstance(y, QuadElt):
            return NotImplemented
        if isinstance(y, ExtElt):
            return self * y.inverse()
        return ExtElt(self.g, self.c * (Fraction(1) / y))

    def __rtruediv__(self, y):
        return self._coerce(y) * self.inverse()

    def __pow__(self, n):
        r = ExtElt(self.g, [1])
        for _ in range(n):
            r = r * self
        return r

    def is_zero(self):
        return not self.c.c

    def __eq__(self, y):
        if isinstance(y, ExtElt):
            return self.c == y.c
        if isinstance(y, (int, Fraction)):
            return self.c == Poly([y])
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def coords(self):
        d = self.g.degree()
        return [self.c.c[i] if i < len(self.c.c) else 0 for i in range(d)]

    def __repr__(self):
        return repr(self.c).replace("x", "th")


def minpoly(e):
    """Minimal polynomial over Q of an ExtElt, QuadElt, or rational."""
    if isinstance(e, (int, Fraction)):
        return Poly([-e, 1])
    coords = _coord_fn(e)
    one = _one_like(e)
    vecs = []
    p = one
    for k in range(0, 64):
        v = coords(p)
        vecs.append(v)
        rel = _dependency(vecs)
        if rel is not None:
            return Poly(rel).monic()
        p = p * e
    raise AssertionError("minpoly degree bound exceeded")


def _one_like(e):
    if isinstance(e, ExtElt):
        return ExtElt(e.g, [1])
    if isinstance(e, QuadElt):
        a = e.a if isinstance(e.a, ExtElt) else (e.b if isinstance(e.b, ExtElt) else None)
        if a is not None:
            return QuadElt(ExtElt(a.g, [1]), ExtElt(a.g, [0]), e.F)
        return QuadElt(1, 0, e.F)
    raise TypeError(type(e))


def _coord_fn(e):
    if isinstance(e, ExtElt):
        return lambda x: [Fraction(c) for c in x.coords()]
    g = None
    for part in (e.a, e.b):
        if isinstance(part, ExtElt):
            g = part.g
    if g is None:
        return lambda x: [Fraction(x.a), Fraction(x.b)]

    def f(x):
        out = []
        for part in (x.a, x.b):
            if isinstance(part, ExtElt):
                out.extend(Fraction(c) for c in part.coords())
            else:
                out.extend([Fraction(part)] + [Fraction(0)] * (g.degree() - 1))
        return out
    return f


def _dependency(vecs):
    """Coefficients (c_0..c_k), c_k = 1, of a relation sum c_i v_i = 0, if any."""
    k = len(vecs) - 1
    if k == 0:
        return [1] if all(x == 0 for x in vecs[0]) else None
    cols = [list(v) for v in vecs[:-1]]
    target = vecs[-1]
    n = len(target)
    M = [[cols[j][i] for j in range(k)] + [-target[i]] for i in range(n)]
    sol = _solve_rows(M, k)
    if sol is None:
        return None
    return sol + [1]


def _solve_rows(M, k):
    """Solve augmented rows (last column = rhs) for k unknowns over Q."""
    M = [row[:] for row in M]
    n = len(M)
    piv = []
    r = 0
    for col in range(k):
        p = next((i for i in range(r, n) if M[i][col] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        f = M[r][col]
        M[r] = [x / f for x in M[r]]
        for i in range(n):
            if i != r and M[i][col] != 0:
                g = M[i][col]
                M[i] = [a - g * b for a, b in zip(M[i], M[r])]
        piv.append(col)
        r += 1
    if any(M[i][k] != 0 for i in range(r, n)):
        return None
    sol = [Fraction(0)] * k
    for i, col in enumerate(piv):
        sol[col] = M[i][k]
    return sol


# ---------------------------------------------------------------------------
# small dense matrices (lists of rows) over any exact field

def mat_mul(A, B):
    n, m = len(A), len(B[0]) if B else 0
    inner = len(B)
    return [[sum((A[i][k] * B[k][j] for k in range(inner)), 0) for j in range(m)]
            for i in range(n)]


def mat_identity(n, one=1):
    return [[one if i == j else 0 * one for j in range(n)] for i in range(n)]


def charpoly(M):
    """Berkowitz algorithm (division free).  Returns a monic Poly."""
    n = len(M)
    if n == 0:
        return Poly([1])
    # vector of coefficients, highest degree first
    C = [1, -M[0][0]]
    for r in range(1, n):
        # partition of the leading (r+1)x(r+1) block
        R = M[r][:r]
        S = [M[i][r] for i in range(r)]
        A = [row[:r] for row in M[:r]]
        a = M[r][r]
        # Toeplitz column: 1, -a, -R S, -R A S, ...
        col = [1, -a]
        v = S
        for _ in range(r):
            col.append(-sum((R[i] * v[i] for i in range(r)), 0))
            v = [sum((A[i][j] * v[j] for j in range(r)), 0) for i in range(r)]
        newC = []
        for i in range(r + 2):
            s = 0
            for j in range(min(i, len(C) - 1) + 1):
                if i - j < len(col):
                    s = s + col[i - j] * C[j]
            newC.append(s)
        C = newC
    return Poly(list(reversed(C)))


def gauss_rref(rows, ncols=None):
    """Row reduce a list of rows over an exact field.  Returns (R, pivots)."""
    R = [list(r) for r in rows]
    if not R:
        return R, []
    ncols = len(R[0]) if ncols is None else ncols
    piv = []
    r = 0
    for col in range(ncols):
        p = None
        for i in range(r, len(R)):
            x = R[i][col]
            if not is_zero(x):
                try:
                    inv = qdiv(1, x) if isinstance(x, (int, Fraction)) else x.inverse()
                except ZeroDivisorPivot:
                    continue
                p = i
                break
        if p is None:
            if any(not is_zero(R[i][col]) for i in range(r, len(R))):
                raise ZeroDivisorPivot("no unit pivot in column %d" % col)
            continue
        if isinstance(inv, int):
            inv = Fraction(inv)
        R[r], R[p] = R[p], R[r]
        R[r] = [x * inv for x in R[r]]
        for i in range(len(R)):
            if i != r and not is_zero(R[i][col]):
                g = R[i][col]
                R[i] = [a - g * b for a, b in zip(R[i], R[r])]
        piv.append(col)
        r += 1
        if r == len(R):
            break
    return R[:r], piv


def gauss_kernel(M, ncols=None):
    """Kernel basis (list of column vectors) of a small matrix over a field."""
    ncols = len(M[0]) if M else (ncols or 0)
    R, piv = gauss_rref(M, ncols)
    zero = 0
    for row in M:
        for x in row:
            if not isinstance(x, (int, Fraction)):
                zero = x * 0
                break
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for j in free:
        v = [zero] * ncols
        v[j] = zero + 1
        for i, pc in enumerate(piv):
            v[pc] = -R[i][j]
        basis.append(v)
    return basis


def bareiss_kernel(M):
    """Fraction-free kernel of an integer/rational matrix (independent oracle)."""
    if not M:
        return []
    den = 1
    for row in M:
        for x in row:
            d = Fraction(x).denominator
            den = den * d // math.gcd(den, d)
    A = [[int(Fraction(x) * den) for x in row] for row in M]
    n, m = len(A), len(A[0])
    piv = []
    prev = 1
    r = 0
    for col in range(m):
        if r == n:
            break
        p = next((i for i in range(r, n) if A[i][col] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for i in range(r + 1, n):
            A[i] = [(A[r][col] * A[i][j] - A[i][col] * A[r][j]) // prev for j in range(m)]
        prev = A[r][col]
        piv.append(col)
        r += 1
    basis = []
    for j in range(m):
        if j in piv:
            continue
        v = [Fraction(0)] * m
        v[j] = Fraction(1)
        for i in range(len(piv) - 1, -1, -1):
            pc = piv[i]
            s = sum((A[i][c] * v[c] for c in range(pc + 1, m)), Fraction(0))
            v[pc] = -s / A[i][pc]
        basis.append(v)
    return basis


class Subspace:
    """Ordered basis of column vectors (python lists)."""

    def __init__(self, basis, ambient):
        self.basis = [list(v) for v in basis]
        self.ambient = ambient

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, v):
        if not self.basis:
            return all(is_zero(x) for x in v)
        rows = [list(r) for r in zip(*self.basis)]
        M = [row + [x] for row, x in zip(rows, v)]
        R, piv = gauss_rref(M, len(self.basis) + 1)
        return len(self.basis) not in piv

    def __repr__(self):
        return "Subspace(dim=%d, ambient=%d)" % (self.dim, self.ambient)


def kernel(M):
    """Kernel of a matrix given as a list of rows; dispatches on entry type."""
    ncols = len(M[0]) if M else 0
    kinds = set()
    for row in M:
        for x in row:
            if isinstance(x, (int, Fraction)):
                kinds.add("q")
            elif isinstance(x, QuadElt) and not isinstance(x.a, ExtElt) and not isinstance(x.b, ExtElt):
                kinds.add(("f", x.F))
            else:
                kinds.add("x")
    if kinds <= {"q"} and len(M) * ncols > 400:
        K = kernel_q(flint.fmpq_mat(len(M), ncols, [flint.fmpq(Fraction(x).numerator, Fraction(x).denominator) for row in M for x in row]))
        return Subspace(fmpq_cols(K), ncols)
    fields = [k[1] for k in kinds if isinstance(k, tuple)]
    if "x" not in kinds and fields and len(M) * ncols > 400:
        F = fields[0]
        K = kernel_f(FMat.from_rows(M, F))
        return Subspace([list(c) for c in zip(*K.to_rows())] if K.ncols() else [], ncols)
    return Subspace(gauss_kernel(M, ncols), ncols)


def quotient_basis(Z, B):
    """Vectors of Z completing a basis of span(B) to a basis of span(Z)."""
    for v in B.basis:
        if not Z.contains(v):
            raise NotSubspace("a vector of B is not in Z")
    chosen = []
    rows = [list(v) for v in B.basis]
    _, piv = gauss_rref(rows, Z.ambient) if rows else ([], [])
    rank = len(piv)
    for z in Z.basis:
        R, piv = gauss_rref(rows + [list(z)], Z.ambient)
        if len(piv) > rank:
            rows.append(list(z))
            chosen.append(z)
            rank += 1
    return Subspace(chosen, Z.ambient)


# ---------------------------------------------------------------------------
# factorization over Q

def squarefree_decomposition(p):
    """Yun's algorithm: list of (factor, multiplicity), factors monic squarefree."""
    p = p.monic()
    out = []
    d = p.deriv()
    a = p.gcd(d)
    b = p // a
    c = d // a - b.deriv()
    i = 1
    while b.degree() > 0:
        y = b.gcd(c)
        if y.degree() > 0:
            out.append((y, i))
        b = b // y
        c = c // y - b.deriv()
        i += 1
    return out


def _roots(p, dps):
    coeffs = [mpmath.mpf(int(x)) if isinstance(x, int) else mpmath.mpf(x.numerator) / x.denominator
              for x in reversed(p.c)]
    with mpmath.workdps(dps):
        roots, err = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps, error=True)
    return roots, err


def _split_squarefree(f, budget=200000):
    """Factor a monic squarefree integer polynomial; returns (factors, rest)."""
    n = f.degree()
    if n <= 1:
        return [f], Poly([1])
    height = max(abs(int(x)) for x in f.c)
    dps = max(30, 2 * len(str(height)) + 20)
    for _ in range(8):
        try:
            roots, err = _roots(f, dps)
        except mpmath.libmp.libhyper.NoConvergence:
            dps *= 2
            continue
        with mpmath.workdps(dps):
            sep = min((abs(a - b) for a, b in itertools.combinations(roots, 2)), default=mpmath.mpf(1))
            if err == 0 or sep > 100 * err:
                break
        dps *= 2
    with mpmath.workdps(dps):
        # group complex conjugate roots so candidate factors are real
        tol = mpmath.mpf(10) ** (-dps // 2)
        units = []
        used = [False] * len(roots)
        for i, r in enumerate(roots):
            if used[i]:
                continue
            used[i] = True
            if abs(mpmath.im(r)) <= tol * max(1, abs(r)):
                units.append([mpmath.re(r)])
                continue
            j = min((k for k in range(len(roots)) if not used[k]),
                    key=lambda k: abs(roots[k] - mpmath.conj(r)))
            used[j] = True
            units.append([r, roots[j]])
        rest = f
        found = []
        remaining = list(range(len(units)))
        size = 1
        spent = 0
        while remaining and size <= len(remaining) // 2:
            spent += math.comb(len(remaining), size)
            if spent > budget:
                # search abandoned: what is left is not known to be irreducible
                return found, rest
            hit = None
            for S in itertools.combinations(remaining, size):
                rs = [r for k in S for r in units[k]]
                cand = _int_poly_from_roots(rs)
                if cand is None:
                    continue
                q, r = divmod(rest, cand)
                if not r.c:
                    hit = S
                    found.append(cand)
                    rest = q
                    break
            if hit is None:
                size += 1
            else:
                remaining = [k for k in remaining if k not in hit]
        if rest.degree() > 0:
            found.append(rest)
        return found, Poly([1])


def _int_poly_from_roots(rs):
    """Round prod (x - r) to an integer polynomial if it is close to one."""
    c = [mpmath.mpc(1)]
    for r in rs:
        new = [mpmath.mpc(0)] * (len(c) + 1)
        for i, a in enumerate(c):
            new[i] -= a * r
            new[i + 1] += a
        c = new
    out = []
    for a in c:
        if abs(mpmath.im(a)) > mpmath.mpf(10) ** (-5) * max(1, abs(a)):
            return None
        x = mpmath.nint(mpmath.re(a))
        if abs(mpmath.re(a) - x) > mpmath.mpf(10) ** (-5) * max(1, abs(a)):
            return None
        out.append(int(x))
    return Poly(out)


def factor_over_Q(p, budget=200000):
    """Monic integer factors of a monic integer polynomial, with multiplicity.

    Roots are located numerically, candidate factors are obtained by
    rounding products over subsets of roots, and each factor is accepted
    only after exact division.  Raises FactorizationIncomplete with the
    factors found so far if some part cannot be split.
    """
    if not p.is_monic() or not p.is_integral():
        raise ValueError("factor_over_Q needs a monic integer polynomial")
    out = []
    left = Poly([1])
    for f, mult in squarefree_decomposition(p):
        if not f.is_integral():
            raise AssertionError("squarefree part left Z[x]")
        parts, rest = _split_squarefree(f, budget)
        for q in parts:
            out.extend([q] * mult)
        if rest.degree() > 0:
            left = left * rest ** mult
    if left.degree() > 0:
        raise FactorizationIncomplete(_sorted_factors(out), left)
    prod = poly_from_roots_product(out)
    if prod != p:
        raise AssertionError("factor product mismatch")
    return _sorted_factors(out)


def _sorted_factors(fs):
    return sorted(fs, key=lambda q: (q.degree(), [abs(x) for x in reversed(q.c)]))


# ---------------------------------------------------------------------------
# large matrices over Q: certified multimodular kernels and solves

_PRIMES = []


def _prime(i):
    while len(_PRIMES) <= i:
        n = _PRIMES[-1] - 2 if _PRIMES else (1 << 62) - 1
        while not flint.fmpz(n).is_prime():
            n -= 2
        _PRIMES.append(n)
    return _PRIMES[i]


def _ratrecon(a, m):
    """Rational r/s = a mod m with |r|, s <= sqrt(m/2), or None."""
    a %= m
    bound = math.isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    if math.gcd(r1, s1) != 1:
        return None
    return flint.fmpq(r1, s1)


def _int_rows(M):
    """Integer matrix with the same row space and kernel as an fmpq_mat."""
    num, den = M.numer_denom()
    return num


def _rref_mod(Mz, p):
    Mp = flint.nmod_mat(Mz, p)
    R, rank = Mp.rref()
    e = [int(x) for x in R.entries()]
    nc = Mz.ncols()
    piv = []
    for r in range(rank):
        row = e[r * nc:(r + 1) * nc]
        piv.append(next(j for j, x in enumerate(row) if x))
    return e, rank, piv


def _reconstruct(vals, m):
    out = []
    for v in vals:
        q = _ratrecon(v, m)
        if q is None:
            return None
        out.append(q)
    return out


def _multimodular(Mz, extract, verify, max_primes=200):
    """Shared CRT loop: ``extract(e, rank, piv, p)`` returns residues."""
    best = None
    acc = None
    mod = 1
    for k in range(max_primes):
        p = _prime(k)
        e, rank, piv = _rref_mod(Mz, p)
        key = (rank, [-x for x in piv])
        if best is None or key > best:
            best = key
            res = extract(e, rank, piv, p)
            if res is None:
                continue
            acc, mod, piv_ref = res, p, piv
        elif key < best:
            continue
        else:
            res = extract(e, rank, piv, p)
            if res is None:
                continue
            acc = [(a + mod * ((r - a) * pow(mod, -1, p) % p)) for a, r in zip(acc, res)]
            mod *= p
        if acc is None:
            continue
        # cheap early exit on a sample before the full reconstruction
        sample = acc[:: max(1, len(acc) // 16)]
        if _reconstruct(sample, mod) is None:
            continue
        vals = _reconstruct(acc, mod)
        if vals is None:
            continue
        out = verify(vals, piv_ref)
        if out is not None:
            return out
    raise AssertionError("multimodular reconstruction did not converge")


def kernel_q(M):
    """Kernel of an fmpq_mat as an fmpq_mat whose columns form the basis.

    The basis is in reduced form: it is the identity on the free columns.
    """
    return kernel_q_free(M)[0]


def kernel_q_free(M):
    """(K, free) with K the reduced kernel basis and free its free column indices."""
    nr, nc = M.nrows(), M.ncols()
    if nc == 0:
        return flint.fmpq_mat(0, 0), []
    if nr == 0:
        return _identity_q(nc), list(range(nc))
    if nr * nc < 900:
        return _kernel_direct(M)
    Mz = _int_rows(M)

    def extract(e, rank, piv, p):
        free = [j for j in range(nc) if j not in set(piv)]
        return [(-e[r * nc + j]) % p for r in range(rank) for j in free]

    def verify(vals, piv):
        ps = set(piv)
        free = [j for j in range(nc) if j not in ps]
        K = flint.fmpq_mat(nc, len(free))
        for c, j in enumerate(free):
            K[j, c] = 1
        it = iter(vals)
        for r, pc in enumerate(piv):
            for c in range(len(free)):
                K[pc, c] = next(it)
        if not free:
            return K, free
        if all(x == 0 for x in (Mz * K).entries()):
            return K, free
        return None

    return _multimodular(Mz, extract, verify)


def _kernel_direct(M):
    R, rank = M.rref()
    nc = M.ncols()
    e = R.entries()
    piv = []
    for r in range(rank):
        piv.append(next(j for j in range(nc) if e[r * nc + j] != 0))
    ps = set(piv)
    free = [j for j in range(nc) if j not in ps]
    K = flint.fmpq_mat(nc, len(free))
    for c, j in enumerate(free):
        K[j, c] = 1
        for r, pc in enumerate(piv):
            K[pc, c] = -e[r * nc + j]
    return K, free


def _identity_q(n):
    I = flint.fmpq_mat(n, n)
    for i in range(n):
        I[i, i] = 1
    return I


def solve_q(M, R):
    """A particular solution X of M X = R (free variables zero), or None."""
    nr, nc = M.nrows(), M.ncols()
    k = R.ncols()
    if k == 0:
        return flint.fmpq_mat(nc, 0)
    aug = hstack_q([M, R])
    if nr * (nc + k) < 900:
        Rr, rank = aug.rref()
        e = Rr.entries()
        X = flint.fmpq_mat(nc, k)
        for r in range(rank):
            pc = next(j for j in range(nc + k) if e[r * (nc + k) + j] != 0)
            if pc >= nc:
                return None
            for c in range(k):
                X[pc, c] = e[r * (nc + k) + nc + c]
        return X
    Mz = _int_rows(aug)
    tot = nc + k
    state = {"bad": 0}

    def extract(e, rank, piv, p):
        if any(pc >= nc for pc in piv):
            state["bad"] += 1
            return None
        return [e[r * tot + nc + c] for r in range(rank) for c in range(k)]

    def verify(vals, piv):
        X = flint.fmpq_mat(nc, k)
        it = iter(vals)
        for r, pc in enumerate(piv):
            for c in range(k):
                X[pc, c] = next(it)
        if M * X == R:
            return X
        return None

    try:
        return _multimodular(Mz, _guard(extract, state), verify, max_primes=60)
    except _Inconsistent:
        return None


class _Inconsistent(Exception):
    pass


def _guard(extract, state):
    def f(e, rank, piv, p):
        r = extract(e, rank, piv, p)
        if r is None and state["bad"] >= 3:
            raise _Inconsistent()
        return r
    return f


def hstack_q(mats):
    nr = mats[0].nrows()
    cols = sum(m.ncols() for m in mats)
    rows = [[] for _ in range(nr)]
    for m in mats:
        e = m.entries()
        c = m.ncols()
        for i in range(nr):
            rows[i].extend(e[i * c:(i + 1) * c])
    return flint.fmpq_mat(nr, cols, [x for r in rows for x in r])


def vstack_q(mats):
    nc = mats[0].ncols()
    e = []
    for m in mats:
        e.extend(m.entries())
    return flint.fmpq_mat(sum(m.nrows() for m in mats), nc, e)


def fmpq_cols(K):
    """Columns of an fmpq_mat as lists of Fractions."""
    e = K.entries()
    nr, nc = K.nrows(), K.ncols()
    return [[Fraction(int(e[i * nc + j].p), int(e[i * nc + j].q)) for i in range(nr)]
            for j in range(nc)]


def to_fmpq(x):
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def from_fmpq(x):
    return _norm_q(Fraction(int(x.p), int(x.q)))


# ---------------------------------------------------------------------------
# large matrices over F as pairs of rational matrices

class FMat:
    """Matrix M0 + M1*omega with M0, M1 fmpq_mat."""

    __slots__ = ("re", "om", "F")

    def __init__(self, re, om, F):
        self.re = re
        self.om = om
        self.F = F

    @classmethod
    def zeros(cls, r, c, F):
        return cls(flint.fmpq_mat(r, c), flint.fmpq_mat(r, c), F)

    @classmethod
    def identity(cls, n, F):
        return cls(_identity_q(n), flint.fmpq_mat(n, n), F)

    @classmethod
    def rational(cls, M, F):
        return cls(M, flint.fmpq_mat(M.nrows(), M.ncols()), F)

    @classmethod
    def from_rows(cls, rows, F):
        r = len(rows)
        c = len(rows[0]) if r else 0
        a, b = [], []
        for row in rows:
            for x in row:
                if isinstance(x, QuadElt):
                    a.append(to_fmpq(x.a))
                    b.append(to_fmpq(x.b))
                else:
                    a.append(to_fmpq(x))
                    b.append(flint.fmpq(0))
        return cls(flint.fmpq_mat(r, c, a), flint.fmpq_mat(r, c, b), F)

    @classmethod
    def from_cols(cls, cols, F, n=None):
        if not cols:
            return cls.zeros(n or 0, 0, F)
        return cls.from_rows([list(r) for r in zip(*cols)], F)

    def nrows(self):
        return self.re.nrows()

    def ncols(self):
        return self.re.ncols()

    def __add__(self, o):
        return FMat(self.re + o.re, self.om + o.om, self.F)

    def __sub__(self, o):
        return FMat(self.re - o.re, self.om - o.om, self.F)

    def __neg__(self):
        return FMat(-self.re, -self.om, self.F)

    def __mul__(self, o):
        if isinstance(o, FMat):
            F = self.F
            p0 = self.re * o.re
            p1 = self.om * o.om
            p2 = (self.re + self.om) * (o.re + o.om)
            cross = p2 - p0 - p1
            re = p0 + p1 * F.c if F.c != 1 else p0 + p1
            om = cross + p1 * F.t if F.t != 1 else cross + p1
            return FMat(re, om, F)
        return self.scale(o)

    def scale(self, s):
        """Multiply by a scalar of F."""
        if isinstance(s, QuadElt):
            a, b = to_fmpq(s.a), to_fmpq(s.b)
            if s.b == 0:
                return FMat(self.re * a, self.om * a, self.F)
            F = self.F
            bb = self.om * b
            return FMat(self.re * a + bb * F.c, self.om * a + self.re * b + bb * F.t, F)
        s = to_fmpq(s)
        return FMat(self.re * s, self.om * s, self.F)

    def transpose(self):
        return FMat(self.re.transpose(), self.om.transpose(), self.F)

    def __eq__(self, o):
        return isinstance(o, FMat) and self.re == o.re and self.om == o.om

    def is_zero(self):
        return all(x == 0 for x in self.re.entries()) and all(x == 0 for x in self.om.entries())

    def entry(self, i, j):
        return QuadElt(from_fmpq(self.re[i, j]), from_fmpq(self.om[i, j]), self.F)

    def to_rows(self):
        r, c = self.nrows(), self.ncols()
        a = self.re.entries()
        b = self.om.entries()
        return [[QuadElt(from_fmpq(a[i * c + j]), from_fmpq(b[i * c + j]), self.F)
                 for j in range(c)] for i in range(r)]

    def col(self, j):
        return [row[0] for row in self.cols([j]).to_rows()]

    def cols(self, idx):
        return FMat(_take_cols(self.re, idx), _take_cols(self.om, idx), self.F)

    def rows(self, idx):
        return FMat(_take_rows(self.re, idx), _take_rows(self.om, idx), self.F)

    @staticmethod
    def hstack(mats):
        F = mats[0].F
        return FMat(hstack_q([m.re for m in mats]), hstack_q([m.om for m in mats]), F)

    @staticmethod
    def vstack(mats):
        F = mats[0].F
        return FMat(vstack_q([m.re for m in mats]), vstack_q([m.om for m in mats]), F)

    def realize(self):
        """The Q-matrix of the same map on coordinates (x0, x1), x = x0 + x1*omega."""
        r, c = self.nrows(), self.ncols()
        a = self.re.entries()
        b = self.om.entries()
        t, cc = self.F.t, self.F.c
        out = [flint.fmpq(0)] * (4 * r * c)
        w = 2 * c
        for i in range(r):
            base0 = 2 * i * w
            base1 = base0 + w
            for j in range(c):
                m0 = a[i * c + j]
                m1 = b[i * c + j]
                if m0 == 0 and m1 == 0:
                    continue
                out[base0 + 2 * j] = m0
                out[base0 + 2 * j + 1] = m1 * cc
                out[base1 + 2 * j] = m1
                out[base1 + 2 * j + 1] = m0 + m1 * t
        return flint.fmpq_mat(2 * r, 2 * c, out)

    @classmethod
    def from_realized_vectors(cls, K, F):
        """Columns of a Q-matrix with 2n rows, read as vectors in F^n."""
        n2, k = K.nrows(), K.ncols()
        e = K.entries()
        n = n2 // 2
        a = [e[(2 * i) * k + j] for i in range(n) for j in range(k)]
        b = [e[(2 * i + 1) * k + j] for i in range(n) for j in range(k)]
        return cls(flint.fmpq_mat(n, k, a), flint.fmpq_mat(n, k, b), F)

    def realize_vectors(self):
        """Stack coordinates of the columns: row 2i is re, row 2i+1 is om."""
        n, k = self.nrows(), self.ncols()
        a = self.re.entries()
        b = self.om.entries()
        out = []
        for i in range(n):
            out.extend(a[i * k:(i + 1) * k])
            out.extend(b[i * k:(i + 1) * k])
        return flint.fmpq_mat(2 * n, k, out)

    def is_rational(self):
        return all(x == 0 for x in self.om.entries())

    def __repr__(self):
        return "FMat(%dx%d over %r)" % (self.nrows(), self.ncols(), self.F)


def _take_cols(M, idx):
    e = M.entries()
    c = M.ncols()
    return flint.fmpq_mat(M.nrows(), len(idx), [e[i * c + j] for i in range(M.nrows()) for j in idx])


def _take_rows(M, idx):
    e = M.entries()
    c = M.ncols()
    out = []
    for i in idx:
        out.extend(e[i * c:(i + 1) * c])
    return flint.fmpq_mat(len(idx), c, out)


def kernel_f(M):
    """Kernel over F of an FMat, as an FMat of basis columns."""
    n = M.ncols()
    K, free = kernel_q_free(M.realize())
    if K.ncols() == 0:
        return FMat.zeros(n, 0, M.F)
    # the realized kernel is F-stable; the even free coordinates give an F-basis
    pick = [c for c, r in enumerate(free) if r % 2 == 0]
    if 2 * len(pick) != K.ncols():
        raise AssertionError("realized kernel is not an F-space")
    return FMat.from_realized_vectors(_take_cols(K, pick), M.F)


def independent_cols_f(M):
    """Indices of the F-independent columns of M chosen greedily from the left."""
    if M.ncols() == 0:
        return []
    _, free = kernel_q_free(M.realize())
    fs = set(free)
    return [j for j in range(M.ncols()) if 2 * j not in fs]


def solve_f(M, R):
    """Particular solution X of M X = R over F, or None."""
    X = solve_q(M.realize(), R.realize_vectors())
    if X is None:
        return None
    return FMat.from_realized_vectors(X, M.F)


def rank_q(M):
    if M.nrows() == 0 or M.ncols() == 0:
        return 0
    return M.ncols() - kernel_q(M).ncols()


def rank_f(M):
    if M.nrows() == 0 or M.ncols() == 0:
        return 0
    return M.ncols() - kernel_f(M).ncols()


def rref_rows_f(G):
    """Row-reduced echelon basis of the F-row space of G (an FMat).

    Returns (R, pivots) with R an FMat whose rows are the RREF rows.
    """
    rows = G.to_rows()
    R, piv = gauss_rref(rows, G.ncols())
    if not R:
        return FMat.zeros(0, G.ncols(), G.F), []
    return FMat.from_rows(R, G.F), piv


def require_nonsingular(M):
    if M.nrows() != M.ncols() or kernel_q(M).ncols():
        raise SingularMatrix("matrix is singular")

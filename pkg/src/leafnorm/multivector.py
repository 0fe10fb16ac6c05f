"""Multivector fields and differential forms on the chart, with Cartan calculus.

Both kinds of object are stored as sparse maps from strictly increasing
generator index tuples to RatFunc coefficients.  Generator index i < p
means the i-th base direction, p <= i < p+q the (i-p)-th fiber direction
(contravariant d/dz for Multivector, covariant dz for DiffForm).

The Schouten bracket is computed through the odd-coordinate representation:
a multivector is a polynomial in odd generators z_i, and

    [u, v] = D(u, v) - (-1)^(deg u * deg v) D(v, u),
    D(u, v) = sum_i (right-derivative of u by z_i) * (d v / d z^i),

with deg = |.| - 1.  This reduces to the Lie bracket on vector fields and to
X(f) on (vector field, function), and is pinned by the invariant suite
(graded antisymmetry, Leibniz, Jacobi).
"""

from .rational import Q, RatFunc
from .errors import ContextMismatch, NonHomogeneous, WrongDegree

__all__ = [
    "Multivector", "DiffForm", "schouten", "exterior_derivative",
    "lie_derivative", "sharp", "hamiltonian", "poisson_bracket",
    "cotangent_bracket", "is_poisson", "PoissonCheck", "d_scalar",
]


def _merge_sorted(a, b):
    """Merge two strictly increasing tuples; (None, 0) when they intersect.

    Returns (merged tuple, sign) with sugar sign from sorting a+b.
    """
    out = []
    sign = 1
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        if a[i] == b[j]:
            return None, 0
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            # b[j] jumps over the remaining la - i elements of a
            if (la - i) & 1:
                sign = -sign
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out), sign


class _Graded:
    """Shared storage/arithmetic for Multivector and DiffForm."""

    __slots__ = ("context", "terms")

    def __init__(self, context, terms):
        self.context = context
        self.terms = terms

    @classmethod
    def zero(cls, context):
        return cls(context, {})

    @classmethod
    def from_terms(cls, context, items):
        """Build from (index tuple, RatFunc) pairs, normalizing order/signs."""
        out = {}
        for key, coeff in items:
            if coeff.is_zero():
                continue
            skey = tuple(sorted(key))
            if len(set(skey)) != len(skey):
                continue
            sign = _perm_sign(key)
            c = coeff if sign > 0 else -coeff
            prev = out.get(skey)
            c = c if prev is None else prev + c
            if c.is_zero():
                out.pop(skey, None)
            else:
                out[skey] = c
        return cls(context, out)

    @classmethod
    def scalar(cls, f):
        return cls(f.ctx, {(): f} if not f.is_zero() else {})

    @classmethod
    def basis(cls, context, index):
        return cls(context, {(index,): RatFunc.one(context)})

    def is_zero(self):
        return not self.terms

    def degrees(self):
        return sorted({len(k) for k in self.terms})

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree(self):
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise NonHomogeneous("mixed degrees %s" % (degs,))
        return degs[0]

    def degree_part(self, k):
        return type(self)(self.context,
                          {m: c for m, c in self.terms.items() if len(m) == k})

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v.is_zero():
                out.pop(m, None)
            else:
                out[m] = v
        return type(self)(self.context, out)

    def __neg__(self):
        return type(self)(self.context, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        if isinstance(f, (int, Q)):
            f = RatFunc.const(self.context, f)
        if f.is_zero():
            return type(self).zero(self.context)
        return type(self)(self.context,
                          {m: c * f for m, c in self.terms.items()})

    def wedge(self, other):
        self._same(other)
        items = []
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                key, sign = _merge_sorted(m1, m2)
                if key is None:
                    continue
                c = c1 * c2
                items.append((key, c if sign > 0 else -c))
        return type(self).from_terms(self.context, items)

    def __eq__(self, other):
        return (type(self) is type(other)
                and self.context == other.context
                and self.terms == other.terms)

    __hash__ = None

    def cast(self, new_ctx):
        return type(self)(new_ctx,
                          {m: c.cast(new_ctx) for m, c in self.terms.items()})

    def restrict(self, new_ctx):
        return type(self)(new_ctx,
                          {m: c.restrict(new_ctx)
                           for m, c in self.terms.items()})

    def map_coeffs(self, fn):
        out = {}
        for m, c in self.terms.items():
            v = fn(c)
            if not v.is_zero():
                out[m] = v
        return type(self)(self.context, out)

    def _same(self, other):
        if self.context != other.context:
            raise ContextMismatch("operands live on different charts")
        if type(self) is not type(other):
            raise TypeError("cannot mix %s and %s"
                            % (type(self).__name__, type(other).__name__))

    def _gen_name(self, i):
        ctx = self.context
        if i < ctx.p:
            return ctx.base[i]
        return ctx.fiber[i - ctx.p]

    def _basis_str(self, i):
        raise NotImplementedError

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda k: (len(k), k)):
            c = self.terms[m]
            wedgestr = " ^ ".join(self._basis_str(i) for i in m)
            cs = str(c)
            neg = cs.startswith("-")
            if neg:
                cs = str(-c)
            if not m:
                body = cs
            elif cs == "1":
                body = "(%s)" % wedgestr
            else:
                if "/" in cs or " " in cs:
                    cs = "(%s)" % cs
                body = "%s*(%s)" % (cs, wedgestr)
            if not parts:
                parts.append("-" + body if neg else body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    __repr__ = __str__


def _perm_sign(seq):
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class Multivector(_Graded):
    """Sparse wedge expansion over d/dx^i, d/dy^a."""

    __slots__ = ()

    def _basis_str(self, i):
        return "d/d%s" % self._gen_name(i)

    def var_index_of_gen(self, i):
        return self.context.nparams + i


class DiffForm(_Graded):
    """Sparse wedge expansion over dx^i, dy^a."""

    __slots__ = ()

    def _basis_str(self, i):
        return "dx[%s]" % self._gen_name(i)


# ---------------------------------------------------------------------------
# Schouten bracket
# ---------------------------------------------------------------------------

def _right_zeta_derivative(terms, gen):
    """Right derivative by the odd generator: move it to the last slot."""
    out = {}
    for m, c in terms.items():
        try:
            pos = m.index(gen)
        except ValueError:
            continue
        sign = 1 if ((len(m) - 1 - pos) % 2 == 0) else -1
        key = m[:pos] + m[pos + 1:]
        v = c if sign > 0 else -c
        prev = out.get(key)
        v = v if prev is None else prev + v
        if v.is_zero():
            out.pop(key, None)
        else:
            out[key] = v
    return out


def _d_half(u, v, gens):
    """D(u, v) = sum_i dR(u)/dz_i * dv/dz^i over the given generators."""
    ctx = u.context
    items = []
    for gen in gens:
        du = _right_zeta_derivative(u.terms, gen)
        if not du:
            continue
        var = ctx.vars[ctx.nparams + gen]
        for m2, c2 in v.terms.items():
            dc = c2.derivative(var)
            if dc.is_zero():
                continue
            for m1, c1 in du.items():
                key, sign = _merge_sorted(m1, m2)
                if key is None:
                    continue
                c = c1 * dc
                items.append((key, c if sign > 0 else -c))
    return Multivector.from_terms(ctx, items)


def schouten(u, v, gens=None):
    """Schouten bracket of homogeneous multivectors (deg = |.| - 1 grading).

    gens restricts the contraction to a subset of generators (used by the
    vertical bracket of the mixed-element algebra); None means all.
    """
    u._same(v)
    du = u.degree()
    dv = v.degree()
    if du is None or dv is None:
        return Multivector.zero(u.context)
    if gens is None:
        gens = range(u.context.p + u.context.q)
    a = _d_half(u, v, gens)
    b = _d_half(v, u, gens)
    sign = -1 if ((du - 1) * (dv - 1)) % 2 else 1
    return a - b.scale(Q(sign))


# ---------------------------------------------------------------------------
# Cartan calculus
# ---------------------------------------------------------------------------

def d_scalar(f):
    """Differential of a function as a 1-form (base and fiber directions)."""
    ctx = f.ctx
    items = []
    for i in range(ctx.p + ctx.q):
        df = f.derivative(ctx.vars[ctx.nparams + i])
        if not df.is_zero():
            items.append(((i,), df))
    return DiffForm.from_terms(ctx, items)


def exterior_derivative(omega):
    """Exterior derivative on the total space."""
    ctx = omega.context
    items = []
    for m, c in omega.terms.items():
        for i in range(ctx.p + ctx.q):
            dc = c.derivative(ctx.vars[ctx.nparams + i])
            if dc.is_zero():
                continue
            key, sign = _merge_sorted((i,), m)
            if key is None:
                continue
            items.append((key, dc if sign > 0 else -dc))
    return DiffForm.from_terms(ctx, items)


def interior_form(x, omega):
    """i_X omega for a degree-1 multivector X (first-slot contraction)."""
    if x.degree() not in (None, 1):
        raise WrongDegree("interior product needs a vector field")
    if x.context != omega.context:
        raise ContextMismatch("operands live on different charts")
    ctx = omega.context
    items = []
    for (i,), a in x.terms.items():
        for m, c in omega.terms.items():
            try:
                pos = m.index(i)
            except ValueError:
                continue
            sign = 1 if pos % 2 == 0 else -1
            v = a * c
            items.append((m[:pos] + m[pos + 1:], v if sign > 0 else -v))
    return DiffForm.from_terms(ctx, items)


def interior_vec(alpha, u):
    """i_alpha u for a 1-form alpha into a multivector (first slot)."""
    if alpha.degree() not in (None, 1):
        raise WrongDegree("contraction needs a 1-form")
    if alpha.context != u.context:
        raise ContextMismatch("operands live on different charts")
    items = []
    for (i,), a in alpha.terms.items():
        for m, c in u.terms.items():
            try:
                pos = m.index(i)
            except ValueError:
                continue
            sign = 1 if pos % 2 == 0 else -1
            v = a * c
            items.append((m[:pos] + m[pos + 1:], v if sign > 0 else -v))
    return Multivector.from_terms(u.context, items)


def pairing(u, omega):
    """Full contraction <u, omega> of equal-degree multivector and form."""
    if u.context != omega.context:
        raise ContextMismatch("operands live on different charts")
    total = RatFunc.zero(u.context)
    for m, c in u.terms.items():
        o = omega.terms.get(m)
        if o is not None:
            total = total + c * o
    return total


def lie_derivative(x, omega):
    """Cartan formula L_X = i_X d + d i_X on forms."""
    if x.degree() not in (None, 1):
        raise WrongDegree("lie_derivative needs a vector field")
    return interior_form(x, exterior_derivative(omega)) + \
        exterior_derivative(interior_form(x, omega))


# ---------------------------------------------------------------------------
# Poisson operations
# ---------------------------------------------------------------------------

def sharp(pi, alpha):
    """pi^#(alpha), the convention pinned by pi^#(alpha)(beta) = pi(alpha, beta)."""
    if pi.degree() not in (None, 2):
        raise WrongDegree("sharp needs a bivector")
    return interior_vec(alpha, pi)


def hamiltonian(pi, f):
    """X_f = pi^#(df)."""
    return sharp(pi, d_scalar(f))


def poisson_bracket(pi, f, g):
    """{f, g} = <pi, df ^ dg>."""
    return pairing(pi, d_scalar(f).wedge(d_scalar(g)))


def cotangent_bracket(pi, alpha, beta):
    """[alpha, beta]_pi = L_{pi#a}(beta) - L_{pi#b}(alpha) - d pi(alpha, beta)."""
    if alpha.degree() not in (None, 1) or beta.degree() not in (None, 1):
        raise WrongDegree("cotangent bracket needs 1-forms")
    xa = sharp(pi, alpha)
    xb = sharp(pi, beta)
    pab = pairing(pi, alpha.wedge(beta))
    return lie_derivative(xa, beta) - lie_derivative(xb, alpha) - d_scalar(pab)


class PoissonCheck:
    __slots__ = ("ok", "residual")

    def __init__(self, ok, residual):
        self.ok = ok
        self.residual = residual

    def __bool__(self):
        return self.ok


def is_poisson(pi):
    """Zero test of [pi, pi]; returns the exact residual alongside."""
    if pi.degree() not in (None, 2):
        raise WrongDegree("is_poisson needs a bivector")
    residual = schouten(pi, pi)
    return PoissonCheck(residual.is_zero(), residual)

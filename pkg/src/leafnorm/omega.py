"""The bigraded algebra of form-valued multivector fields on the chart.

A MixedElement stores terms  c(x,y) dx^I (x) d/dx^J ^ d/dy^K  keyed by the
triple (I, J, K) of strictly increasing index tuples: I over base covariant
directions, J over base contravariant directions, K over fiber contravariant
directions (fiber generators use the same global indexing p..p+q-1 as
Multivector).  Bidegree of a term is (|I|, |J|+|K|), Lie degree
|I|+|J|+|K|-1.

Membership:
  * the J = () terms form the form-valued vertical part (coefficients may
    depend on everything);
  * terms with J != () are only allowed with |J| = 1, K = () and a
    coefficient free of fiber variables -- these are the horizontal lifts.

The bracket dispatches on that split: vertical/vertical is the fiberwise
Schouten bracket against the wedge of form parts, horizontal acting on
vertical is the form-Lie-derivative action, horizontal/horizontal is the
Froelicher-Nijenhuis bracket of trivial lifts.  All three cases reduce to
combinatorics on index tuples plus exact coefficient calculus.
"""

from .errors import (
    ContextMismatch,
    InvalidElement,
    NotAConnection,
    NotFiberPolynomial,
    ZeroParameter,
)
from .multivector import Multivector, _merge_sorted, _perm_sign, schouten
from .rational import Poly, Q, RatFunc

__all__ = [
    "MixedElement", "OMEGA_E", "OMEGA_TILDE", "INVALID",
    "validate_membership", "ltimes_bracket", "curvature", "dilation",
    "ds_n", "jet_n", "gr_project", "is_homogeneous", "gamma_S",
    "euler_field", "p_S", "mixed_from_multivector", "mixed_from_base_form",
    "base_form_of",
]

OMEGA_E = "Omega_E"
OMEGA_TILDE = "Omega~_E"
INVALID = "invalid"


class MixedElement:
    __slots__ = ("context", "terms")

    def __init__(self, context, terms):
        self.context = context
        self.terms = terms

    # -- construction -----------------------------------------------------

    @staticmethod
    def zero(context):
        return MixedElement(context, {})

    @staticmethod
    def from_terms(context, items):
        out = {}
        for (I, J, K), coeff in items:
            if coeff.is_zero():
                continue
            sign = 1
            for block in (I, J, K):
                if len(set(block)) != len(block):
                    sign = 0
                    break
                sign *= _perm_sign(block)
            if sign == 0:
                continue
            key = (tuple(sorted(I)), tuple(sorted(J)), tuple(sorted(K)))
            c = coeff if sign > 0 else -coeff
            prev = out.get(key)
            c = c if prev is None else prev + c
            if c.is_zero():
                out.pop(key, None)
            else:
                out[key] = c
        return MixedElement(context, out)

    @staticmethod
    def scalar(f):
        if f.is_zero():
            return MixedElement(f.ctx, {})
        return MixedElement(f.ctx, {((), (), ()): f})

    # -- queries -----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def bidegrees(self):
        return sorted({(len(I), len(J) + len(K)) for (I, J, K) in self.terms})

    def bidegree_part(self, p, q):
        return MixedElement(self.context, {
            k: c for k, c in self.terms.items()
            if len(k[0]) == p and len(k[1]) + len(k[2]) == q})

    def horizontal_part(self):
        return MixedElement(self.context,
                            {k: c for k, c in self.terms.items() if k[1]})

    def vertical_part(self):
        return MixedElement(self.context,
                            {k: c for k, c in self.terms.items() if not k[1]})

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            v = c if v is None else v + c
            if v.is_zero():
                out.pop(k, None)
            else:
                out[k] = v
        return MixedElement(self.context, out)

    def __neg__(self):
        return MixedElement(self.context,
                            {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        if isinstance(f, (int, Q)):
            f = RatFunc.const(self.context, f)
        if f.is_zero():
            return MixedElement.zero(self.context)
        return MixedElement(self.context,
                            {k: c * f for k, c in self.terms.items()})

    def __eq__(self, other):
        return (isinstance(other, MixedElement)
                and self.context == other.context
                and self.terms == other.terms)

    __hash__ = None

    def map_coeffs(self, fn):
        out = {}
        for k, c in self.terms.items():
            v = fn(c)
            if not v.is_zero():
                out[k] = v
        return MixedElement(self.context, out)

    def cast(self, new_ctx):
        return MixedElement(new_ctx, {k: c.cast(new_ctx)
                                      for k, c in self.terms.items()})

    def restrict(self, new_ctx):
        return MixedElement(new_ctx, {k: c.restrict(new_ctx)
                                      for k, c in self.terms.items()})

    def substitute(self, mapping):
        return self.map_coeffs(lambda c: c.substitute(mapping))

    def _same(self, other):
        if not isinstance(other, MixedElement):
            raise TypeError("expected MixedElement")
        if self.context != other.context:
            raise ContextMismatch("operands live on different charts")

    # -- printing -----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        ctx = self.context
        parts = []
        for key in sorted(self.terms,
                          key=lambda k: (len(k[0]) + len(k[1]) + len(k[2]), k)):
            I, J, K = key
            c = self.terms[key]
            factors = ["dx[%s]" % ctx.base[i] for i in I]
            factors += ["d/d%s" % ctx.base[j] for j in J]
            factors += ["d/d%s" % ctx.fiber[k - ctx.p] for k in K]
            wedgestr = " ^ ".join(factors)
            cs = str(c)
            neg = cs.startswith("-")
            if neg:
                cs = str(-c)
            if not factors:
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


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------

def validate_membership(e):
    """Classify as OMEGA_E, OMEGA_TILDE or INVALID per the term constraints."""
    tilde = False
    for (I, J, K), c in e.terms.items():
        if not J:
            continue
        tilde = True
        if len(J) != 1 or K:
            return INVALID
        if c.depends_on_fiber():
            return INVALID
    return OMEGA_TILDE if tilde else OMEGA_E


def _require_tilde(e):
    m = validate_membership(e)
    if m == INVALID:
        raise InvalidElement("element is not in the extended bigraded algebra")
    return m


# ---------------------------------------------------------------------------
# the ltimes bracket
# ---------------------------------------------------------------------------

def _base_var(ctx, j):
    return ctx.vars[ctx.nparams + j]


def _lie_fn(ctx, a, I1, j, c, I2):
    """L_{a dx^I1 (x) d/dx_j} (c dx^I2) as a list of (form tuple, coeff).

    The Froelicher-Nijenhuis Lie derivative of a form along a trivial lift:
    a * (dc/dx_j) dx^I1^I2 + (-1)^|I1| (da ^ dx^I1) ^ i_{d/dx_j}(dx^I2) * c.
    """
    out = []
    dc = c.derivative(_base_var(ctx, j))
    if not dc.is_zero():
        key, s = _merge_sorted(I1, I2)
        if key is not None:
            v = a * dc
            out.append((key, v if s > 0 else -v))
    try:
        pos = I2.index(j)
    except ValueError:
        return out
    sign2 = 1 if pos % 2 == 0 else -1
    I2c = I2[:pos] + I2[pos + 1:]
    sign0 = 1 if len(I1) % 2 == 0 else -1
    for m in range(ctx.p):
        da = a.derivative(_base_var(ctx, m))
        if da.is_zero():
            continue
        f1, s1 = _merge_sorted((m,), I1)
        if f1 is None:
            continue
        key, s3 = _merge_sorted(f1, I2c)
        if key is None:
            continue
        v = da * c
        s = sign0 * s1 * sign2 * s3
        out.append((key, v if s > 0 else -v))
    return out


def _vv_pair(ctx, t1, c1, t2, c2, items):
    I1, _, K1 = t1
    I2, _, K2 = t2
    form, fsign = _merge_sorted(I1, I2)
    if form is None:
        return
    u = Multivector(ctx, {K1: c1})
    v = Multivector(ctx, {K2: c2})
    sv = schouten(u, v, gens=range(ctx.p, ctx.p + ctx.q))
    if sv.is_zero():
        return
    s0 = 1 if (len(I2) * (len(K1) - 1)) % 2 == 0 else -1
    s = s0 * fsign
    for km, cm in sv.terms.items():
        items.append(((form, (), km), cm if s > 0 else -cm))


def _hv_pair(ctx, t1, c1, t2, c2, items):
    I1, J1, _ = t1
    I2, _, K2 = t2
    j = J1[0]
    for key, coeff in _lie_fn(ctx, c1, I1, j, c2, I2):
        items.append(((key, (), K2), coeff))


def _hh_pair(ctx, t1, c1, t2, c2, items):
    I1, J1, _ = t1
    I2, J2, _ = t2
    i, j = J1[0], J2[0]
    r, s = len(I1), len(I2)
    for key, coeff in _lie_fn(ctx, c1, I1, i, c2, I2):
        items.append(((key, (j,), ()), coeff))
    sgn = -1 if (r * s) % 2 == 0 else 1
    # -(-1)^{rs} L_{beta (x) Y}(alpha) (x) X
    for key, coeff in _lie_fn(ctx, c2, I2, j, c1, I1):
        items.append(((key, (i,), ()), coeff if sgn > 0 else -coeff))


def ltimes_bracket(u, v):
    """The graded bracket of the extended algebra.

    Operands may hold several bidegrees (a Dirac element does); each pair of
    bidegree-homogeneous terms is bracketed with its own signs.
    """
    u._same(v)
    _require_tilde(u)
    _require_tilde(v)
    ctx = u.context
    items = []
    for (t1, c1) in u.terms.items():
        deg1 = len(t1[0]) + len(t1[1]) + len(t1[2]) - 1
        for (t2, c2) in v.terms.items():
            if t1[1] and t2[1]:
                _hh_pair(ctx, t1, c1, t2, c2, items)
            elif t1[1]:
                _hv_pair(ctx, t1, c1, t2, c2, items)
            elif t2[1]:
                deg2 = len(t2[0]) + len(t2[1]) + len(t2[2]) - 1
                flip = []
                _hv_pair(ctx, t2, c2, t1, c1, flip)
                s = -1 if (deg1 * deg2) % 2 == 0 else 1
                for key, coeff in flip:
                    items.append((key, coeff if s > 0 else -coeff))
            else:
                _vv_pair(ctx, t1, c1, t2, c2, items)
    return MixedElement.from_terms(ctx, items)


# ---------------------------------------------------------------------------
# distinguished elements and projections
# ---------------------------------------------------------------------------

def gamma_S(ctx):
    """The identity element dx^i (x) d/dx^i; represents the DeRham d."""
    one = RatFunc.one(ctx)
    return MixedElement(ctx, {((i,), (i,), ()): one for i in range(ctx.p)})


def euler_field(ctx):
    """The fiberwise Euler vector field sum_a y_a d/dy_a."""
    items = []
    for a in range(ctx.q):
        items.append((((), (), (ctx.p + a,)),
                      RatFunc.var(ctx, ctx.fiber[a])))
    return MixedElement.from_terms(ctx, items)


def p_S(u):
    """Projection to the base: the horizontal lift terms only."""
    return u.horizontal_part()


def mixed_from_multivector(mv):
    """Raw repackaging of a multivector as a form-degree-zero element."""
    ctx = mv.context
    out = {}
    for key, c in mv.terms.items():
        J = tuple(i for i in key if i < ctx.p)
        K = tuple(i for i in key if i >= ctx.p)
        # key is globally sorted with base generators first: no sign
        out[((), J, K)] = c
    return MixedElement(ctx, out)


def mixed_from_base_form(omega):
    """A base differential form as a (p, 0) element."""
    ctx = omega.context
    out = {}
    for key, c in omega.terms.items():
        if any(i >= ctx.p for i in key):
            raise InvalidElement("form has fiber covariant directions")
        out[(key, (), ())] = c
    return MixedElement(ctx, out)


def base_form_of(e):
    """Inverse of mixed_from_base_form on pure (p, 0) elements."""
    from .multivector import DiffForm
    out = {}
    for (I, J, K), c in e.terms.items():
        if J or K:
            raise InvalidElement("element has contravariant directions")
        out[I] = c
    return DiffForm(e.context, out)


def curvature(gamma):
    """R = (1/2)[Gamma, Gamma] for an Ehresmann connection element."""
    if gamma.horizontal_part() != gamma_S(gamma.context):
        raise NotAConnection("projection to the base is not the identity")
    return ltimes_bracket(gamma, gamma).scale(Q(1, 2))


# ---------------------------------------------------------------------------
# dilation, derivatives along S, jets, grading
# ---------------------------------------------------------------------------

def dilation(u, t):
    """phi_t: per term t^(|J|-1) c(x, t y) dx^I (x) d/dx^J ^ d/dy^K."""
    ctx = u.context
    if isinstance(t, (int, Q)):
        t = RatFunc.const(ctx, t)
    if t.is_zero():
        raise ZeroParameter("dilation parameter must be nonzero")
    if t.ctx != ctx:
        raise ContextMismatch("parameter lives on a different chart")
    tname = _plain_var_name(t)
    items = []
    for (I, J, K), c in u.terms.items():
        if tname is not None:
            c2 = c.scale_fiber_by_var(tname)
        else:
            mapping = {name: t * RatFunc.var(ctx, name) for name in ctx.fiber}
            c2 = c.substitute(mapping)
        e = len(J) - 1
        if e:
            c2 = c2 * t ** e
        items.append(((I, J, K), c2))
    return MixedElement.from_terms(ctx, items)


def _plain_var_name(t):
    if len(t.num.terms) == 1 and t.den.is_const() and t.den.const_value() == 1:
        (mono, c), = t.num.terms.items()
        if c == 1 and sum(mono) == 1:
            return t.ctx.vars[mono.index(1)]
    return None


def ds_n(u, n):
    """The degree-n derivative along S: per term, the fiber-homogeneous
    part of degree n - |J| of the coefficient."""
    if n < 0:
        raise ValueError("derivative order must be >= 0")
    out = []
    for (I, J, K), c in u.terms.items():
        d = n - len(J)
        if d < 0:
            continue
        part = c.fiber_homogeneous_part(d)
        if not part.is_zero():
            out.append((((I, J, K)), part))
    return MixedElement.from_terms(u.context, out)


def jet_n(u, n):
    """j^n = sum of the derivatives of orders 0..n along S."""
    total = MixedElement.zero(u.context)
    for k in range(n + 1):
        total = total + ds_n(u, k)
    return total


def gr_project(u, l):
    """Projection on the homogeneity-l part of a fiber-polynomial element."""
    for _, c in u.terms.items():
        if not c.is_fiber_polynomial():
            raise NotFiberPolynomial(
                "grading projection needs fiber-polynomial coefficients")
    return ds_n(u, l)


def is_homogeneous(u, l):
    return gr_project(u, l) == u

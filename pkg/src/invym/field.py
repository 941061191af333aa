"""Exact scalars: rationals and rational functions in named parameters.

A scalar is either a :class:`fractions.Fraction` (the rational variant) or a
:class:`RatFunc`, a quotient of sparse multivariate polynomials with integer
coefficients.  Arithmetic between the two variants is transparent and any
result that turns out to be parameter-free collapses back to a ``Fraction``.

Quotients are reduced by integer and monomial content, and by a polynomial
GCD when the denominator is short and both have several terms.  Zero testing never
needs the GCD: a quotient is zero iff its numerator is the zero polynomial.
"""

from __future__ import annotations

import ast
import math
from fractions import Fraction
from typing import Mapping, Union

__all__ = [
    "RatFunc",
    "Scalar",
    "FieldError",
    "scalar",
    "parse",
    "var",
    "is_zero",
    "evaluate",
    "subs",
    "diff",
    "variables",
    "to_text",
    "ZERO",
    "ONE",
]

# Variables listed here come first in the monomial order, in this order.  Any
# other name sorts after them alphabetically.
PARAMETER_ORDER = (
    "a", "b", "c", "d",
    "x1", "x2", "x3", "x4",
    "alpha", "eps",
)
_RANK = {name: i for i, name in enumerate(PARAMETER_ORDER)}

# Polynomial GCDs are only attempted for short denominators and moderate
# numerators; other quotients keep common factors (equality never depends on it).
_GCD_MAX_DEN_TERMS = 4
_GCD_MAX_NUM_TERMS = 40

ZERO = Fraction(0)
ONE = Fraction(1)


class FieldError(ValueError):
    """Bad scalar text, a missing parameter, or a non-rational result."""


def _rank(name: str):
    return (_RANK.get(name, len(_RANK)), name)


# ---------------------------------------------------------------------------
# sparse polynomials: dict {monomial: int}, monomial = tuple of (name, exp)
# sorted by _rank(name)
# ---------------------------------------------------------------------------

def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    while i < len(m1) and j < len(m2):
        v1, e1 = m1[i]
        v2, e2 = m2[j]
        if v1 == v2:
            out.append((v1, e1 + e2))
            i += 1
            j += 1
        elif _rank(v1) < _rank(v2):
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def _mono_key(m):
    """Graded-lexicographic sort key."""
    deg = sum(e for _, e in m)
    return (deg, tuple((-_rank(v)[0], _neg_name(v), e) for v, e in m))


def _neg_name(name):
    # ties in rank only happen for names outside PARAMETER_ORDER; earlier names
    # must compare larger
    return tuple(-ord(ch) for ch in name)


def _padd(p, q, sign=1):
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, 0) + sign * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _pmul(p, q):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = _mono_mul(m1, m2)
            v = out.get(m, 0) + c1 * c2
            if v:
                out[m] = v
            else:
                del out[m]
    return out


def _pscale(p, k):
    if k == 0:
        return {}
    return {m: c * k for m, c in p.items()}


def _lead(p):
    m = max(p, key=_mono_key)
    return m, p[m]


def _const(p):
    """Return the integer value of a constant polynomial, else None."""
    if not p:
        return 0
    if len(p) == 1 and () in p:
        return p[()]
    return None


def _monomial_content(p, q):
    """Largest monomial dividing every term of p and q."""
    common = None
    for poly in (p, q):
        for m in poly:
            exps = dict(m)
            if common is None:
                common = exps
            else:
                common = {v: min(e, exps[v]) for v, e in common.items() if v in exps}
            if not common:
                return {}
    return common or {}


def _mono_div(m, content):
    out = []
    for v, e in m:
        e2 = e - content.get(v, 0)
        if e2:
            out.append((v, e2))
    return tuple(out)


def _ptext(p):
    if not p:
        return "0"
    parts = []
    for m in sorted(p, key=_mono_key, reverse=True):
        c = p[m]
        mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


# ---------------------------------------------------------------------------
# polynomial gcd (recursive primitive remainder sequences)
# ---------------------------------------------------------------------------

def _main_var(p, q):
    """Variable of lowest degree (shortest remainder sequence); ties by order."""
    deg = {}
    for poly in (p, q):
        for m in poly:
            for v, e in m:
                deg[v] = max(deg.get(v, 0), e)
    return min(deg, key=lambda v: (deg[v], _rank(v))) if deg else None


def _split(p, v):
    """p as {exponent of v: coefficient polynomial in the other variables}."""
    out = {}
    for m, c in p.items():
        e = 0
        rest = []
        for name, k in m:
            if name == v:
                e = k
            else:
                rest.append((name, k))
        out.setdefault(e, {})[tuple(rest)] = c
    return out


def _join(parts, v):
    out = {}
    for e, coeff in parts.items():
        vm = ((v, e),) if e else ()
        for m, c in coeff.items():
            out[_mono_mul(m, vm)] = c
    return out


def _int_content(p):
    g = 0
    for c in p.values():
        g = math.gcd(g, c)
    return g


def _pdivexact(p, q):
    """p / q when q divides p exactly, else None."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    lm_q, lc_q = _lead(q)
    quo = {}
    p = dict(p)
    while p:
        lm_p, lc_p = _lead(p)
        if lc_p % lc_q:
            return None
        exps = dict(lm_p)
        for v, e in lm_q:
            if exps.get(v, 0) < e:
                return None
            exps[v] -= e
        m = tuple(sorted(((v, e) for v, e in exps.items() if e), key=lambda t: _rank(t[0])))
        c = lc_p // lc_q
        quo[m] = quo.get(m, 0) + c
        p = _padd(p, _pmul({m: c}, q), -1)
    return quo


def _pgcd(p, q):
    """GCD of two integer polynomials, up to sign."""
    if not p:
        return q
    if not q:
        return p
    mp, mq = _monomial_content(p, {}), _monomial_content(q, {})
    common = {v: min(e, mq[v]) for v, e in mp.items() if v in mq}
    mono = tuple(sorted(common.items(), key=lambda t: _rank(t[0])))
    if mp:
        p = {_mono_div(m, mp): c for m, c in p.items()}
    if mq:
        q = {_mono_div(m, mq): c for m, c in q.items()}
    if len(p) == 1 or len(q) == 1:
        return {mono: math.gcd(_int_content(p), _int_content(q))}
    return _pmul({mono: 1}, _pgcd_primitive(p, q))


def _pgcd_primitive(p, q):
    v = _main_var(p, q)
    if v is None:
        return {(): math.gcd(p[()], q[()])}
    P, Q = _split(p, v), _split(q, v)
    cp, cq = _coeff_gcd(P), _coeff_gcd(Q)
    cont = _pgcd(cp, cq)
    A = {e: _pdivexact(c, cp) for e, c in P.items()}
    B = {e: _pdivexact(c, cq) for e, c in Q.items()}
    if max(A) < max(B):
        A, B = B, A
    while B and max(B) > 0:
        R = _prem(A, B)
        A, B = B, R
        if B:
            cb = _coeff_gcd(B)
            B = {e: _pdivexact(c, cb) for e, c in B.items()}
    if B:  # a nonzero constant in v: primitive parts are coprime
        return cont
    g = _join(A, v)
    cg = _int_content(g)
    g = {m: c // cg for m, c in g.items()}
    return _pmul(cont, g)


def _coeff_gcd(parts):
    g = {}
    for c in parts.values():
        g = _pgcd(g, c)
        if _const(g) is not None and g:
            # constant so far: only the integer content can still shrink it
            n = 0
            for coeff in parts.values():
                n = math.gcd(n, _int_content(coeff))
            return {(): n}
    return g


def _prem(A, B):
    """Pseudo-remainder of A by B as polynomials in the main variable."""
    dB = max(B)
    lcB = B[dB]
    A = dict(A)
    while A and max(A) >= dB:
        dA = max(A)
        lcA = A[dA]
        shift = dA - dB
        out = {}
        for e, c in A.items():
            out[e] = _pmul(c, lcB)
        for e, c in B.items():
            t = _pmul(c, lcA)
            cur = _padd(out.get(e + shift, {}), t, -1)
            out[e + shift] = cur
        A = {e: c for e, c in out.items() if c}
    return A


class RatFunc:
    """Quotient of integer-coefficient polynomials, in canonical form.

    Instances are never built directly; use :func:`scalar`, :func:`var` or
    :func:`parse`.  The constructor-side canonicalisation guarantees the
    numerator is nonzero and at least one parameter survives.
    """

    __slots__ = ("num", "den")
    __hash__ = None  # equality is cross-multiplication, no canonical hash

    def __init__(self, num, den):
        self.num = num
        self.den = den

    # -- construction -----------------------------------------------------
    @staticmethod
    def make(num, den) -> Scalar:
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            return ZERO
        content = _monomial_content(num, den)
        if content:
            num = {_mono_div(m, content): c for m, c in num.items()}
            den = {_mono_div(m, content): c for m, c in den.items()}
        if 1 < len(den) <= _GCD_MAX_DEN_TERMS and 1 < len(num) <= _GCD_MAX_NUM_TERMS:
            common = _pgcd(num, den)
            if _const(common) is None:
                num, den = _pdivexact(num, common), _pdivexact(den, common)
        g = 0
        for c in num.values():
            g = math.gcd(g, c)
        for c in den.values():
            g = math.gcd(g, c)
        _, lc = _lead(den)
        if lc < 0:
            g = -g
        if g != 1:
            num = {m: c // g for m, c in num.items()}
            den = {m: c // g for m, c in den.items()}
        cn, cd = _const(num), _const(den)
        if cn is not None and cd is not None:
            return Fraction(cn, cd)
        if len(num) == len(den):
            ratio = _proportional(num, den)
            if ratio is not None:
                return ratio
        return RatFunc(num, den)

    @staticmethod
    def lift(x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, int):
            x = Fraction(x)
        if isinstance(x, Fraction):
            num = {(): x.numerator} if x.numerator else {}
            return RatFunc(num, {(): x.denominator})
        raise TypeError(f"not an exact scalar: {x!r}")

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, (RatFunc, Fraction, int)):
            return NotImplemented
        o = RatFunc.lift(other)
        if self.den == o.den:
            return RatFunc.make(_padd(self.num, o.num), self.den)
        num = _padd(_pmul(self.num, o.den), _pmul(o.num, self.den))
        return RatFunc.make(num, _pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc({m: -c for m, c in self.num.items()}, self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, (RatFunc, Fraction, int)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if not isinstance(other, (RatFunc, Fraction, int)):
            return NotImplemented
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, (RatFunc, Fraction, int)):
            return NotImplemented
        o = RatFunc.lift(other)
        return RatFunc.make(_pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (RatFunc, Fraction, int)):
            return NotImplemented
        if is_zero(other):
            raise ZeroDivisionError("division by the zero scalar")
        o = RatFunc.lift(other)
        return RatFunc.make(_pmul(self.num, o.den), _pmul(self.den, o.num))

    def __rtruediv__(self, other):
        if not isinstance(other, (RatFunc, Fraction, int)):
            return NotImplemented
        return RatFunc.lift(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return ONE / (self ** (-k))
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, (RatFunc, Fraction, int)):
            return NotImplemented
        o = RatFunc.lift(other)
        return _padd(_pmul(self.num, o.den), _pmul(o.num, self.den), -1) == {}

    def __bool__(self):
        return True  # canonical RatFunc is never zero

    def __repr__(self):
        return f"RatFunc({to_text(self)!r})"

    def __str__(self):
        return to_text(self)


def _proportional(num, den):
    """Return num/den as a Fraction when the two are scalar multiples."""
    ratio = None
    for m, c in num.items():
        d = den.get(m)
        if d is None:
            return None
        r = Fraction(c, d)
        if ratio is None:
            ratio = r
        elif r != ratio:
            return None
    return ratio


Scalar = Union[Fraction, RatFunc]


# ---------------------------------------------------------------------------
# public helpers
# ---------------------------------------------------------------------------

def var(name: str) -> RatFunc:
    if not name.isidentifier():
        raise FieldError(f"invalid parameter name {name!r}")
    return RatFunc({((name, 1),): 1}, {(): 1})


def scalar(x) -> Scalar:
    """Coerce ints, Fractions, scalar text or RatFuncs to a canonical scalar."""
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse(x)
    raise TypeError(f"cannot make a scalar from {x!r}")


def is_zero(x) -> bool:
    if isinstance(x, RatFunc):
        return False
    return x == 0


_BINOPS = {
    ast.Add: lambda p, q: p + q,
    ast.Sub: lambda p, q: p - q,
    ast.Mult: lambda p, q: p * q,
    ast.Div: lambda p, q: _div(p, q),
}


def _div(p, q):
    if is_zero(q):
        raise ZeroDivisionError("division by zero in scalar text")
    if isinstance(p, Fraction) and isinstance(q, Fraction):
        return p / q
    return RatFunc.lift(p) / q


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Fraction(node.value)
    if isinstance(node, ast.Name):
        return var(node.id)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            base = _eval_node(node.left)
            exp = _eval_node(node.right)
            if not (isinstance(exp, Fraction) and exp.denominator == 1):
                raise FieldError("exponents must be integer literals")
            if exp < 0 and is_zero(base):
                raise ZeroDivisionError("zero to a negative power")
            return base ** int(exp)
        op = _BINOPS.get(type(node.op))
        if op is not None:
            return op(_eval_node(node.left), _eval_node(node.right))
    raise FieldError(f"unsupported syntax in scalar text: {ast.dump(node)}")


def parse(text: str) -> Scalar:
    """Parse scalar text such as ``-3/a`` or ``a^3*(a+2*d)``."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise FieldError(f"cannot parse scalar {text!r}") from exc
    return _eval_node(tree)


def to_text(x) -> str:
    """Canonical text; ``parse(to_text(x)) == x``."""
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return str(x)
    num, den = x.num, x.den
    cd = _const(den)
    if cd == 1:
        return _ptext(num)
    ntext = _ptext(num)
    if len(num) != 1:
        ntext = f"({ntext})"
    dtext = _ptext(den)
    if not _bare_divisor(den):
        dtext = f"({dtext})"
    return f"{ntext}/{dtext}"


def _bare_divisor(den):
    """True when the denominator text needs no parentheses after '/'."""
    if len(den) != 1:
        return False
    (m, c), = den.items()
    return not m or (c == 1 and len(m) == 1)


def variables(x) -> set:
    if not isinstance(x, RatFunc):
        return set()
    out = set()
    for poly in (x.num, x.den):
        for m in poly:
            out.update(v for v, _ in m)
    return out


def _peval(p, values):
    total = Fraction(0)
    for m, c in p.items():
        term = Fraction(c)
        for v, e in m:
            term *= values[v] ** e
        total += term
    return total


def evaluate(x, assignment: Mapping[str, object]) -> Fraction:
    """Substitute rational values for every parameter of ``x``."""
    if not isinstance(x, RatFunc):
        return Fraction(x)
    missing = variables(x) - set(assignment)
    if missing:
        raise FieldError(f"missing parameter(s) {sorted(missing)}")
    values = {v: Fraction(assignment[v]) for v in variables(x)}
    den = _peval(x.den, values)
    if den == 0:
        raise ZeroDivisionError(f"denominator vanishes at {values}")
    return _peval(x.num, values) / den


def _psubs(p, mapping):
    total = ZERO
    for m, c in p.items():
        term = Fraction(c)
        for v, e in m:
            base = mapping[v] if v in mapping else var(v)
            term = term * base ** e
        total = total + term
    return total


def subs(x, mapping: Mapping[str, object]) -> Scalar:
    """Substitute scalars (possibly symbolic) for some parameters."""
    if not isinstance(x, RatFunc):
        return x
    mapping = {k: scalar(v) for k, v in mapping.items()}
    den = _psubs(x.den, mapping)
    if is_zero(den):
        raise ZeroDivisionError("denominator vanishes under substitution")
    num = _psubs(x.num, mapping)
    if isinstance(num, Fraction) and isinstance(den, Fraction):
        return num / den
    return RatFunc.lift(num) / den


def _pdiff(p, name):
    out = {}
    for m, c in p.items():
        for i, (v, e) in enumerate(m):
            if v == name:
                rest = list(m)
                if e == 1:
                    del rest[i]
                else:
                    rest[i] = (v, e - 1)
                key = tuple(rest)
                val = out.get(key, 0) + c * e
                if val:
                    out[key] = val
                else:
                    out.pop(key, None)
    return out


def diff(x, name: str) -> Scalar:
    """Partial derivative with respect to parameter ``name``."""
    if not isinstance(x, RatFunc):
        return ZERO
    p, q = x.num, x.den
    num = _padd(_pmul(_pdiff(p, name), q), _pmul(p, _pdiff(q, name)), -1)
    return RatFunc.make(num, _pmul(q, q))

"""Expression language for admissible weight sequences.

A sequence expression denotes a positive sequence (w_j)_{j>=0} built from a
small set of atoms:

    2^(s*j)                  geometric growth, rate s (exact rational)
    (1+j)^b                  power of the index shift
    (1+log(1+j))^b           iterated logarithm, base-2 logs throughout
    exp(a*log(1+j)^kappa)    slowly varying factor, 0 < kappa < 1
    pw2(s0=...,s1=...)       oscillating construction on dyadic blocks
    table[v0,...] then e     finitely many explicit values, then e
    numbers, products, quotients, rational powers

All exponents are kept as exact `fractions.Fraction` values and evaluation
works in log2 space, so membership and index computations downstream never
leave exact arithmetic unless an atom forces a float.

`pw2(s0,s1)` is the block construction with anchors j_l = 2^l: at even
anchors the value is 2^(j*(2*s1+s0)/3), the exponent then grows with slope
s0 until the next anchor, where it equals 2^(j*(s1+2*s0)/3) and continues
with slope s1.  Its upper and lower asymptotic rates are s1 and s0.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

__all__ = [
    "SequenceExpr",
    "Geometric",
    "LogPower",
    "IterLog",
    "ExpLogPow",
    "PiecewiseGeometric",
    "Table",
    "Product",
    "Power",
    "Const",
    "SequenceProfile",
    "SequenceError",
    "ParseError",
    "PositivityError",
    "DepthError",
    "EvalOverflow",
    "product",
    "power",
    "geometric",
    "log_power",
    "iter_log",
    "exp_log_pow",
    "pw2",
    "table",
    "const",
    "parse",
    "render",
    "evaluate",
    "log2_value",
    "function_log2",
    "function_value",
    "strip_tables",
    "canonicalize",
    "decompose",
    "Decomposition",
]

MAX_DEPTH = 32

# log2 magnitudes beyond this cannot be exponentiated into a float
_LOG2_FLOAT_LIMIT = 1000.0

_LOG2_E = 1.0 / math.log(2.0)


class SequenceError(Exception):
    """Base class for expression-level failures."""


class ParseError(SequenceError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class PositivityError(SequenceError):
    pass


class DepthError(SequenceError):
    pass


class EvalOverflow(SequenceError):
    """Raised when a value cannot be represented as a finite positive float.

    `scale` is +1 when the true value overflows toward +infinity and -1
    when it underflows toward 0; the log2 of the value remains available.
    """

    def __init__(self, scale: int, log2: Union[Fraction, float]):
        side = "+inf" if scale > 0 else "0"
        super().__init__(f"value out of float range (toward {side}, log2={float(log2):.6g})")
        self.scale = scale
        self.log2 = log2


Rational = Fraction


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected exact rational, got {type(x).__name__}")


def _fmt_rat(x: Fraction) -> str:
    return str(x)


@dataclass(frozen=True)
class SequenceExpr:
    def depth(self) -> int:
        return 1

    def __mul__(self, other: "SequenceExpr") -> "SequenceExpr":
        return product(self, other)

    def __pow__(self, r) -> "SequenceExpr":
        return power(self, _as_fraction(r))


@dataclass(frozen=True)
class Geometric(SequenceExpr):
    rate: Fraction

    def __post_init__(self):
        object.__setattr__(self, "rate", _as_fraction(self.rate))


@dataclass(frozen=True)
class LogPower(SequenceExpr):
    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "exponent", _as_fraction(self.exponent))


@dataclass(frozen=True)
class IterLog(SequenceExpr):
    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "exponent", _as_fraction(self.exponent))


@dataclass(frozen=True)
class ExpLogPow(SequenceExpr):
    coeff: Fraction
    kappa: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeff", _as_fraction(self.coeff))
        object.__setattr__(self, "kappa", _as_fraction(self.kappa))
        if not (0 < self.kappa < 1):
            raise SequenceError("exp-log exponent kappa must lie in (0,1)")
        if self.coeff == 0:
            raise SequenceError("exp-log coefficient must be nonzero; use 1 instead")


@dataclass(frozen=True)
class PiecewiseGeometric(SequenceExpr):
    s0: Fraction
    s1: Fraction

    def __post_init__(self):
        object.__setattr__(self, "s0", _as_fraction(self.s0))
        object.__setattr__(self, "s1", _as_fraction(self.s1))
        if not (0 <= self.s0 < self.s1):
            raise SequenceError("pw2 requires 0 <= s0 < s1")


@dataclass(frozen=True)
class Table(SequenceExpr):
    prefix: tuple
    continuation: SequenceExpr

    def __post_init__(self):
        pref = tuple(Fraction(v) if not isinstance(v, Fraction) else v for v in self.prefix)
        if not pref:
            raise SequenceError("table prefix must be nonempty")
        for v in pref:
            if not v > 0:
                raise PositivityError(f"table entry {v} is not positive")
        object.__setattr__(self, "prefix", pref)
        if self.depth() > MAX_DEPTH:
            raise DepthError("expression nesting exceeds limit")

    def depth(self) -> int:
        return 1 + self.continuation.depth()


@dataclass(frozen=True)
class Product(SequenceExpr):
    factors: tuple

    def depth(self) -> int:
        return 1 + max(f.depth() for f in self.factors)


@dataclass(frozen=True)
class Power(SequenceExpr):
    base: SequenceExpr
    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "exponent", _as_fraction(self.exponent))

    def depth(self) -> int:
        return 1 + self.base.depth()


@dataclass(frozen=True)
class Const(SequenceExpr):
    value: Fraction

    def __post_init__(self):
        v = self.value if isinstance(self.value, Fraction) else Fraction(self.value)
        if not v > 0:
            raise PositivityError(f"constant {v} is not positive")
        object.__setattr__(self, "value", v)


# ---------------------------------------------------------------------------
# normalizing constructors
#
# Building through these keeps every expression in a canonical product form:
# like atoms merged, constants folded, rational powers pushed onto atoms.
# The parser and all internal builders use them, which is what makes the
# parse/render round trip exact.

def geometric(rate) -> SequenceExpr:
    rate = _as_fraction(rate)
    if rate == 0:
        return Const(1)
    return Geometric(rate)


def log_power(exponent) -> SequenceExpr:
    exponent = _as_fraction(exponent)
    if exponent == 0:
        return Const(1)
    return LogPower(exponent)


def iter_log(exponent) -> SequenceExpr:
    exponent = _as_fraction(exponent)
    if exponent == 0:
        return Const(1)
    return IterLog(exponent)


def exp_log_pow(coeff, kappa) -> SequenceExpr:
    coeff = _as_fraction(coeff)
    if coeff == 0:
        return Const(1)
    return ExpLogPow(coeff, _as_fraction(kappa))


def pw2(s0, s1) -> SequenceExpr:
    return PiecewiseGeometric(_as_fraction(s0), _as_fraction(s1))


def table(prefix, continuation: SequenceExpr) -> SequenceExpr:
    return Table(tuple(prefix), continuation)


def const(value) -> SequenceExpr:
    if isinstance(value, float):
        value = Fraction(value)
    return Const(_as_fraction(value))


def power(base: SequenceExpr, exponent) -> SequenceExpr:
    r = _as_fraction(exponent)
    if r == 0:
        return Const(1)
    if r == 1:
        return base
    if isinstance(base, Const):
        if r.denominator == 1:
            return Const(base.value ** r.numerator)
        return Power(base, r)
    if isinstance(base, Geometric):
        return geometric(base.rate * r)
    if isinstance(base, LogPower):
        return log_power(base.exponent * r)
    if isinstance(base, IterLog):
        return iter_log(base.exponent * r)
    if isinstance(base, ExpLogPow):
        return exp_log_pow(base.coeff * r, base.kappa)
    if isinstance(base, Product):
        return product(*(power(f, r) for f in base.factors))
    if isinstance(base, Power):
        return power(base.base, base.exponent * r)
    node = Power(base, r)
    if node.depth() > MAX_DEPTH:
        raise DepthError("expression nesting exceeds limit")
    return node


def product(*xs: SequenceExpr) -> SequenceExpr:
    const_acc = Fraction(1)
    const_pow: list = []  # irrational constant powers like 2^(1/2)
    geo = Fraction(0)
    logp = Fraction(0)
    iterl = Fraction(0)
    explog: dict = {}
    opaque: list = []  # (base, exponent) for pw2 / table / other power bases

    def absorb(e: SequenceExpr, outer: Fraction):
        nonlocal const_acc, geo, logp, iterl
        if isinstance(e, Product):
            for f in e.factors:
                absorb(f, outer)
        elif isinstance(e, Power):
            absorb(e.base, outer * e.exponent)
        elif isinstance(e, Const):
            if outer.denominator == 1:
                const_acc *= e.value ** outer.numerator
            else:
                const_pow.append((e, outer))
        elif isinstance(e, Geometric):
            geo += e.rate * outer
        elif isinstance(e, LogPower):
            logp += e.exponent * outer
        elif isinstance(e, IterLog):
            iterl += e.exponent * outer
        elif isinstance(e, ExpLogPow):
            explog[e.kappa] = explog.get(e.kappa, Fraction(0)) + e.coeff * outer
        else:
            opaque.append((e, outer))

    for x in xs:
        absorb(x, Fraction(1))

    # cancel repeated opaque bases (e.g. pw2 against its reciprocal)
    merged: list = []
    for base, expo in opaque:
        for i, (b2, e2) in enumerate(merged):
            if b2 == base:
                merged[i] = (b2, e2 + expo)
                break
        else:
            merged.append((base, expo))

    out: list = []
    if const_acc != 1:
        out.append(Const(const_acc))
    for e, r in const_pow:
        out.append(Power(e, r))
    if geo != 0:
        out.append(Geometric(geo))
    if logp != 0:
        out.append(LogPower(logp))
    if iterl != 0:
        out.append(IterLog(iterl))
    for kappa in sorted(explog):
        if explog[kappa] != 0:
            out.append(ExpLogPow(explog[kappa], kappa))
    for base, expo in merged:
        if expo == 0:
            continue
        if expo == 1:
            out.append(base)
        else:
            out.append(Power(base, expo))

    if not out:
        return Const(1)
    if len(out) == 1:
        return out[0]
    node = Product(tuple(out))
    if node.depth() > MAX_DEPTH:
        raise DepthError("expression nesting exceeds limit")
    return node


# ---------------------------------------------------------------------------
# evaluation

def _log2_fraction(v: Fraction) -> Union[Fraction, float]:
    """log2 of a positive rational; exact when it is a power of two."""
    num, den = v.numerator, v.denominator
    if num & (num - 1) == 0 and den & (den - 1) == 0:
        return Fraction(num.bit_length() - den.bit_length())
    return math.log2(num) - math.log2(den)


def _pw_log2(node: PiecewiseGeometric, j: int) -> Fraction:
    if j == 0:
        return Fraction(0)
    l = j.bit_length() - 1  # anchor j_l = 2^l <= j < 2^(l+1)
    jl = 1 << l
    if l % 2 == 0:
        anchor = Fraction(2 * node.s1 + node.s0, 3) * jl
        slope = node.s0
    else:
        anchor = Fraction(node.s1 + 2 * node.s0, 3) * jl
        slope = node.s1
    return anchor + slope * (j - jl)


def log2_value(e: SequenceExpr, j: int) -> Union[Fraction, float]:
    """log2 of the j-th entry; a Fraction whenever exactly representable."""
    if j < 0:
        raise ValueError("sequence index must be >= 0")
    if isinstance(e, Const):
        return _log2_fraction(e.value)
    if isinstance(e, Geometric):
        return e.rate * j
    if isinstance(e, LogPower):
        m = j + 1
        if m & (m - 1) == 0:
            return e.exponent * (m.bit_length() - 1)
        return float(e.exponent) * math.log2(m)
    if isinstance(e, IterLog):
        m = j + 1
        if m & (m - 1) == 0:
            inner = 1 + (m.bit_length() - 1)
            if inner & (inner - 1) == 0:
                return e.exponent * (inner.bit_length() - 1)
            return float(e.exponent) * math.log2(inner)
        return float(e.exponent) * math.log2(1.0 + math.log2(m))
    if isinstance(e, ExpLogPow):
        if j == 0:
            return Fraction(0)
        t = math.log2(j + 1)
        return float(e.coeff) * (t ** float(e.kappa)) * _LOG2_E
    if isinstance(e, PiecewiseGeometric):
        return _pw_log2(e, j)
    if isinstance(e, Table):
        if j < len(e.prefix):
            return _log2_fraction(e.prefix[j])
        return log2_value(e.continuation, j)
    if isinstance(e, Power):
        v = log2_value(e.base, j)
        if isinstance(v, Fraction):
            return e.exponent * v
        return float(e.exponent) * v
    if isinstance(e, Product):
        acc: Union[Fraction, float] = Fraction(0)
        for f in e.factors:
            v = log2_value(f, j)
            if isinstance(acc, Fraction) and isinstance(v, Fraction):
                acc = acc + v
            else:
                acc = float(acc) + float(v)
        return acc
    raise TypeError(f"unknown node {type(e).__name__}")


def evaluate(e: SequenceExpr, j: int) -> float:
    """The j-th entry as a float; raises EvalOverflow instead of returning 0/inf."""
    lg = log2_value(e, j)
    x = float(lg)
    if x > _LOG2_FLOAT_LIMIT:
        raise EvalOverflow(+1, lg)
    if x < -_LOG2_FLOAT_LIMIT:
        raise EvalOverflow(-1, lg)
    if isinstance(lg, Fraction) and lg.denominator == 1:
        n = lg.numerator
        return float(2 ** n) if n >= 0 else 1.0 / float(2 ** (-n))
    return 2.0 ** x


def function_log2(e: SequenceExpr, t: float) -> float:
    """log2 of the associated function at real argument t >= 1.

    The function agrees with the sequence at t = 2^j via x = log2(t); between
    dyadic points the geometric and pw2 atoms interpolate their exponents
    linearly in x, the log-type atoms use the same closed forms at real x.
    """
    if t < 1.0:
        raise ValueError("function argument must be >= 1")
    x = math.log2(t)
    if isinstance(e, Const):
        return float(_log2_fraction(e.value))
    if isinstance(e, Geometric):
        return float(e.rate) * x
    if isinstance(e, LogPower):
        return float(e.exponent) * math.log2(1.0 + x)
    if isinstance(e, IterLog):
        return float(e.exponent) * math.log2(1.0 + math.log2(1.0 + x))
    if isinstance(e, ExpLogPow):
        if x == 0.0:
            return 0.0
        return float(e.coeff) * (math.log2(1.0 + x) ** float(e.kappa)) * _LOG2_E
    if isinstance(e, PiecewiseGeometric):
        # real-valued index xj = log2(t); exponent is piecewise linear in it
        xj = x
        if xj <= 0.0:
            return 0.0
        first_anchor = float(Fraction(2 * e.s1 + e.s0, 3))
        if xj <= 1.0:
            return first_anchor * xj
        l = int(math.floor(math.log2(xj)))
        jl = 2.0 ** l
        if 2.0 * jl <= xj:
            l += 1
            jl *= 2.0
        if l % 2 == 0:
            anchor = first_anchor * jl
            slope = float(e.s0)
        else:
            anchor = float(Fraction(e.s1 + 2 * e.s0, 3)) * jl
            slope = float(e.s1)
        return anchor + slope * (xj - jl)
    if isinstance(e, Table):
        jfloor = int(math.floor(x))
        if jfloor < len(e.prefix):
            return float(_log2_fraction(e.prefix[jfloor]))
        return function_log2(e.continuation, t)
    if isinstance(e, Power):
        return float(e.exponent) * function_log2(e.base, t)
    if isinstance(e, Product):
        return sum(function_log2(f, t) for f in e.factors)
    raise TypeError(f"unknown node {type(e).__name__}")


def function_value(e: SequenceExpr, t: float) -> float:
    lg = function_log2(e, t)
    if abs(lg) > _LOG2_FLOAT_LIMIT:
        raise EvalOverflow(1 if lg > 0 else -1, lg)
    return 2.0 ** lg


def strip_tables(e: SequenceExpr) -> SequenceExpr:
    """Replace table atoms by their continuations.

    Finitely many positive entries never change asymptotic quantities
    (memberships, Boyd indices, equivalence class), so the stripped
    expression carries the same tail behaviour.
    """
    if isinstance(e, Table):
        return strip_tables(e.continuation)
    if isinstance(e, Power):
        return power(strip_tables(e.base), e.exponent)
    if isinstance(e, Product):
        return product(*(strip_tables(f) for f in e.factors))
    return e


# ---------------------------------------------------------------------------
# structure analysis

@dataclass(frozen=True)
class Decomposition:
    """Multiplicative structure of an expression after table stripping.

    classified is False when some factor resists the atom algebra (then only
    window numerics apply downstream).  pw collects (node, exponent) pairs
    for oscillating atoms; rate/log_exp/explog/iterlog describe the smooth
    part.
    """

    classified: bool
    rate: Fraction = Fraction(0)
    log_exp: Fraction = Fraction(0)
    explog: tuple = ()  # sorted ((kappa, coeff), ...)
    iterlog: Fraction = Fraction(0)
    pw: tuple = ()  # ((PiecewiseGeometric, exponent), ...)

    @property
    def has_pw(self) -> bool:
        return bool(self.pw)

    @property
    def rate_interval(self) -> tuple:
        lo = hi = self.rate
        for node, expo in self.pw:
            a, b = node.s0 * expo, node.s1 * expo
            if a > b:
                a, b = b, a
            lo, hi = lo + a, hi + b
        return lo, hi

    @property
    def sv_nodes(self) -> tuple:
        parts = tuple(ExpLogPow(c, k) for k, c in self.explog if c != 0)
        if self.iterlog != 0:
            parts = parts + (IterLog(self.iterlog),)
        return parts


def decompose(e: SequenceExpr) -> Decomposition:
    e = strip_tables(e)
    rate = Fraction(0)
    log_exp = Fraction(0)
    iterlog = Fraction(0)
    explog: dict = {}
    pw: list = []
    ok = True

    def walk(x: SequenceExpr, outer: Fraction):
        nonlocal rate, log_exp, iterlog, ok
        if isinstance(x, Product):
            for f in x.factors:
                walk(f, outer)
        elif isinstance(x, Power):
            walk(x.base, outer * x.exponent)
        elif isinstance(x, Const):
            pass
        elif isinstance(x, Geometric):
            rate += x.rate * outer
        elif isinstance(x, LogPower):
            log_exp += x.exponent * outer
        elif isinstance(x, IterLog):
            iterlog += x.exponent * outer
        elif isinstance(x, ExpLogPow):
            explog[x.kappa] = explog.get(x.kappa, Fraction(0)) + x.coeff * outer
        elif isinstance(x, PiecewiseGeometric):
            pw.append((x, outer))
        else:
            ok = False

    walk(e, Fraction(1))
    explog_t = tuple(sorted((k, c) for k, c in explog.items() if c != 0))
    pw_t = tuple((n, r) for n, r in pw if r != 0)
    return Decomposition(
        classified=ok,
        rate=rate,
        log_exp=log_exp,
        explog=explog_t,
        iterlog=iterlog,
        pw=pw_t,
    )


@dataclass(frozen=True)
class SequenceProfile:
    """Asymptotic summary of an expression.

    rate/log_exponent are exact when known, None otherwise.  Boyd index
    fields hold exact rationals when provable from structure and None when
    only window bracketing applies (see seqcore.boyd_indices).  canonical
    means the expression reduces to geometric x log-power x at most one
    slowly varying atom, in which case both indices equal the rate.
    """

    rate: Optional[Fraction]
    log_exponent: Optional[Fraction]
    sv_factor: Optional[SequenceExpr]
    boyd_lower: Optional[Fraction]
    boyd_upper: Optional[Fraction]
    canonical: bool
    classified: bool


def canonicalize(e: SequenceExpr) -> SequenceProfile:
    """Profile of e: rates, log exponent, slowly varying residue, Boyd data.

    Table atoms defer their Boyd indices to window bracketing even though
    the continuation decides them, so that reported exactness always tracks
    what was proven from visible structure.
    """
    has_table = _contains_table(e)
    d = decompose(e)
    if not d.classified:
        return SequenceProfile(None, None, None, None, None, False, False)
    if has_table:
        # finite prefixes do not move any asymptotic quantity, but the
        # profile only reports what the visible structure proves; window
        # bracketing in seqcore recovers index intervals.
        return SequenceProfile(None, None, None, None, None, False, True)
    sv = d.sv_nodes
    sv_expr = product(*sv) if sv else None
    if d.has_pw:
        lo, hi = d.rate_interval
        return SequenceProfile(None, d.log_exp, sv_expr, lo, hi, False, True)
    canonical = len(sv) <= 1
    return SequenceProfile(d.rate, d.log_exp, sv_expr, d.rate, d.rate, canonical, True)


def _contains_table(e: SequenceExpr) -> bool:
    if isinstance(e, Table):
        return True
    if isinstance(e, Power):
        return _contains_table(e.base)
    if isinstance(e, Product):
        return any(_contains_table(f) for f in e.factors)
    return False


# ---------------------------------------------------------------------------
# rendering

def render(e: SequenceExpr) -> str:
    return _render(e, top=True)


def _render(e: SequenceExpr, top: bool = False) -> str:
    if isinstance(e, Const):
        return _fmt_rat(e.value)
    if isinstance(e, Geometric):
        return f"2^({_fmt_rat(e.rate)}*j)"
    if isinstance(e, LogPower):
        return f"(1+j)^{_fmt_rat(e.exponent)}"
    if isinstance(e, IterLog):
        return f"(1+log(1+j))^{_fmt_rat(e.exponent)}"
    if isinstance(e, ExpLogPow):
        return f"exp({_fmt_rat(e.coeff)}*log(1+j)^{_fmt_rat(e.kappa)})"
    if isinstance(e, PiecewiseGeometric):
        return f"pw2(s0={_fmt_rat(e.s0)},s1={_fmt_rat(e.s1)})"
    if isinstance(e, Table):
        body = ",".join(_fmt_rat(v) for v in e.prefix)
        s = f"table[{body}] then {_render(e.continuation, top=True)}"
        return s if top else f"({s})"
    if isinstance(e, Power):
        return f"({_render(e.base)})^{_fmt_rat(e.exponent)}"
    if isinstance(e, Product):
        return " * ".join(_render(f) for f in e.factors)
    raise TypeError(f"unknown node {type(e).__name__}")


# ---------------------------------------------------------------------------
# parsing

_SYMBOLS = "^()[],*/+-="


@dataclass
class _Tok:
    kind: str  # NUM NAME SYM RAT END
    text: str
    pos: int
    value: object = None


def _lex(src: str) -> list:
    toks = []
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            if j < n and src[j] == ".":
                j += 1
                while j < n and src[j].isdigit():
                    j += 1
            text = src[i:j]
            val = Fraction(text) if "." in text else Fraction(int(text))
            toks.append(_Tok("NUM", text, i, val))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            toks.append(_Tok("NAME", src[i:j], i))
            i = j
            continue
        if c in _SYMBOLS:
            toks.append(_Tok("SYM", c, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    toks.append(_Tok("END", "", n))
    return toks


class _Parser:
    def __init__(self, toks: list):
        self.toks = toks
        self.i = 0

    def peek(self, ahead: int = 0) -> _Tok:
        k = min(self.i + ahead, len(self.toks) - 1)
        return self.toks[k]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        if t.kind != "END":
            self.i += 1
        return t

    def expect_sym(self, s: str) -> _Tok:
        t = self.next()
        if t.kind != "SYM" or t.text != s:
            raise ParseError(f"expected {s!r}, found {t.text or 'end of input'!r}", t.pos)
        return t

    def expect_name(self, name: str) -> _Tok:
        t = self.next()
        if t.kind != "NAME" or t.text != name:
            raise ParseError(f"expected {name!r}, found {t.text or 'end of input'!r}", t.pos)
        return t

    def at_sym(self, s: str, ahead: int = 0) -> bool:
        t = self.peek(ahead)
        return t.kind == "SYM" and t.text == s

    def at_name(self, s: str, ahead: int = 0) -> bool:
        t = self.peek(ahead)
        return t.kind == "NAME" and t.text == s

    # rational := ['-'] NUM ['/' NUM]   (or a substituted RAT token)
    def rational(self) -> Fraction:
        t = self.peek()
        neg = False
        if t.kind == "SYM" and t.text == "-":
            self.next()
            neg = True
            t = self.peek()
        if t.kind == "RAT":
            self.next()
            v = t.value
            return -v if neg else v
        if t.kind != "NUM":
            raise ParseError(f"expected number, found {t.text or 'end of input'!r}", t.pos)
        self.next()
        v = t.value
        if self.at_sym("/") and self.peek(1).kind == "NUM":
            self.next()
            den = self.next().value
            if den == 0:
                raise ParseError("zero denominator", t.pos)
            v = v / den
        return -v if neg else v

    def expr(self) -> SequenceExpr:
        factors = [self.term()]
        while True:
            if self.at_sym("*"):
                self.next()
                factors.append(self.term())
            elif self.at_sym("/"):
                self.next()
                factors.append(power(self.term(), Fraction(-1)))
            else:
                break
        return product(*factors)

    def term(self) -> SequenceExpr:
        f = self.factor()
        if self.at_sym("^"):
            self.next()
            f = power(f, self.rational())
        return f

    def factor(self) -> SequenceExpr:
        t = self.peek()
        if t.kind == "NUM" or t.kind == "RAT" or (t.kind == "SYM" and t.text == "-"):
            pos = t.pos
            base = self.rational()
            # base-2 geometric: 2^( linear )
            if self.at_sym("^") and self.at_sym("(", 1):
                self.next()
                self.next()
                node = self.linear(base, pos)
                self.expect_sym(")")
                return node
            if base <= 0:
                raise PositivityError(f"constant {base} is not positive (at offset {pos})")
            return Const(base)
        if t.kind == "NAME":
            if t.text == "table":
                return self.table_form()
            if t.text == "pw2":
                return self.pw2_form()
            if t.text == "exp":
                return self.exp_form()
            raise ParseError(f"unbound name {t.text!r}", t.pos)
        if t.kind == "SYM" and t.text == "(":
            # (1+j)^b | (1+log(1+j))^b | ( expr )
            if self.peek(1).kind == "NUM" and self.peek(1).value == 1 and self.at_sym("+", 2):
                if self.peek(3).kind == "NAME" and self.peek(3).text == "j" and self.at_sym(")", 4):
                    for _ in range(5):
                        self.next()
                    return log_power(self.opt_exponent())
                if self.peek(3).kind == "NAME" and self.peek(3).text == "log":
                    self.next()  # (
                    self.next()  # 1
                    self.next()  # +
                    self.next()  # log
                    self.expect_sym("(")
                    self.one_plus_j()
                    self.expect_sym(")")
                    self.expect_sym(")")
                    return iter_log(self.opt_exponent())
            self.next()
            inner = self.expr()
            self.expect_sym(")")
            return inner
        raise ParseError(f"expected a factor, found {t.text or 'end of input'!r}", t.pos)

    def opt_exponent(self) -> Fraction:
        if self.at_sym("^"):
            self.next()
            return self.rational()
        return Fraction(1)

    def dyadic_log2(self, base: Fraction, pos: int) -> int:
        """Exact exponent m with base = 2^m; geometric atoms stay exact
        only for power-of-two bases."""
        num, den = base.numerator, base.denominator
        if base > 0 and den == 1 and num & (num - 1) == 0:
            return num.bit_length() - 1
        if base > 0 and num == 1 and den & (den - 1) == 0:
            return -(den.bit_length() - 1)
        raise ParseError("geometric atoms must use a power-of-two base", pos)

    def one_plus_j(self):
        t = self.next()
        if not (t.kind == "NUM" and t.value == 1):
            raise ParseError("expected '1+j'", t.pos)
        self.expect_sym("+")
        tj = self.next()
        if not (tj.kind == "NAME" and tj.text == "j"):
            raise ParseError("expected '1+j'", tj.pos)

    # linear := rational '*' j | j ['*' rational] | rational,  after 'b^('
    def linear(self, base: Fraction, pos: int) -> SequenceExpr:
        if self.at_name("j"):
            self.next()
            coeff = Fraction(1)
            if self.at_sym("*"):
                self.next()
                coeff = self.rational()
            return geometric(coeff * self.dyadic_log2(base, pos))
        coeff = self.rational()
        if self.at_sym("*"):
            self.next()
            self.expect_name("j")
            return geometric(coeff * self.dyadic_log2(base, pos))
        # constant exponent
        if base <= 0:
            raise PositivityError(f"constant {base} is not positive (at offset {pos})")
        return power(Const(base), coeff)

    def table_form(self) -> SequenceExpr:
        self.expect_name("table")
        self.expect_sym("[")
        vals = [self.rational()]
        while self.at_sym(","):
            self.next()
            vals.append(self.rational())
        self.expect_sym("]")
        self.expect_name("then")
        cont = self.expr()
        return table(vals, cont)

    def pw2_form(self) -> SequenceExpr:
        self.expect_name("pw2")
        self.expect_sym("(")
        params = {}
        for _ in range(2):
            t = self.next()
            if t.kind != "NAME" or t.text not in ("s0", "s1"):
                raise ParseError("pw2 expects parameters s0 and s1", t.pos)
            self.expect_sym("=")
            params[t.text] = self.rational()
            if self.at_sym(","):
                self.next()
        self.expect_sym(")")
        if set(params) != {"s0", "s1"}:
            raise ParseError("pw2 expects parameters s0 and s1", self.peek().pos)
        return pw2(params["s0"], params["s1"])

    def exp_form(self) -> SequenceExpr:
        self.expect_name("exp")
        self.expect_sym("(")
        coeff = self.rational()
        self.expect_sym("*")
        self.expect_name("log")
        self.expect_sym("(")
        self.one_plus_j()
        self.expect_sym(")")
        self.expect_sym("^")
        kappa = self.rational()
        self.expect_sym(")")
        if not (0 < kappa < 1):
            raise ParseError("exp-log exponent must lie strictly between 0 and 1", self.peek().pos)
        return exp_log_pow(coeff, kappa)


def _split_bindings(toks: list):
    depth = 0
    for k, t in enumerate(toks):
        if t.kind == "SYM" and t.text in "([":
            depth += 1
        elif t.kind == "SYM" and t.text in ")]":
            depth -= 1
        elif t.kind == "NAME" and t.text == "with" and depth == 0:
            return toks[:k] + [_Tok("END", "", t.pos)], toks[k + 1:]
    return toks, None


def _parse_bindings(toks: list) -> dict:
    p = _Parser(toks)
    out = {}
    while True:
        t = p.next()
        if t.kind != "NAME":
            raise ParseError("expected binding name", t.pos)
        if t.text in ("j", "with", "then", "table", "pw2", "exp", "log"):
            raise ParseError(f"{t.text!r} cannot be bound", t.pos)
        p.expect_sym("=")
        out[t.text] = p.rational()
        if p.at_sym(","):
            p.next()
            continue
        end = p.next()
        if end.kind != "END":
            raise ParseError("malformed binding list", end.pos)
        return out


_KEYWORDS = {"j", "with", "then", "table", "pw2", "exp", "log", "s0", "s1"}


def parse(text: str) -> SequenceExpr:
    """Parse the sequence DSL; raises ParseError with a byte offset."""
    toks = _lex(text)
    body, binding_toks = _split_bindings(toks)
    if binding_toks is not None:
        bindings = _parse_bindings(binding_toks)
        subst = []
        for t in body:
            if t.kind == "NAME" and t.text in bindings:
                subst.append(_Tok("RAT", t.text, t.pos, bindings[t.text]))
            else:
                subst.append(t)
        body = subst
    p = _Parser(body)
    e = p.expr()
    tail = p.next()
    if tail.kind != "END":
        raise ParseError(f"unexpected trailing input {tail.text!r}", tail.pos)
    return e

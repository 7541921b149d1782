"""Compactness, nuclearity and entropy asymptotics of weighted embeddings.

The embeddings analysed here act between smoothness spaces modelled on
weighted mixed-norm sequence spaces: a source space with weight sequence
sigma and integrability (p1, q1), a target with weight tau and (p2, q2),
over a domain of dimension dim.  Every decision reduces to an exact
membership test of a single criterion sequence in ell_r or c0, with the
exponent r built from the integrability parameters by reciprocal-space
arithmetic.

Conventions: extended parameters live in [something positive, inf]; inf is
math.inf and all arithmetic happens on reciprocals, where inf becomes the
exact Fraction 0.  Index space is dyadic throughout: weight entry j is the
weight at frequency 2^j, and a function-space weight w evaluated at t
corresponds to the entry log2(t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Union

from .seqdsl import (
    Decomposition,
    EvalOverflow,
    SequenceExpr,
    decompose,
    evaluate,
    function_log2,
    geometric,
    parse,
    power,
    product,
    render,
    strip_tables,
)
from .seqcore import boyd_indices, is_almost_strongly_increasing

__all__ = [
    "INF",
    "ExtReal",
    "ext",
    "recip",
    "dual_star",
    "tong",
    "delta_gap",
    "EmbeddingProblem",
    "Target",
    "Verdict",
    "Band",
    "RateFormula",
    "EnAResult",
    "criterion_sequence",
    "ellr_membership",
    "membership_partial_sums",
    "compactness",
    "nuclearity",
    "f_space_nuclearity",
    "compact_not_nuclear_band",
    "entropy_rate",
    "en_A",
]

INF = math.inf
ExtReal = Union[Fraction, float]


def ext(x) -> ExtReal:
    """Normalize an integrability parameter to Fraction or math.inf."""
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "infinity", "oo"):
            return INF
        return Fraction(s)
    if isinstance(x, float):
        if math.isinf(x):
            return INF
        return Fraction(x)
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an extended parameter")


def recip(x: ExtReal) -> ExtReal:
    """1/x on (0, inf], with 1/inf = 0 and 1/0 = inf, kept exact."""
    if x == INF:
        return Fraction(0)
    if x == 0:
        return INF
    return 1 / Fraction(x)


def _from_recip(r: Fraction) -> ExtReal:
    return INF if r == 0 else 1 / r


def dual_star(r1, r2) -> ExtReal:
    """Exponent r* with 1/r* = (1/r2 - 1/r1)+; equals inf when r1 <= r2."""
    r1, r2 = ext(r1), ext(r2)
    gap = max(Fraction(0), recip(r2) - recip(r1))
    return _from_recip(gap)


def tong(r1, r2) -> ExtReal:
    """Exponent t with 1/t = 1 - (1/r1 - 1/r2)+, defined for r1, r2 in [1, inf].

    On reciprocals 1/t >= 1/r* always holds, i.e. t <= dual_star(r1, r2),
    with equality exactly when {r1, r2} = {1, inf}.
    """
    r1, r2 = ext(r1), ext(r2)
    for r in (r1, r2):
        if r != INF and r < 1:
            raise ValueError(f"tong exponent needs parameters in [1, inf], got {r}")
    one_over_t = 1 - max(Fraction(0), recip(r1) - recip(r2))
    return _from_recip(one_over_t)


def delta_gap(s1, p1, s2, p2, dim: int) -> Fraction:
    """Differential gap s1 - dim/p1 - s2 + dim/p2 of two smoothness levels."""
    return Fraction(s1) - dim * recip(ext(p1)) - Fraction(s2) + dim * recip(ext(p2))


# ---------------------------------------------------------------------------
# problems and verdicts

@dataclass(frozen=True)
class EmbeddingProblem:
    """Embedding of a (sigma, p1, q1) space into a (tau, p2, q2) space.

    scale "B" is the plain mixed-norm model; scale "F" swaps the order of
    integration, where criteria transfer only through sandwich embeddings.
    """

    sigma: SequenceExpr
    tau: SequenceExpr
    p1: ExtReal
    q1: ExtReal
    p2: ExtReal
    q2: ExtReal
    dim: int
    scale: str = "B"

    def __post_init__(self):
        for name in ("sigma", "tau"):
            w = getattr(self, name)
            if isinstance(w, str):
                object.__setattr__(self, name, parse(w))
        for name in ("p1", "q1", "p2", "q2"):
            v = ext(getattr(self, name))
            if v != INF and v <= 0:
                raise ValueError(f"{name} must be positive or inf, got {v}")
            object.__setattr__(self, name, v)
        if not (isinstance(self.dim, int) and self.dim >= 1):
            raise ValueError("dim must be a positive integer")
        if self.scale not in ("B", "F"):
            raise ValueError("scale must be 'B' or 'F'")

    def is_banach(self) -> bool:
        return all(v == INF or v >= 1 for v in (self.p1, self.q1, self.p2, self.q2))


@dataclass(frozen=True)
class Target:
    """Membership space for a criterion sequence: ell_r or c0."""

    kind: str  # "ell" | "c0"
    r: Optional[ExtReal] = None

    def __post_init__(self):
        if self.kind not in ("ell", "c0"):
            raise ValueError("target kind must be 'ell' or 'c0'")
        if self.kind == "ell" and self.r is None:
            raise ValueError("ell target needs an exponent")

    def __str__(self) -> str:
        if self.kind == "c0":
            return "c0"
        return "ell_inf" if self.r == INF else f"ell_{self.r}"


@dataclass(frozen=True)
class Verdict:
    status: str  # holds | fails | inconclusive
    tested: Optional[SequenceExpr]
    target: Optional[Target]
    tag: str
    evidence: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Band:
    """Half-open interval of gap values (lower, upper] where an embedding is
    compact but not nuclear."""

    lower: Fraction
    upper: Fraction

    @property
    def empty(self) -> bool:
        return not (self.upper > self.lower)


def criterion_sequence(problem: EmbeddingProblem, kind: str):
    """Criterion sequence and membership target deciding the given property.

    kind "compact": sigma^-1 tau 2^(j d (1/p1 - 1/p2)) 2^(j d / p*) in
    ell_{q*}; kind "nuclear": p* and q* replaced by the tong exponents of
    (p1,p2) and (q1,q2).  Either way an infinite target exponent means c0.
    """
    p1, q1, p2, q2 = problem.p1, problem.q1, problem.p2, problem.q2
    d = problem.dim
    base_rate = d * (recip(p1) - recip(p2))
    if kind == "compact":
        star = dual_star(p1, p2)
        fine = dual_star(q1, q2)
    elif kind == "nuclear":
        star = tong(p1, p2)
        fine = tong(q1, q2)
    else:
        raise ValueError("kind must be 'compact' or 'nuclear'")
    expr = product(power(problem.sigma, Fraction(-1)), problem.tau,
                   geometric(base_rate + d * recip(star)))
    target = Target("c0") if fine == INF else Target("ell", fine)
    return expr, target


# ---------------------------------------------------------------------------
# exact membership of classified sequences

def _dominant_sv(d: Decomposition):
    """(label, value) of the factor that decides ties: the largest-kappa
    stretched-exponential coefficient if any, else the iterated-log
    exponent, else None."""
    if d.explog:
        kappa, coeff = max(d.explog)
        return ("explog", coeff)
    if d.iterlog != 0:
        return ("iterlog", d.iterlog)
    return None


def _membership_smooth(d: Decomposition, target: Target, ev: dict) -> str:
    rho = d.rate
    if rho < 0:
        ev["decided_by"] = "geometric decay"
        return "holds"
    if rho > 0:
        ev["decided_by"] = "geometric growth"
        return "fails"

    b = d.log_exp
    dom = _dominant_sv(d)
    if target.kind == "ell" and target.r != INF:
        r = Fraction(target.r)
        rb = r * b
        if rb < -1:
            ev["decided_by"] = f"log power {b} below summability boundary"
            return "holds"
        if rb > -1:
            ev["decided_by"] = f"log power {b} above summability boundary"
            return "fails"
        ev["boundary"] = f"r*log_exp == -1 at r={target.r}"
        if dom is None:
            ev["decided_by"] = "harmonic boundary, no slowly varying factor"
            return "fails"
        label, value = dom
        if label == "explog":
            ev["decided_by"] = f"stretched-exponential coefficient {value}"
            return "holds" if value < 0 else "fails"
        rc = r * value
        ev["decided_by"] = f"iterated-log exponent {value} at boundary"
        return "holds" if rc < -1 else "fails"

    # c0 and ell_inf: pointwise decay / boundedness
    if b < 0:
        ev["decided_by"] = f"log power {b} decays"
        return "holds"
    if b > 0:
        ev["decided_by"] = f"log power {b} grows"
        return "fails"
    if dom is not None:
        label, value = dom
        ev["decided_by"] = f"{label} factor with exponent {value}"
        if value < 0:
            return "holds"
        if value > 0:
            return "fails"
    ev["decided_by"] = "sequence has a positive limit"
    return "holds" if target.kind == "ell" else "fails"  # ell here means ell_inf


def _pw_anchor_rates(d: Decomposition):
    """Exact growth rates along the two anchor subsequences of the dyadic
    block structure shared by all oscillating atoms."""
    even = d.rate
    odd = d.rate
    for node, expo in d.pw:
        even += expo * (2 * node.s1 + node.s0) / 3
        odd += expo * (node.s1 + 2 * node.s0) / 3
    return even, odd


def _membership_pw(d: Decomposition, target: Target, ev: dict) -> str:
    even, odd = _pw_anchor_rates(d)
    ev["anchor_rate_even"] = str(even)
    ev["anchor_rate_odd"] = str(odd)
    top = max(even, odd)
    if top < 0:
        ev["decided_by"] = "negative growth rate along both anchor subsequences"
        return "holds"
    if top > 0:
        ev["decided_by"] = "positive growth rate along an anchor subsequence"
        return "fails"
    if even == 0 and odd == 0:
        # exponents cancel identically; the log/sv part decides densely
        ev["pw_branch"] = "exponent identically zero"
        flat = replace(d, rate=Fraction(0), pw=())
        return _membership_smooth(flat, target, ev)

    # zero rate on one anchor family only: those anchors are exponentially
    # sparse and the sequence decays geometrically away from them, so a
    # block contributes a bounded multiple of its anchor term
    ev["pw_branch"] = "sparse zero anchors"
    b = d.log_exp
    dom = _dominant_sv(d)
    if b < 0:
        ev["decided_by"] = f"anchor log power {b} decays (geometric in block index)"
        return "holds"
    if b > 0:
        ev["decided_by"] = f"anchor log power {b} grows"
        return "fails"
    if dom is not None:
        label, value = dom
        if label == "explog":
            ev["decided_by"] = f"anchor stretched-exponential coefficient {value}"
            if value < 0:
                return "holds"
            if value > 0:
                return "fails"
        else:
            value = dom[1]
            if target.kind == "ell" and target.r != INF:
                rc = Fraction(target.r) * value
                ev["decided_by"] = f"block sums behave like sum l^{rc}"
                return "holds" if rc < -1 else "fails"
            ev["decided_by"] = f"anchor iterated-log exponent {value}"
            if value < 0:
                return "holds"
            if value > 0:
                return "fails"
            return "holds" if target.kind == "ell" and target.r == INF else "fails"
    if target.kind == "ell" and target.r == INF:
        ev["decided_by"] = "anchor terms bounded"
        return "holds"
    if target.kind == "ell":
        ev["decided_by"] = "one anchor term of unit size per dyadic block"
        return "fails"
    ev["decided_by"] = "anchor terms do not vanish"
    return "fails"


def ellr_membership(expr: SequenceExpr, target: Target) -> Verdict:
    """Exact membership of a classified sequence in ell_r / c0 / ell_inf.

    Finite prefixes of positive entries never change membership, so table
    atoms are stripped before the structural test.
    """
    e = strip_tables(expr)
    d = decompose(e)
    ev = {"target": str(target)}
    if not d.classified:
        ev["reason"] = "sequence structure not classified"
        return Verdict("inconclusive", expr, target, "sequence-membership", ev)
    if d.pw:
        status = _membership_pw(d, target, ev)
    else:
        status = _membership_smooth(d, target, ev)
    return Verdict(status, expr, target, "sequence-membership", ev)


def membership_partial_sums(expr: SequenceExpr, target: Target,
                            max_level: int = 14) -> dict:
    """Numeric condensation probe backing the structural membership test.

    For ell_r returns partial sums of |u_j|^r up to 2^L for a ladder of
    levels; for c0/ell_inf returns samples u_{2^i}.  Values saturate at inf
    once the evaluation overflows.
    """
    out: dict = {"target": str(target)}
    if target.kind == "ell" and target.r != INF:
        r = float(target.r)
        levels = sorted({max_level - 4, max_level - 2, max_level})
        sums, total, nxt = [], 0.0, 0
        for L in levels:
            hi = 1 << L
            for j in range(nxt, hi + 1):
                try:
                    total += evaluate(expr, j) ** r
                except EvalOverflow as e:
                    # underflowed terms add nothing; true overflow swamps
                    if e.scale > 0:
                        total = INF
                        break
                except OverflowError:
                    total = INF
                    break
            nxt = hi + 1
            sums.append((L, total))
            if total == INF:
                break
        out["partial_sums"] = sums
    else:
        samples = []
        for i in range(0, max_level + 1, 2):
            try:
                samples.append((1 << i, evaluate(expr, 1 << i)))
            except EvalOverflow as e:
                samples.append((1 << i, 0.0 if e.scale < 0 else INF))
            except OverflowError:
                samples.append((1 << i, INF))
        out["samples"] = samples
    return out


# ---------------------------------------------------------------------------
# compactness / nuclearity

def compactness(problem: EmbeddingProblem) -> Verdict:
    """Compactness of the embedding; exact on scale B, sandwich-transferred
    on scale F (sufficient and necessary parts may fall apart)."""
    if problem.scale == "F":
        return _f_scale_sandwich(problem, "compact")
    expr, target = criterion_sequence(problem, "compact")
    v = ellr_membership(expr, target)
    ev = dict(v.evidence)
    ev["criterion"] = render(expr)
    return Verdict(v.status, expr, target, "sequence-compactness-criterion", ev)


def nuclearity(problem: EmbeddingProblem) -> Verdict:
    """Nuclearity of the embedding.  Only Banach parameters admit the
    criterion; scale F delegates to the Boyd-index transfer."""
    if not problem.is_banach():
        raise ValueError(
            "nuclearity criterion requires Banach exponents: all of p1, q1, p2, q2 "
            "must lie in [1, inf]; quasi-Banach values below 1 are not covered")
    if problem.scale == "F":
        return f_space_nuclearity(problem)
    expr, target = criterion_sequence(problem, "nuclear")
    v = ellr_membership(expr, target)
    ev = dict(v.evidence)
    ev["criterion"] = render(expr)
    return Verdict(v.status, expr, target, "sequence-nuclearity-criterion", ev)


def _f_scale_sandwich(problem: EmbeddingProblem, kind: str) -> Verdict:
    """Transfer a scale-B criterion to scale F through the elementary
    two-sided sandwich, replacing the fine indices by max/min with p."""
    suff = replace(problem, scale="B",
                   q1=max(problem.p1, problem.q1), q2=min(problem.p2, problem.q2))
    nec = replace(problem, scale="B",
                  q1=min(problem.p1, problem.q1), q2=max(problem.p2, problem.q2))
    run = compactness if kind == "compact" else nuclearity
    v_suff = run(suff)
    v_nec = run(nec)
    ev = {
        "route": "via-B-sandwich",
        "sufficient_fine_indices": (str(suff.q1), str(suff.q2)),
        "necessary_fine_indices": (str(nec.q1), str(nec.q2)),
        "sufficient_status": v_suff.status,
        "necessary_status": v_nec.status,
    }
    if v_suff.status == "holds":
        return Verdict("holds", v_suff.tested, v_suff.target, "via-B-sandwich", ev)
    if v_nec.status == "fails":
        return Verdict("fails", v_nec.tested, v_nec.target, "via-B-sandwich", ev)
    ev["reason"] = "sandwich bounds disagree; scale-F boundary case"
    return Verdict("inconclusive", v_suff.tested, v_suff.target, "via-B-sandwich", ev)


def f_space_nuclearity(problem: EmbeddingProblem) -> Verdict:
    """Nuclearity on scale F via the Boyd indices of the nuclearity
    criterion sequence: negative upper index suffices, positive lower index
    excludes, anything else is a genuine boundary case."""
    if not problem.is_banach():
        raise ValueError(
            "nuclearity criterion requires Banach exponents: all of p1, q1, p2, q2 "
            "must lie in [1, inf]; quasi-Banach values below 1 are not covered")
    expr, target = criterion_sequence(replace(problem, scale="B"), "nuclear")
    b = boyd_indices(strip_tables(expr))
    ev = {"criterion": render(expr), "boyd_exact": b.exact}
    if b.exact:
        ev["boyd_lower"], ev["boyd_upper"] = str(b.lower), str(b.upper)
        if b.upper < 0:
            return Verdict("holds", expr, target, "boyd-sandwich-f-scale", ev)
        if b.lower > 0:
            return Verdict("fails", expr, target, "boyd-sandwich-f-scale", ev)
    else:
        ev["boyd_lower_bracket"] = b.lower_bracket
        ev["boyd_upper_bracket"] = b.upper_bracket
        if b.upper_bracket[1] < 0:
            return Verdict("holds", expr, target, "boyd-sandwich-f-scale", ev)
        if b.lower_bracket[0] > 0:
            return Verdict("fails", expr, target, "boyd-sandwich-f-scale", ev)
    ev["reason"] = "criterion Boyd indices straddle zero; limiting F-scale case"
    return Verdict("inconclusive", expr, target, "boyd-sandwich-f-scale", ev)


def compact_not_nuclear_band(p1, p2, dim: int) -> Band:
    """Gap values delta where the classical embedding is compact but not
    nuclear: the half-open band (dim/p*, dim/tong(p1,p2)].  Empty exactly
    when {p1, p2} = {1, inf}."""
    p1, p2 = ext(p1), ext(p2)
    lower = dim * recip(dual_star(p1, p2))
    upper = dim * recip(tong(p1, p2))
    return Band(lower, upper)


# ---------------------------------------------------------------------------
# entropy asymptotics

@dataclass(frozen=True)
class RateFormula:
    """Asymptotic law e_k ~ k^(-k_exponent) (1+log k)^(-log_exponent) x residual.

    kind names the regime; exponents are exact rationals when known and
    None when the law is carried entirely by ratio_expr/residual.
    ratio_expr, when set, is the weight-ratio in dyadic index space: its
    value at index log2(k)/dim is the predicted e_k up to constants.
    """

    kind: str
    k_exponent: Optional[Fraction]
    log_exponent: Optional[Fraction]
    residual: Optional[str]
    ratio_expr: Optional[SequenceExpr]
    tag: str
    notes: tuple = ()


def entropy_rate(problem: EmbeddingProblem) -> RateFormula:
    """Entropy-number asymptotics of a compact scale-B embedding.

    Non-limiting regime (reciprocal criterion almost strongly increasing):
    e_k behaves like the weight ratio at frequency k^(1/dim).  Limiting
    regimes are matched against the catalog of sharp results: pure-log for
    equal p, the slowly-varying integral formula for q1 > q2, and the
    three-branch coupled-log law for p1 < p2 with q2 <= q1.
    """
    if problem.scale != "B":
        return RateFormula("inconclusive", None, None, None, None,
                           "entropy-rate", ("entropy catalog covers scale B only",))
    comp = compactness(problem)
    if comp.status == "fails":
        return RateFormula("not-compact", None, None, None, None,
                           "entropy-rate", ("embedding is not compact",))
    if comp.status == "inconclusive":
        return RateFormula("inconclusive", None, None, None, None,
                           "entropy-rate", ("compactness undecided",))

    crit, target = criterion_sequence(problem, "compact")
    crit = strip_tables(crit)
    asi = is_almost_strongly_increasing(power(crit, Fraction(-1)))
    ratio = product(power(strip_tables(problem.sigma), Fraction(-1)),
                    strip_tables(problem.tau))
    if asi.status == "yes":
        dr = decompose(ratio)
        notes = ("value of the weight ratio at frequency k^(1/dim)",)
        if dr.classified and not dr.pw:
            u = -dr.rate / problem.dim
            v = -dr.log_exp
            residual = None
            if dr.sv_nodes:
                residual = " * ".join(render(n) for n in dr.sv_nodes) + \
                    " at j = log2(k)/dim"
            return RateFormula("non-limiting", u, v, residual, ratio,
                               "entropy-nonlimiting-ratio", notes)
        return RateFormula("non-limiting", None, None,
                           render(ratio) + " at j = log2(k)/dim", ratio,
                           "entropy-nonlimiting-ratio", notes)

    dc = decompose(crit)
    qstar_recip = max(Fraction(0), recip(problem.q2) - recip(problem.q1))
    if dc.classified and not dc.pw and dc.rate == 0:
        pure_log = not dc.explog and dc.iterlog == 0
        beta = -dc.log_exp
        if pure_log and problem.p1 == problem.p2:
            return RateFormula("limiting-log", Fraction(0), beta - qstar_recip,
                               None, None, "entropy-limiting-log",
                               ("equal integrability, logarithmic criterion",))
        if pure_log and problem.p1 < problem.p2 and \
                recip(problem.q2) >= recip(problem.q1):
            alpha = recip(problem.p1) - recip(problem.p2)
            pivot = qstar_recip + 2 * alpha
            if beta > pivot:
                return RateFormula("limiting-coupled-log", alpha,
                                   beta - 2 * alpha - qstar_recip, None, None,
                                   "entropy-limiting-coupled-log", ())
            if beta == pivot:
                return RateFormula("limiting-coupled-log", alpha,
                                   -(alpha + qstar_recip), None, None,
                                   "entropy-limiting-coupled-log",
                                   ("log factor grows at the pivot",))
            return RateFormula("limiting-coupled-log",
                               (beta + qstar_recip) / 2, Fraction(0), None, None,
                               "entropy-limiting-coupled-log", ())
        if not pure_log and problem.p1 == problem.p2 and \
                recip(problem.q2) > recip(problem.q1):
            psi = power(crit, Fraction(-1))
            residual = (
                f"(integral_(k^(1/dim))^inf PSI(t)^(-qs) dt/t)^(1/qs) with "
                f"PSI = {render(psi)} and 1/qs = {qstar_recip}")
            return RateFormula("limiting-sv-integral", Fraction(0), None,
                               residual, None, "entropy-limiting-sv-integral",
                               ("assumes the reciprocal criterion is increasing",))
        if not pure_log and problem.p1 == problem.p2:
            return RateFormula("inconclusive", None, None, None, None,
                               "entropy-rate",
                               ("slowly varying limiting case with q1 <= q2 "
                                "is outside the implemented catalog",))
    return RateFormula("inconclusive", None, None, None, None, "entropy-rate",
                       ("limiting case outside the implemented catalog",))


@dataclass(frozen=True)
class EnAResult:
    """Evaluation of the two-sided entropy envelope functional

        A(k) = sup_{u >= k} ratio(u^(1/dim)) u^alpha min(ln(u/k + 1)/k, 1)^alpha

    over a geometric grid u = k 2^i.  certified means the tail beyond the
    grid was provably dominated; otherwise truncated is set.  The inner
    logarithm is the natural one; everything else in this package is base 2.
    """

    value: float
    argmax_u: float
    doublings: int
    alpha: Fraction
    truncated: bool
    certified: bool
    hypothesis_ok: bool
    notes: tuple = ()


def en_A(problem: EmbeddingProblem, k: int, doublings: int = 48) -> EnAResult:
    """Entropy envelope A(k) for embeddings with p1 < p2.

    Requires alpha = 1/p1 - 1/p2 > 0; the sharp two-sided law additionally
    needs 1/q2 - 1/q1 <= -alpha, recorded in hypothesis_ok.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    alpha = recip(problem.p1) - recip(problem.p2)
    if alpha <= 0:
        raise ValueError("the envelope functional needs p1 < p2")
    hypothesis_ok = (recip(problem.q2) - recip(problem.q1)) <= -alpha

    ratio = product(power(strip_tables(problem.sigma), Fraction(-1)),
                    strip_tables(problem.tau))
    a = float(alpha)
    d = problem.dim
    best, best_u, best_i = -INF, float(k), 0
    vals = []
    for i in range(doublings + 1):
        u = float(k) * (2.0 ** i)
        t = u ** (1.0 / d)
        lg = float(function_log2(ratio, t)) + a * math.log2(u)
        m = min(math.log(u / k + 1.0) / k, 1.0)
        lg += a * math.log2(m)
        vals.append(lg)
        if lg > best:
            best, best_u, best_i = lg, u, i

    dh = decompose(product(ratio, geometric(d * alpha)))
    decays = False
    if dh.classified and not dh.pw:
        if dh.rate < 0:
            decays = True
        elif dh.rate == 0:
            if dh.log_exp < 0:
                decays = True
            elif dh.log_exp == 0:
                dom = _dominant_sv(dh)
                decays = dom is not None and dom[1] < 0
    tail_start = max(0, len(vals) - 9)
    tail_monotone = all(vals[i] >= vals[i + 1] for i in range(tail_start, len(vals) - 1))
    certified = decays and tail_monotone and best_i < doublings - 1
    truncated = not certified
    value = INF if best > 1000.0 else 2.0 ** best
    notes = ()
    if not hypothesis_ok:
        notes = ("fine-index hypothesis 1/q2 - 1/q1 <= -alpha violated; "
                 "the envelope is evaluated but not two-sided sharp",)
    return EnAResult(value=value, argmax_u=best_u, doublings=doublings,
                     alpha=alpha, truncated=truncated, certified=certified,
                     hypothesis_ok=hypothesis_ok, notes=notes)

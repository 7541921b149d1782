"""Admissibility, Boyd indices, equivalence and standardization of sequences.

Positive sequences with bounded consecutive ratios d0 <= w_{j+1}/w_j <= d1
are the admissible ones; their upper/lower Boyd indices

    upper = lim_j log2(sup_k w_{j+k}/w_k) / j
    lower = lim_j log2(inf_k w_{j+k}/w_k) / j

measure extreme growth along shifted windows.  For expressions whose
structure is fully visible the indices come out exact; table-wrapped or
otherwise occluded inputs get one-sided truncated sup/inf estimates that
are widened into a two-sided interval using the certified ratio envelope.
The widening constant is calibrated so the interval contains the true
index for canonical inputs with |log exponent| <= 8 at depth >= 256.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .seqdsl import (
    Const,
    Decomposition,
    EvalOverflow,
    SequenceExpr,
    decompose,
    evaluate,
    geometric,
    log2_value,
    log_power,
    power,
    product,
    strip_tables,
    table,
    _contains_table,
)

__all__ = [
    "AdmissibilityCertificate",
    "BoydIndices",
    "EquivalenceResult",
    "AsiResult",
    "ModulusConversion",
    "StandardizationInput",
    "StandardizeError",
    "ModulusRejected",
    "certify_admissible",
    "boyd_indices",
    "boyd_indices_numeric",
    "equivalent",
    "standardize",
    "sequence_from_modulus",
    "is_almost_strongly_increasing",
]


class StandardizeError(Exception):
    pass


class ModulusRejected(Exception):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class AdmissibilityCertificate:
    """Two-sided bound on consecutive ratios over all indices.

    log2_d0/log2_d1 keep the exact exponents when the bound was proven
    structurally (then exact=True and the bound holds for every j, not just
    the scanned window).
    """

    d0: float
    d1: float
    window: int
    exact: bool
    log2_d0: Union[Fraction, float]
    log2_d1: Union[Fraction, float]

    def strongly_increasing(self) -> bool:
        return self.d0 > 1


def _ratio_log_range(d: Decomposition) -> tuple:
    """Range of log2(w_{j+1}/w_j) proven factorwise.

    Each atom's consecutive ratio moves monotonically from its j=0 value to
    its limit, so the per-factor range is the hull of those two; ranges add
    in log space across a product.
    """
    lo: Union[Fraction, float] = Fraction(0)
    hi: Union[Fraction, float] = Fraction(0)

    def add(a, b):
        nonlocal lo, hi
        if a > b:
            a, b = b, a
        if isinstance(a, Fraction) and isinstance(lo, Fraction):
            lo = lo + a
        else:
            lo = float(lo) + float(a)
        if isinstance(b, Fraction) and isinstance(hi, Fraction):
            hi = hi + b
        else:
            hi = float(hi) + float(b)

    add(d.rate, d.rate)
    if d.log_exp != 0:
        add(Fraction(0), d.log_exp)  # ratio factor ((2+j)/(1+j))^b runs from 2^b to 1
    if d.iterlog != 0:
        add(Fraction(0), d.iterlog)
    for kappa, coeff in d.explog:
        add(0.0, float(coeff) * math.log2(math.e))
    for node, expo in d.pw:
        add(node.s0 * expo, node.s1 * expo)
    return lo, hi


def certify_admissible(e: SequenceExpr, window: int = 8) -> AdmissibilityCertificate:
    """Certified (d0, d1) with d0 <= all consecutive ratios <= d1.

    window >= 8; table prefixes are always scanned in full so the returned
    bound covers every index, not only the asymptotic part.
    """
    if window < 8:
        raise ValueError("window must be >= 8")
    J = max(window, _max_prefix_len(e) + 2)
    logs = [log2_value(e, j) for j in range(J + 1)]
    ratios = [logs[j + 1] - logs[j] if isinstance(logs[j + 1], Fraction) and isinstance(logs[j], Fraction)
              else float(logs[j + 1]) - float(logs[j])
              for j in range(J)]
    wmin = min(ratios, key=float)
    wmax = max(ratios, key=float)

    d = decompose(e)
    if d.classified:
        lo, hi = _ratio_log_range(d)
        # table prefixes sit outside the structural proof; fold in the scan
        if float(wmin) < float(lo):
            lo = wmin
        if float(wmax) > float(hi):
            hi = wmax
        return AdmissibilityCertificate(
            d0=2.0 ** float(lo), d1=2.0 ** float(hi), window=J, exact=True,
            log2_d0=lo, log2_d1=hi,
        )
    return AdmissibilityCertificate(
        d0=2.0 ** float(wmin), d1=2.0 ** float(wmax), window=J, exact=False,
        log2_d0=wmin, log2_d1=wmax,
    )


def _max_prefix_len(e: SequenceExpr) -> int:
    from .seqdsl import Power, Product, Table

    if isinstance(e, Table):
        return max(len(e.prefix), _max_prefix_len(e.continuation))
    if isinstance(e, Power):
        return _max_prefix_len(e.base)
    if isinstance(e, Product):
        return max((_max_prefix_len(f) for f in e.factors), default=0)
    return 0


@dataclass(frozen=True)
class BoydIndices:
    """lower/upper are exact rationals when exact=True; the bracket fields
    are always populated (degenerate intervals in the exact case)."""

    lower: Optional[Fraction]
    upper: Optional[Fraction]
    lower_bracket: tuple
    upper_bracket: tuple
    exact: bool
    depth: int


def boyd_indices(e: SequenceExpr, depth: int = 256) -> BoydIndices:
    """Boyd indices of e, exact from structure or bracketed numerically.

    The numeric path uses truncated sup/inf over k <= depth - j, which only
    bounds the true shifted-window extremes from one side; the reported
    interval widens the estimate by 1/8 + 16*log2(depth)/depth and clips it
    to the certified ratio envelope.
    """
    if depth < 64:
        raise ValueError("depth must be >= 64")
    d = decompose(e)
    if d.classified and not _contains_table(e):
        lo, hi = d.rate_interval
        return BoydIndices(
            lower=lo, upper=hi,
            lower_bracket=(float(lo), float(lo)),
            upper_bracket=(float(hi), float(hi)),
            exact=True, depth=depth,
        )
    return boyd_indices_numeric(e, depth)


def boyd_indices_numeric(e: SequenceExpr, depth: int = 256) -> BoydIndices:
    """Window-scan bracket for the Boyd indices, bypassing the structural
    shortcut.  Used directly when an independent numeric check of an exact
    answer is wanted."""
    if depth < 64:
        raise ValueError("depth must be >= 64")
    K = depth
    logs = [float(log2_value(e, j)) for j in range(K + 1)]
    alpha_est = math.inf
    beta_est = -math.inf
    for j in (K // 4, K // 2):
        diffs = [logs[j + k] - logs[k] for k in range(K - j + 1)]
        alpha_est = min(alpha_est, max(diffs) / j)
        beta_est = max(beta_est, min(diffs) / j)
    cert = certify_admissible(e, window=min(K, 64))
    env_lo, env_hi = float(cert.log2_d0), float(cert.log2_d1)
    # slowly varying factors drift the windowed slopes by at most their
    # one-step envelope spread times log2(1+j)/j, so widening by that much
    # keeps the exact index inside the bracket for classified profiles
    j0 = K // 4
    w = 0.125 + 16.0 * math.log2(K) / K
    w += (env_hi - env_lo) * math.log2(1 + j0) / j0

    upper_bracket = (max(alpha_est - w, env_lo), min(alpha_est + w, env_hi))
    lower_bracket = (max(beta_est - w, env_lo), min(beta_est + w, env_hi, upper_bracket[1]))
    return BoydIndices(
        lower=None, upper=None,
        lower_bracket=lower_bracket,
        upper_bracket=upper_bracket,
        exact=False, depth=K,
    )


@dataclass(frozen=True)
class EquivalenceResult:
    status: str  # yes | no | undecided
    c_lower: Optional[float]
    c_upper: Optional[float]
    witness: Optional[int]
    window: int


def _diff_is_trivial(d1: Decomposition, d2: Decomposition) -> bool:
    if d1.rate != d2.rate or d1.log_exp != d2.log_exp:
        return False
    if d1.iterlog != d2.iterlog or dict(d1.explog) != dict(d2.explog):
        return False
    pw1 = {}
    for node, expo in d1.pw:
        pw1[node] = pw1.get(node, Fraction(0)) + expo
    for node, expo in d2.pw:
        pw1[node] = pw1.get(node, Fraction(0)) - expo
    return all(v == 0 for v in pw1.values())


def equivalent(e1: SequenceExpr, e2: SequenceExpr, window: int = 32) -> EquivalenceResult:
    """Decide whether e1 and e2 stay within constant factors of each other.

    yes carries band constants from the scanned window inflated by 10%; no
    carries a witness index where the ratio leaves that band.  The verdict
    itself comes from exact structure whenever both sides decompose.
    """
    J = max(window, _max_prefix_len(e1) + 2, _max_prefix_len(e2) + 2)
    qs = []
    for j in range(J):
        a, b = log2_value(e1, j), log2_value(e2, j)
        qs.append(a - b if isinstance(a, Fraction) and isinstance(b, Fraction) else float(a) - float(b))
    qmin, qmax = min(qs, key=float), max(qs, key=float)
    c_lower = 2.0 ** float(qmin) / 1.1
    c_upper = 2.0 ** float(qmax) * 1.1

    # explicit prefixes touch finitely many entries, so the structural
    # verdict belongs to the stripped tails; the band constants above
    # already cover the prefix range (J >= prefix length + 2)
    d1, d2 = decompose(strip_tables(e1)), decompose(strip_tables(e2))
    if d1.classified and d2.classified:
        if _diff_is_trivial(d1, d2):
            return EquivalenceResult("yes", c_lower, c_upper, None, J)
        witness = _escape_witness(e1, e2, float(qmin) - math.log2(1.1), float(qmax) + math.log2(1.1), J)
        if witness is not None:
            return EquivalenceResult("no", None, None, witness, J)
        return EquivalenceResult("undecided", None, None, None, J)
    witness = _escape_witness(e1, e2, float(qmin) - math.log2(1.1), float(qmax) + math.log2(1.1), J)
    if witness is not None:
        return EquivalenceResult("no", None, None, witness, J)
    return EquivalenceResult("undecided", None, None, None, J)


def _escape_witness(e1, e2, band_lo: float, band_hi: float, start: int) -> Optional[int]:
    j = max(start, 1)
    for _ in range(220):
        q = float(log2_value(e1, j)) - float(log2_value(e2, j))
        if q < band_lo or q > band_hi:
            return j
        j *= 2
    return None


@dataclass(frozen=True)
class StandardizationInput:
    sigma: SequenceExpr
    growth: SequenceExpr  # strongly increasing targets N_k
    kappa0: Optional[int] = None

    def __post_init__(self):
        cert = certify_admissible(self.growth, 8)
        if not cert.strongly_increasing():
            raise StandardizeError("growth sequence is not strongly increasing (d0 <= 1)")
        if self.kappa0 is not None:
            lam0 = cert.d0
            if lam0 ** self.kappa0 < 2 * (1 - 1e-12):
                raise StandardizeError("kappa0 too small: d0^kappa0 < 2")


def _minimal_kappa0(cert: AdmissibilityCertificate) -> int:
    lg = cert.log2_d0
    if isinstance(lg, Fraction):
        if lg <= 0:
            raise StandardizeError("growth sequence is not strongly increasing")
        # minimal kappa0 with kappa0 * log2(d0) >= 1
        return max(1, -((-lg.denominator) // lg.numerator))
    if lg <= 0:
        raise StandardizeError("growth sequence is not strongly increasing")
    return max(1, math.ceil(1.0 / lg - 1e-12))


def standardize(sigma: SequenceExpr, growth: SequenceExpr, kappa0: Optional[int] = None,
                prefix_len: Optional[int] = None) -> SequenceExpr:
    """Resample sigma along the inverse of a strongly increasing growth scale.

    Returns the sequence beta_j = sigma_{k(j)} with
    k(j) = min{k >= 0 : 2^(j-1) <= N_{k+kappa0}}, rendered as an explicit
    prefix followed by an equivalent closed-form continuation.  Requires a
    decomposable sigma and a decomposable, oscillation-free growth scale.
    """
    cert = certify_admissible(growth, 8)
    if not cert.strongly_increasing():
        raise StandardizeError("growth sequence is not strongly increasing (d0 <= 1)")
    if kappa0 is None:
        kappa0 = _minimal_kappa0(cert)
    else:
        if cert.d0 ** kappa0 < 2 * (1 - 1e-12):
            raise StandardizeError("kappa0 too small: d0^kappa0 < 2")

    if isinstance(sigma, Const):
        return sigma

    ds = decompose(sigma)
    dn = decompose(growth)
    if not ds.classified or ds.has_pw:
        raise StandardizeError("sigma must decompose into geometric/log/slowly-varying atoms")
    if not dn.classified or dn.has_pw or dn.explog or dn.iterlog != 0:
        raise StandardizeError("growth scale must be geometric with at most a log-power factor")
    lam = dn.rate
    if lam <= 0:
        raise StandardizeError("growth scale must have positive rate")

    if prefix_len is None:
        prefix_len = max(16, 4 * kappa0 + 8)

    def n_log2(k: int):
        return log2_value(growth, k)

    # k(j) is non-decreasing in j; walk both indices together
    ks = []
    k = 0
    for j in range(prefix_len + 1):
        target = j - 1
        while True:
            lg = n_log2(k + kappa0)
            ok = (lg >= target) if isinstance(lg, Fraction) else (float(lg) >= target - 1e-9)
            if ok:
                break
            k += 1
        ks.append(k)

    prefix_vals = []
    for j in range(prefix_len):
        lg = log2_value(sigma, ks[j])
        if isinstance(lg, Fraction) and lg.denominator == 1:
            n = lg.numerator
            prefix_vals.append(Fraction(2) ** n)
        else:
            prefix_vals.append(Fraction(evaluate(sigma, ks[j])))

    cont_rate = ds.rate / lam
    cont_log = ds.log_exp - ds.rate * dn.log_exp / lam
    sv_parts = ds.sv_nodes
    cont = product(geometric(cont_rate), log_power(cont_log), *sv_parts)

    # pin the continuation to the true value at the seam index
    seam_true = float(log2_value(sigma, ks[prefix_len]))
    seam_cont = float(log2_value(cont, prefix_len))
    shift = seam_true - seam_cont
    if abs(shift) > 1e-12:
        cont = product(Const(Fraction(2.0 ** shift)), cont)

    return table(prefix_vals, cont)


@dataclass(frozen=True)
class ModulusConversion:
    sequence: SequenceExpr
    certificate: AdmissibilityCertificate
    level: float  # exponent L of the polynomial envelope
    constant: float  # constant c of the envelope condition


_MODULUS_LEVEL_CAP = 64.0


def sequence_from_modulus(omega: SequenceExpr) -> ModulusConversion:
    """Convert a modulus-type function into an admissible sequence.

    omega is given in resampled form: entry j holds the value at t = 2^-j,
    t in (0,1].  The returned sequence is sigma_j = 1/omega(2^-j) together
    with a certificate d0 = c*2^-L, d1 = 2^L/c derived from the two-sided
    polynomial envelope that the conversion requires.  Inputs whose window
    ratios force L beyond the cap are rejected with a witness pair (t1,t2).
    """
    sigma = power(omega, Fraction(-1))
    for j in range(16):
        try:
            v = evaluate(sigma, j)
        except EvalOverflow:
            continue
        if not (v > 0 and math.isfinite(v)):
            raise ModulusRejected(f"modulus is not positive at t=2^-{j}")

    cert = certify_admissible(sigma, window=16)
    m, M = float(cert.log2_d0), float(cert.log2_d1)
    L = max(M, -m, 0.0)
    if L > _MODULUS_LEVEL_CAP:
        j = _extreme_ratio_index(sigma, cert.window)
        raise ModulusRejected(
            f"modulus violates the polynomial envelope (needs level {L:.3g})",
            witness=(2.0 ** -(j + 1), 2.0 ** -j),
        )
    c = 1.0
    out = AdmissibilityCertificate(
        d0=c * 2.0 ** (-L), d1=2.0 ** L / c, window=cert.window, exact=cert.exact,
        log2_d0=-L if not isinstance(cert.log2_d0, Fraction) else -_to_fraction_ceil(L),
        log2_d1=L if not isinstance(cert.log2_d1, Fraction) else _to_fraction_ceil(L),
    )
    return ModulusConversion(sequence=sigma, certificate=out, level=L, constant=c)


def _to_fraction_ceil(x: float) -> Fraction:
    return Fraction(x).limit_denominator(1 << 30)


def _extreme_ratio_index(e: SequenceExpr, window: int) -> int:
    best_j, best = 0, -1.0
    prev = float(log2_value(e, 0))
    for j in range(window):
        cur = float(log2_value(e, j + 1))
        if abs(cur - prev) > best:
            best, best_j = abs(cur - prev), j
        prev = cur
    return best_j


@dataclass(frozen=True)
class AsiResult:
    status: str  # yes | no | undecided
    boyd: BoydIndices


def is_almost_strongly_increasing(e: SequenceExpr, depth: int = 256) -> AsiResult:
    """A sequence is almost strongly increasing iff its lower Boyd index is
    positive.  Bracketed indices only ever certify yes; a bracket touching
    zero stays undecided."""
    b = boyd_indices(e, depth)
    if b.exact:
        return AsiResult("yes" if b.lower > 0 else "no", b)
    if b.lower_bracket[0] > 0:
        return AsiResult("yes", b)
    return AsiResult("undecided", b)

"""Infinite matrices with the 1/(m^2 n^2) weight, truncated to N x N.

The ambient norm is the weighted two-norm; the trace state induces the
Hilbert-Schmidt inner product as its sesquilinear form.  Finitely supported
matrices play the dense *-algebra, which has no unit (the identity fails
the finite-support condition), so requesting one raises.  Truncation growth
stands in for the infinite setting everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import MissingUnitError
from .forms import FormContext, ProbeFamily
from .rates import fit_trend, geometric_ladder, increment_growth_ratio, tends_to_zero

STABLE_RATIO = 1.0
DEFAULT_TRUNCATION = 256
MEMBERSHIP_LADDER = (16, 32, 64, 128, 256)


def weight_matrix(n: int) -> np.ndarray:
    """w[m, n] = 1/(m^2 n^2) with 1-based indices."""
    inv_sq = 1.0 / np.arange(1, n + 1, dtype=float) ** 2
    return np.outer(inv_sq, inv_sq)


@dataclass(frozen=True, eq=False)
class WeightedMatrix:
    """Truncated element of the weighted matrix space."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 2:
            raise ValueError(f"need a square matrix of size >= 2, got {a.shape}")
        object.__setattr__(self, "entries", a)

    @property
    def truncation(self) -> int:
        return self.entries.shape[0]


def _entries(a) -> np.ndarray:
    return a.entries if isinstance(a, WeightedMatrix) else np.asarray(a, dtype=complex)


def weighted_norm(a) -> float:
    """sqrt of sum 1/(m^2 n^2) |a_mn|^2."""
    m = _entries(a)
    return float(np.sqrt(np.sum(weight_matrix(m.shape[0]) * np.abs(m) ** 2)))


def hs_norm(a) -> float:
    """Plain Hilbert-Schmidt (Frobenius) norm."""
    return float(np.linalg.norm(_entries(a)))


def trace_form(a, b) -> complex:
    """The trace-state form: sum conj(b_mn) a_mn."""
    ea, eb = _entries(a), _entries(b)
    if ea.shape != eb.shape:
        raise ValueError(f"truncation mismatch: {ea.shape} vs {eb.shape}")
    return complex(np.vdot(eb, ea))


def unit_matrix(n: int = DEFAULT_TRUNCATION):
    """The identity is not finitely supported as an infinite matrix."""
    raise MissingUnitError(
        "the finite-support matrix algebra is a quasi *-algebra without unit; "
        "the identity lies outside the dense *-algebra")


def m_constant(n: int) -> tuple[float, float]:
    """Truncated value of sum 1/(m^2 n^2) with a tail bound.

    The full sum is (pi^2/6)^2; the truncation error of each factor is at
    most 1/n, giving the reported bound on the double sum.
    """
    partial = float(np.sum(1.0 / np.arange(1, n + 1, dtype=float) ** 2))
    value = partial ** 2
    zeta2 = np.pi ** 2 / 6.0
    bound = zeta2 ** 2 - (zeta2 - 1.0 / n) ** 2
    return value, float(bound)


def trace_form_context(n: int = DEFAULT_TRUNCATION) -> FormContext:
    return FormContext(
        name=f"matrix-trace[N={n}]",
        form=trace_form,
        ambient_norm=weighted_norm,
        star=lambda a: _entries(a).conj().T,
        mul=lambda a, b: _entries(a) @ _entries(b),
        unit=None)


# ---------------------------------------------------------------------------
# Probe families

def _corner(k: int, n: int) -> np.ndarray:
    a = np.zeros((n, n), dtype=complex)
    a[0, 0] = 1.0 / k
    return a


def _rank_one_decay(k: int, n: int) -> np.ndarray:
    inv = 1.0 / np.arange(1, n + 1, dtype=float)
    return (2.0 ** -float(k)) * np.outer(inv, inv).astype(complex)


def _shrinking_block(k: int, n: int) -> np.ndarray:
    a = np.zeros((n, n), dtype=complex)
    side = min(int(np.ceil(np.sqrt(k))), n)
    a[:side, :side] = 1.0 / k ** 2
    return a


def _decaying_column(k: int, n: int) -> np.ndarray:
    a = np.zeros((n, n), dtype=complex)
    a[:, 0] = 1.0 / (k * np.arange(1, n + 1, dtype=float) ** 2)
    return a


def _moving_bump(k: int, n: int) -> np.ndarray:
    a = np.zeros((n, n), dtype=complex)
    idx = min(k, n) - 1
    a[idx, idx] = 1.0
    return a


def _spreading_block(k: int, n: int) -> np.ndarray:
    a = np.zeros((n, n), dtype=complex)
    side = min(k, n)
    a[:side, :side] = 1.0 / k
    return a


# Families that are weighted-null and trace-form Cauchy: the replay must
# find limit 0 on each.
NULL_FAMILIES = {
    "scaled_corner": _corner,
    "rank_one_decay": _rank_one_decay,
    "shrinking_block": _shrinking_block,
    "decaying_column": _decaying_column,
}

# Weighted-null families whose trace-form steps stay bounded below; the
# replay must flag them as not form-Cauchy (which is consistent with
# closability, not a counterexample).
NON_CAUCHY_FAMILIES = {
    "moving_bump": _moving_bump,
    "spreading_block": _spreading_block,
}


def matrix_family(name: str, n: int = DEFAULT_TRUNCATION) -> ProbeFamily:
    table = {**NULL_FAMILIES, **NON_CAUCHY_FAMILIES}
    if name not in table:
        raise KeyError(f"unknown matrix family {name!r}; "
                       f"choose from {sorted(table)}")
    gen = table[name]
    return ProbeFamily(name=name, generate=lambda k: gen(int(k), n))


@dataclass(frozen=True)
class ReplayVerdict:
    family: str
    weighted_null: bool
    hs_cauchy: bool
    a: float | None           # limit of the form diagonal, when Cauchy
    entry_sup_limit: float | None
    counterexample: bool
    rows: list  # (k, weighted_norm, hs_sq, step, eq6_residual)

    def table(self):
        header = ["k", "weighted_norm", "hs_norm", "pairwise_residual",
                  "recentered_residual"]
        return header, [[int(k), float(w), float(np.sqrt(h)), float(s), float(e)]
                        for k, w, h, s, e in self.rows]


def matrix_closability_replay(family, n: int = DEFAULT_TRUNCATION,
                              k_max: int | None = None,
                              points: int = 16) -> ReplayVerdict:
    """Replay the closability argument for the trace form at truncation N.

    For a weighted-null family the Hilbert-Schmidt Cauchy property forces
    the diagonal values to a limit a, and the per-entry decay forces a = 0;
    families that are not Hilbert-Schmidt Cauchy are reported as such (no
    verdict on the limit, no counterexample).
    """
    if isinstance(family, str):
        family = matrix_family(family, n)
    k_max = k_max or n
    ks = geometric_ladder(k_max, points=points)
    mats = [family.generate(int(k)) for k in ks]

    weighted = np.array([weighted_norm(m) for m in mats])
    diag = np.array([float(np.real(trace_form(m, m))) for m in mats])
    steps = np.zeros(len(ks))
    for i in range(1, len(ks)):
        d = mats[i] - mats[i - 1]
        steps[i] = float(np.real(trace_form(d, d)))

    weighted_null = tends_to_zero(ks, weighted, 1e-6)
    cauchy = tends_to_zero(ks[1:], steps[1:], 1e-8)
    a = None
    entry_limit = None
    if cauchy:
        fit = fit_trend(ks, diag)
        a = fit.limit if np.isfinite(fit.limit) else float(diag[-1])
        sup = np.array([float(np.max(np.abs(m))) for m in mats])
        sup_fit = fit_trend(ks, sup)
        entry_limit = sup_fit.limit if np.isfinite(sup_fit.limit) else float(sup[-1])
    rows = []
    for i, k in enumerate(ks):
        eq6 = abs(diag[i] - (a if a is not None else diag[-1]))
        rows.append((int(k), weighted[i], diag[i], steps[i], eq6))
    counterexample = bool(weighted_null and cauchy and a is not None and a > 1e-6)
    return ReplayVerdict(family=family.name, weighted_null=bool(weighted_null),
                         hs_cauchy=bool(cauchy), a=a,
                         entry_sup_limit=entry_limit,
                         counterexample=counterexample, rows=rows)


# ---------------------------------------------------------------------------
# Identification of the closure domain

# Entry rules (m, n are 1-based index arrays) with their analytic
# Hilbert-Schmidt classification.  Rules whose divergence only shows at
# astronomically large truncations (single-log growth) are deliberately
# absent: the doubling test cannot see them at desk scale.
ENTRY_RULES = {
    "inverse_product": (lambda m, n: 1.0 / (m * n), True),
    "inverse_sqrt_product": (lambda m, n: 1.0 / np.sqrt(m * n), False),
    "finite_support": (lambda m, n: ((m <= 2) & (n <= 3)).astype(float), True),
    "inverse_sum_square": (lambda m, n: 1.0 / (m + n) ** 2, True),
    "exp_decay": (lambda m, n: np.exp(-(m + n)), True),
    "row_harmonic": (lambda m, n: 1.0 / m + 0.0 * n, False),
}


@dataclass(frozen=True)
class DomainVerdict:
    rule: str
    member: bool
    oracle_member: bool
    growth_ratio: float

    @property
    def agrees(self) -> bool:
        return self.member == self.oracle_member


def _rule_matrix(rule, n: int) -> np.ndarray:
    idx = np.arange(1, n + 1, dtype=float)
    return np.asarray(rule(idx[:, None], idx[None, :]), dtype=complex)


def d_omega_identification(rules: dict | None = None,
                           truncations=MEMBERSHIP_LADDER) -> list:
    """Membership of the form-closure domain by truncation-stable HS norms.

    The domain coincides with the Hilbert-Schmidt space, so membership of
    an entry rule is decided by whether its HS sums stabilise as the
    truncation doubles, and compared against the analytic classification.
    """
    rules = rules or ENTRY_RULES
    verdicts = []
    for name, (rule, oracle) in rules.items():
        sums = [float(np.sum(np.abs(_rule_matrix(rule, n)) ** 2))
                for n in truncations]
        ratio = increment_growth_ratio(sums)
        verdicts.append(DomainVerdict(rule=name, member=ratio < STABLE_RATIO,
                                      oracle_member=oracle,
                                      growth_ratio=ratio))
    return verdicts

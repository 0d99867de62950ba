"""Operator topologies on truncated domains and extension by closure.

Operators between a truncated domain and its dual proxy are plain matrices
in coordinates orthonormal for the Hilbert inner product; the dual pairing
is the coordinate sesquilinear sum, and polynomially growing coefficient
vectors stand in for distributions.  Four topologies are realised as
seminorm families over finite bounded sets: uniform sup |<A phi, psi>| over
M x M, strong sup over psi in M for a fixed phi, strong* adding the
adjoint, weak a single matrix element.  Verdicts are always relative to
the finite suite in use.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .forms import ProbeFamily
from .rates import fit_trend, geometric_ladder, tends_to_zero

TOPOLOGIES = ("uniform", "strong", "strongstar", "weak")
CAUCHY_REL_TOL = 1e-8
LIMIT_SEMINORM_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class TruncatedTriple:
    """Truncation of a rigged triple: domain, Hilbert space, dual proxy.

    Coordinates are orthonormal for the Hilbert inner product unless an
    explicit inner_product matrix is supplied.  graph_weights realise the
    graph-topology seminorms |w^k . v| and must be >= 1 (the generating
    operator is normalised to H >= 1); the dual proxy uses the inverse
    weights, so coefficient vectors with polynomial growth have finite
    dual seminorms.
    """

    dim: int
    graph_weights: np.ndarray
    inner_product: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        w = np.asarray(self.graph_weights, dtype=float)
        if w.shape != (self.dim,):
            raise ValueError(f"need {self.dim} graph weights, got {w.shape}")
        if np.any(w < 1.0 - 1e-12):
            raise ValueError("graph weights must be >= 1")
        object.__setattr__(self, "graph_weights", w)
        if self.inner_product is not None:
            m = np.asarray(self.inner_product, dtype=complex)
            if m.shape != (self.dim, self.dim):
                raise ValueError("inner product matrix has wrong shape")
            if np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0] <= 0:
                raise ValueError("inner product must be positive definite")
            object.__setattr__(self, "inner_product", m)

    def norm(self, v) -> float:
        v = np.asarray(v, dtype=complex)
        if self.inner_product is None:
            return float(np.linalg.norm(v))
        return float(np.sqrt(np.real(np.vdot(v, self.inner_product @ v))))

    def graph_norm(self, v, k: int) -> float:
        return self.norm(self.graph_weights ** k * np.asarray(v))

    def dual_norm(self, u, k: int) -> float:
        return self.norm(np.asarray(u) / self.graph_weights ** k)


class TruncatedOperator:
    """Matrix acting from the truncated domain into its dual proxy."""

    __slots__ = ("matrix", "_adjoint")

    def __init__(self, matrix):
        self.matrix = np.asarray(matrix, dtype=complex)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError(f"operator matrix must be square, got {self.matrix.shape}")
        self._adjoint = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def adjoint_matrix(self) -> np.ndarray:
        if self._adjoint is None:
            self._adjoint = self.matrix.conj().T
        return self._adjoint

    def adjoint(self) -> "TruncatedOperator":
        return TruncatedOperator(self.adjoint_matrix)

    def __sub__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        if self.dim != other.dim:
            raise ValueError("truncation dimensions differ")
        return TruncatedOperator(self.matrix - other.matrix)

    def __add__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        if self.dim != other.dim:
            raise ValueError("truncation dimensions differ")
        return TruncatedOperator(self.matrix + other.matrix)

    def apply(self, v) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=complex)


@dataclass(frozen=True, eq=False)
class BoundedSet:
    """Finite stand-in for a bounded subset of the domain."""

    vectors: tuple
    name: str = "M"

    def __post_init__(self):
        vecs = tuple(np.asarray(v, dtype=complex) for v in self.vectors)
        if not vecs:
            raise ValueError("bounded set must contain at least one vector")
        object.__setattr__(self, "vectors", vecs)

    def stack(self) -> np.ndarray:
        return np.stack(self.vectors)


def pairing(u, psi) -> complex:
    """Dual pairing <u, psi> of a dual-proxy vector against a domain vector."""
    return complex(np.vdot(np.asarray(psi, dtype=complex), np.asarray(u)))


def seminorm(a: TruncatedOperator, topology: str, m: BoundedSet | None = None,
             phi=None, psi=None) -> float:
    """Topology seminorm of one operator.

    uniform needs m; strong and strongstar need m and phi; weak needs phi
    and psi.
    """
    if topology == "uniform":
        if m is None:
            raise ValueError("uniform seminorm needs a bounded set")
        vecs = m.stack()
        grid = vecs.conj() @ a.matrix @ vecs.T  # [psi index, phi index]
        return float(np.max(np.abs(grid)))
    if topology == "strong":
        if m is None or phi is None:
            raise ValueError("strong seminorm needs a bounded set and a vector")
        img = a.apply(phi)
        return float(np.max(np.abs(m.stack().conj() @ img)))
    if topology == "strongstar":
        if m is None or phi is None:
            raise ValueError("strong* seminorm needs a bounded set and a vector")
        return max(seminorm(a, "strong", m, phi),
                   seminorm(a.adjoint(), "strong", m, phi))
    if topology == "weak":
        if phi is None or psi is None:
            raise ValueError("weak seminorm needs two vectors")
        return abs(pairing(a.apply(phi), psi))
    raise ValueError(f"unknown topology {topology!r}; expected one of {TOPOLOGIES}")


def strongstar_hilbert_seminorm(a: TruncatedOperator, f) -> float:
    """max(|A f|, |A' f|) with the Hilbert norm; the strong* seminorm used
    for operators mapping the domain into the Hilbert space itself."""
    f = np.asarray(f, dtype=complex)
    return max(float(np.linalg.norm(a.matrix @ f)),
               float(np.linalg.norm(a.adjoint_matrix @ f)))


def eta_seminorm(ambient_value: float, operator_value: float) -> float:
    """Seminorm of the extension domain: ambient seminorm plus operator
    seminorm of the image; monotone under refinement of either family."""
    return float(ambient_value) + float(operator_value)


# ---------------------------------------------------------------------------
# Seminorm suites

Suite = Sequence[tuple[str, Callable[[TruncatedOperator], float]]]


def default_bounded_sets(triple: TruncatedTriple, ks=(0, 1, 2),
                         n_vectors: int = 8, seed: int = 0) -> list[BoundedSet]:
    """Sampled graph-norm balls: n_vectors random vectors scaled onto the
    unit sphere of each graph seminorm."""
    rng = np.random.default_rng(seed)
    sets = []
    for k in ks:
        vecs = []
        for _ in range(n_vectors):
            v = rng.standard_normal(triple.dim) + 1j * rng.standard_normal(triple.dim)
            vecs.append(v / triple.graph_norm(v, k))
        sets.append(BoundedSet(tuple(vecs), name=f"ball-k{k}"))
    return sets


def suite_from_bounded_sets(topology: str, bounded_sets,
                            phis=None, weak_pairs=None) -> list:
    """Named seminorm evaluators for a topology over finite test data.

    phis: (label, vector) pairs for strong/strong*; weak_pairs: (label,
    phi, psi) triples for the weak topology.
    """
    suite = []
    if topology == "uniform":
        for m in bounded_sets:
            suite.append((f"uniform|{m.name}",
                          lambda a, m=m: seminorm(a, "uniform", m)))
    elif topology in ("strong", "strongstar"):
        if not phis:
            raise ValueError(f"{topology} suite needs test vectors")
        for m in bounded_sets:
            for label, phi in phis:
                suite.append((f"{topology}|{m.name}|{label}",
                              lambda a, m=m, phi=phi, t=topology:
                              seminorm(a, t, m, phi)))
    elif topology == "weak":
        if not weak_pairs:
            raise ValueError("weak suite needs vector pairs")
        for label, phi, psi in weak_pairs:
            suite.append((f"weak|{label}",
                          lambda a, phi=phi, psi=psi:
                          seminorm(a, "weak", phi=phi, psi=psi)))
    else:
        raise ValueError(f"unknown topology {topology!r}")
    return suite


def hilbert_strongstar_suite(phis) -> list:
    """Strong* seminorms against the Hilbert norm for each test vector."""
    return [(f"ss|{label}",
             lambda a, f=f: strongstar_hilbert_seminorm(a, f))
            for label, f in phis]


# ---------------------------------------------------------------------------
# Extension by closure

@dataclass(frozen=True)
class MembershipVerdict:
    ambient_limit: bool
    operator_cauchy: bool
    domain: str  # "A", "Atilde" or "none"


@dataclass(frozen=True)
class ExtensionResult:
    converged: bool
    limit: TruncatedOperator | None
    topology: str
    membership: MembershipVerdict
    seminorm_names: tuple
    residual_trace: np.ndarray   # (steps-1, n_seminorms)
    ambient_residuals: np.ndarray
    scales: np.ndarray

    def trace_table(self) -> tuple[list[str], list[list[float]]]:
        header = ["step"] + list(self.seminorm_names) + ["ambient"]
        rows = []
        for k in range(self.residual_trace.shape[0]):
            rows.append([k + 1] + [float(x) for x in self.residual_trace[k]]
                        + [float(self.ambient_residuals[k])])
        return header, rows


def extend_by_closure(ambient_norm, element_seq, rep_seq, topology: str,
                      m_suite=None, *, phis=None, weak_pairs=None,
                      suite: Suite | None = None,
                      space_complete: bool = False,
                      steps=None) -> ExtensionResult:
    """Drive one approximating sequence through the closure engine.

    element_seq are ambient elements carrying the tau-norms, rep_seq their
    representatives at a common truncation.  The run converges when every
    seminorm in the suite has Cauchy residuals that vanish (hard threshold
    relative to the largest seminorm seen, or clear power-law decay).  The
    membership verdict distinguishes the extension domain reached: the
    Cauchy domain when the operator space is not complete for the chosen
    topology, the full extension domain when it is.
    """
    rep_seq = list(rep_seq)
    element_seq = list(element_seq)
    if not rep_seq:
        raise ValueError("empty representative sequence")
    if len(element_seq) != len(rep_seq):
        raise ValueError("element and representative sequences differ in length")
    dims = {op.dim for op in rep_seq}
    if len(dims) != 1:
        raise ValueError(f"inconsistent truncation dims {sorted(dims)}")
    if suite is None:
        if topology == "weak":
            suite = suite_from_bounded_sets(topology, [], weak_pairs=weak_pairs)
        else:
            suite = suite_from_bounded_sets(topology, m_suite or [], phis=phis)
    if not suite:
        raise ValueError("empty seminorm suite")

    names = tuple(name for name, _ in suite)
    n_steps = len(rep_seq)
    if steps is None:
        steps = np.arange(1, n_steps + 1)
    steps = np.asarray(steps, dtype=float)

    values = np.array([[fn(op) for _, fn in suite] for op in rep_seq])
    residuals = np.array([[fn(rep_seq[k] - rep_seq[k - 1]) for _, fn in suite]
                          for k in range(1, n_steps)])
    scales = np.maximum(values.max(axis=0), 1e-300)

    converged = n_steps >= 3 and all(
        tends_to_zero(steps[1:], residuals[:, i], CAUCHY_REL_TOL * scales[i])
        for i in range(len(suite)))

    ambient_res = np.array([ambient_norm(element_seq[k] - element_seq[k - 1])
                            for k in range(1, n_steps)])
    ambient_scale = max(float(np.max(np.abs(ambient_res))), 1e-300)
    ambient_cauchy = n_steps >= 3 and tends_to_zero(
        steps[1:], ambient_res, CAUCHY_REL_TOL * max(ambient_scale, 1.0))

    if converged and ambient_cauchy:
        domain = "A" if space_complete else "Atilde"
    else:
        domain = "none"
    membership = MembershipVerdict(ambient_limit=ambient_cauchy,
                                   operator_cauchy=converged, domain=domain)
    limit = rep_seq[-1] if converged else None
    return ExtensionResult(converged=converged, limit=limit, topology=topology,
                           membership=membership, seminorm_names=names,
                           residual_trace=residuals,
                           ambient_residuals=ambient_res, scales=scales)


# ---------------------------------------------------------------------------
# Closability of the representation

@dataclass(frozen=True)
class ClosabilityVerdict:
    family: str
    tau_null: bool
    rep_cauchy: bool
    limit_seminorm: float
    limit_extrapolated: float
    counterexample: bool


def closability_check(null_families, rep_map, topology: str | None = None,
                      *, suite: Suite, ambient_norm=None, n_max: int = 256,
                      points: int = 16,
                      limit_tol: float = LIMIT_SEMINORM_TOL) -> list:
    """Hunt for families that are ambient-null with a nonzero operator limit.

    Each family must tau-converge to 0 (closed-form norms preferred).  A
    family whose representatives are suite-Cauchy and whose limit operator
    has a seminorm bounded away from 0 is a closability counterexample.
    """
    verdicts = []
    for family in null_families:
        fam = family if isinstance(family, ProbeFamily) else ProbeFamily(
            name=getattr(family, "__name__", "family"), generate=family)
        ns = geometric_ladder(n_max, points=points)
        elements = [fam.generate(int(n)) for n in ns]
        if fam.tau_norm is not None:
            tau = np.array([fam.tau_norm(int(n)) for n in ns])
        elif ambient_norm is not None:
            tau = np.array([ambient_norm(x) for x in elements])
        else:
            raise ValueError(f"family {fam.name} carries no ambient norm")
        tau_null = tends_to_zero(ns, tau, 1e-6)

        ops = [rep_map(x) for x in elements]
        values = np.array([[fn(op) for _, fn in suite] for op in ops])
        scales = np.maximum(values.max(axis=0), 1e-300)
        residuals = np.array([[fn(ops[k] - ops[k - 1]) for _, fn in suite]
                              for k in range(1, len(ops))])
        cauchy = all(tends_to_zero(ns[1:], residuals[:, i],
                                   CAUCHY_REL_TOL * scales[i])
                     for i in range(len(suite)))
        worst = values.max(axis=1)
        fit = fit_trend(ns, worst)
        extrapolated = fit.limit if np.isfinite(fit.limit) else float(worst[-1])
        verdicts.append(ClosabilityVerdict(
            family=fam.name, tau_null=tau_null, rep_cauchy=cauchy,
            limit_seminorm=float(worst[-1]), limit_extrapolated=extrapolated,
            counterexample=bool(tau_null and cauchy and extrapolated > limit_tol)))
    return verdicts


# ---------------------------------------------------------------------------
# Quasi *-algebra structure of the extension domain

@dataclass(frozen=True)
class ClosureStabilityReport:
    right_multiplication: list  # (sample, shift, cauchy) tuples
    involution: list            # (sample, cauchy) tuples, empty when skipped
    involution_skipped: bool
    bounded_rep_norm: float | None
    all_stable: bool


def quasi_algebra_closure_test(extension_samples, a_o_elements, rep_map,
                               mul, topology: str, *, suite: Suite,
                               star=None, n_max: int = 256,
                               points: int = 12) -> ClosureStabilityReport:
    """Stability of the extension domain under right multiplication and *.

    extension_samples are approximating families for domain elements; for
    each sample X and each element B of the dense algebra, the family
    n -> X_n B must again have suite-Cauchy representatives.  Involution
    stability is checked unless the topology is the strong one, for which
    the involution is not continuous and the check is skipped and flagged.
    """
    ns = geometric_ladder(n_max, points=points)

    def _is_cauchy(ops):
        values = np.array([[fn(op) for _, fn in suite] for op in ops])
        scales = np.maximum(values.max(axis=0), 1e-300)
        residuals = np.array([[fn(ops[k] - ops[k - 1]) for _, fn in suite]
                              for k in range(1, len(ops))])
        return all(tends_to_zero(ns[1:], residuals[:, i],
                                 CAUCHY_REL_TOL * scales[i])
                   for i in range(len(suite)))

    right = []
    for fam in extension_samples:
        elements = [fam.generate(int(n)) for n in ns]
        for label, b in a_o_elements:
            shifted_ops = [rep_map(mul(x, b)) for x in elements]
            right.append((fam.name, label, _is_cauchy(shifted_ops)))

    involution = []
    skipped = topology == "strong"
    if not skipped:
        if star is None:
            raise ValueError("involution check needs a star operation")
        for fam in extension_samples:
            starred_ops = [rep_map(star(fam.generate(int(n)))) for n in ns]
            involution.append((fam.name, _is_cauchy(starred_ops)))

    bounded = None
    if a_o_elements:
        bounded = max(float(np.linalg.norm(rep_map(b).matrix, 2))
                      for _, b in a_o_elements)

    all_stable = (all(flag for _, _, flag in right)
                  and all(flag for _, flag in involution))
    return ClosureStabilityReport(right_multiplication=right,
                                  involution=involution,
                                  involution_skipped=skipped,
                                  bounded_rep_norm=bounded,
                                  all_stable=all_stable)

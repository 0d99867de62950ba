"""Finite *-algebras presented by structure constants, with states.

An algebra lives on a fixed basis e_0 .. e_{d-1}; the product is a rank-3
tensor c with e_i e_j = sum_k c[i, j, k] e_k, and the involution a matrix S
with (e_i)* = sum_j S[i, j] e_j.  Matrix algebras, the scalars and cyclic
group algebras are all loadable from this one presentation.  A unit is
optional: algebras without one are supported, and operations that need the
unit fail explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ASSOCIATIVITY_TOL = 1e-12
POSITIVITY_TOL = 1e-10


class AlgebraError(ValueError):
    """Base class for algebra construction and operation failures."""


class DimensionMismatchError(AlgebraError):
    """Operands do not belong to the same algebra."""


class MissingUnitError(AlgebraError):
    """Operation requires a unit, but the algebra has none."""


class NonPositiveStateError(AlgebraError):
    """A state failed positivity; carries the offending eigenvalue."""

    def __init__(self, eigenvalue: float):
        super().__init__(f"state is not positive: Gram eigenvalue {eigenvalue:.3e}")
        self.eigenvalue = eigenvalue


@dataclass(frozen=True, eq=False)
class StarAlgebra:
    """*-algebra on a finite basis given by structure constants.

    structure[i, j, k] is the coefficient of e_k in e_i e_j; involution[i, j]
    the coefficient of e_j in (e_i)*; unit the coefficient vector of the
    identity, or None for algebras without unit.
    """

    structure: np.ndarray
    involution: np.ndarray
    unit: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        c = np.asarray(self.structure, dtype=complex)
        s = np.asarray(self.involution, dtype=complex)
        d = c.shape[0]
        if c.shape != (d, d, d):
            raise AlgebraError(f"structure tensor must be cubic, got {c.shape}")
        if s.shape != (d, d):
            raise AlgebraError(f"involution matrix must be {d}x{d}, got {s.shape}")
        object.__setattr__(self, "structure", c)
        object.__setattr__(self, "involution", s)
        if self.unit is not None:
            u = np.asarray(self.unit, dtype=complex)
            if u.shape != (d,):
                raise AlgebraError(f"unit must have length {d}, got {u.shape}")
            object.__setattr__(self, "unit", u)

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    @property
    def has_unit(self) -> bool:
        return self.unit is not None

    def element(self, coeffs) -> "AlgebraElement":
        return AlgebraElement(self, np.asarray(coeffs, dtype=complex))

    def basis_element(self, i: int) -> "AlgebraElement":
        coeffs = np.zeros(self.dim, dtype=complex)
        coeffs[i] = 1.0
        return self.element(coeffs)

    def unit_element(self) -> "AlgebraElement":
        if self.unit is None:
            raise MissingUnitError(
                f"algebra {self.name or '<anonymous>'} has no unit "
                "(quasi *-algebra without unit)")
        return self.element(self.unit)

    def left_multiplier(self, coeffs) -> np.ndarray:
        """Matrix of x -> a x on coefficient space for a with given coeffs."""
        a = np.asarray(coeffs, dtype=complex)
        # (a x)_k = sum_{i,j} a_i x_j c[i,j,k]
        return np.einsum("i,ijk->kj", a, self.structure)

    def structure_report(self) -> dict:
        """Residuals of the algebra axioms; all should be at round-off."""
        c, s = self.structure, self.involution
        lhs = np.einsum("ijm,mkl->ijkl", c, c)
        rhs = np.einsum("jkm,iml->ijkl", c, c)
        assoc = float(np.max(np.abs(lhs - rhs)))
        invol = float(np.max(np.abs(s @ s.conj() - np.eye(self.dim))))
        # (e_i e_j)* = (e_j)* (e_i)*, expanded through structure constants.
        star_of_prod = np.einsum("ijk,kl->ijl", c.conj(), s)
        prod_of_stars = np.einsum("jk,il,klm->ijm", s, s, c)
        anti = float(np.max(np.abs(star_of_prod - prod_of_stars)))
        report = {"associativity": assoc, "involution": invol,
                  "anti_automorphism": anti}
        if self.unit is not None:
            left = np.einsum("i,ijk->jk", self.unit, c)
            right = np.einsum("j,ijk->ik", self.unit, c)
            report["unit_law"] = float(
                max(np.max(np.abs(left - np.eye(self.dim))),
                    np.max(np.abs(right - np.eye(self.dim)))))
        else:
            report["unit_law"] = None
        return report

    def validate(self, tol: float = ASSOCIATIVITY_TOL) -> None:
        report = self.structure_report()
        for key, value in report.items():
            if value is not None and value > tol:
                raise AlgebraError(f"{key} residual {value:.3e} exceeds {tol:.1e}")


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    algebra: StarAlgebra
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.shape != (self.algebra.dim,):
            raise DimensionMismatchError(
                f"coefficient vector of length {coeffs.shape} does not match "
                f"algebra dimension {self.algebra.dim}")
        object.__setattr__(self, "coeffs", coeffs)

    def _check_same(self, other: "AlgebraElement") -> None:
        if self.algebra is not other.algebra:
            raise DimensionMismatchError("elements belong to different algebras")

    def __add__(self, other):
        self._check_same(other)
        return AlgebraElement(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check_same(other)
        return AlgebraElement(self.algebra, self.coeffs - other.coeffs)

    def __rmul__(self, scalar):
        return AlgebraElement(self.algebra, complex(scalar) * self.coeffs)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return AlgebraElement(self.algebra, complex(other) * self.coeffs)

    def __neg__(self):
        return AlgebraElement(self.algebra, -self.coeffs)

    def star(self) -> "AlgebraElement":
        return star(self)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Product through the structure constants."""
    a._check_same(b)
    coeffs = np.einsum("i,j,ijk->k", a.coeffs, b.coeffs, a.algebra.structure)
    return AlgebraElement(a.algebra, coeffs)


def star(a: AlgebraElement) -> AlgebraElement:
    """Involution: antilinear extension of the basis involution."""
    coeffs = a.algebra.involution.T @ a.coeffs.conj()
    return AlgebraElement(a.algebra, coeffs)


@dataclass(frozen=True, eq=False)
class State:
    """Linear functional on the algebra, stored as values on the basis."""

    values: np.ndarray
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex))

    def __call__(self, a: AlgebraElement) -> complex:
        return evaluate_state(self, a)

    def hermiticity_residual(self, algebra: StarAlgebra) -> float:
        """max_i |omega(e_i*) - conj(omega(e_i))|."""
        starred = algebra.involution @ self.values
        return float(np.max(np.abs(starred - self.values.conj())))

    def gram(self, algebra: StarAlgebra) -> np.ndarray:
        """G[i, j] = omega(e_i* e_j)."""
        s, c = algebra.involution, algebra.structure
        return np.einsum("ik,kjl,l->ij", s, c, self.values)

    def is_normalized(self, algebra: StarAlgebra, tol: float = 1e-10) -> bool:
        if not algebra.has_unit:
            return False
        return abs(complex(np.dot(self.values, algebra.unit)) - 1.0) <= tol

    def check_positive(self, algebra: StarAlgebra,
                       tol: float = POSITIVITY_TOL) -> np.ndarray:
        """Return the Gram matrix, raising if it is not Hermitian PSD."""
        g = self.gram(algebra)
        herm = float(np.max(np.abs(g - g.conj().T)))
        if herm > tol:
            raise NonPositiveStateError(herm)
        eigs = np.linalg.eigvalsh(0.5 * (g + g.conj().T))
        if eigs[0] < -tol:
            raise NonPositiveStateError(float(eigs[0]))
        return g


def evaluate_state(state: State, a: AlgebraElement) -> complex:
    if state.values.shape != a.coeffs.shape:
        raise DimensionMismatchError("state and element dimensions differ")
    return complex(np.dot(state.values, a.coeffs))


# ---------------------------------------------------------------------------
# Builders for the stock test algebras.

def matrix_unit_algebra(n: int) -> StarAlgebra:
    """M_n(C) on the matrix-unit basis E_{rc}, flattened as i = n*r + c."""
    d = n * n
    c = np.zeros((d, d, d), dtype=complex)
    s = np.zeros((d, d), dtype=complex)
    for r in range(n):
        for col in range(n):
            i = n * r + col
            s[i, n * col + r] = 1.0  # (E_{rc})* = E_{cr}
            for r2 in range(n):
                for c2 in range(n):
                    j = n * r2 + c2
                    if col == r2:  # E_{rc} E_{c c2} = E_{r c2}
                        c[i, j, n * r + c2] = 1.0
    unit = np.zeros(d, dtype=complex)
    for r in range(n):
        unit[n * r + r] = 1.0
    return StarAlgebra(c, s, unit, name=f"M{n}")


def cyclic_group_algebra(k: int) -> StarAlgebra:
    """Group algebra of Z_k: g_i g_j = g_{i+j mod k}, (g_i)* = g_{-i mod k}."""
    c = np.zeros((k, k, k), dtype=complex)
    s = np.zeros((k, k), dtype=complex)
    for i in range(k):
        s[i, (-i) % k] = 1.0
        for j in range(k):
            c[i, j, (i + j) % k] = 1.0
    unit = np.zeros(k, dtype=complex)
    unit[0] = 1.0
    return StarAlgebra(c, s, unit, name=f"C[Z{k}]")


def scalar_algebra() -> StarAlgebra:
    """The complex numbers as a one-dimensional *-algebra."""
    c = np.ones((1, 1, 1), dtype=complex)
    s = np.ones((1, 1), dtype=complex)
    return StarAlgebra(c, s, np.ones(1, dtype=complex), name="C")


def nilpotent_line_algebra() -> StarAlgebra:
    """One self-adjoint generator with e*e = 0; a *-algebra without unit."""
    c = np.zeros((1, 1, 1), dtype=complex)
    s = np.ones((1, 1), dtype=complex)
    return StarAlgebra(c, s, None, name="nil")


def normalized_trace_state(n: int) -> State:
    """tr/n on M_n in matrix-unit coordinates."""
    values = np.zeros(n * n, dtype=complex)
    for r in range(n):
        values[n * r + r] = 1.0 / n
    return State(values, name=f"tr/{n}")


def corner_state(n: int) -> State:
    """The vector state A -> A_{00} on M_n."""
    values = np.zeros(n * n, dtype=complex)
    values[0] = 1.0
    return State(values, name="corner")


def group_trace_state(k: int) -> State:
    """omega(g_j) = delta_{j0} on C[Z_k]; its Gram matrix is the identity."""
    values = np.zeros(k, dtype=complex)
    values[0] = 1.0
    return State(values, name="group-trace")


def group_character_state(k: int) -> State:
    """The trivial character omega(g_j) = 1; rank-one Gram matrix."""
    return State(np.ones(k, dtype=complex), name="trivial-character")

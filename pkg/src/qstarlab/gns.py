"""GNS construction from a state on a finite *-algebra.

The quotient of the algebra by the null ideal of the state is realised
through an eigendecomposition of the Gram matrix G[i, j] = omega(e_i* e_j):
eigenvectors above the rank threshold give an orthonormal basis of the
quotient, the kernel spans the null ideal in coordinates.  Representation
matrices act on quotient coordinates; the class of the unit is the cyclic
vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (AlgebraElement, MissingUnitError, StarAlgebra, State,
                      evaluate_state)

RANK_TOL = 1e-10  # relative to the largest Gram eigenvalue
RESIDUAL_TOL = 1e-10


def build_gram(algebra: StarAlgebra, state: State) -> np.ndarray:
    """Gram matrix of the state; raises NonPositiveStateError when indefinite.

    Its kernel spans the null ideal {a : omega(a* a) = 0} in coordinates.
    """
    return state.check_positive(algebra)


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    fixed = vectors.copy()
    for k in range(fixed.shape[1]):
        col = fixed[:, k]
        pivot = int(np.argmax(np.abs(col)))
        val = col[pivot]
        if abs(val) > 0:
            fixed[:, k] = col * (abs(val) / val)
    return fixed


@dataclass(frozen=True, eq=False)
class GNSRep:
    """Representation data on the quotient pre-Hilbert space.

    quotient_basis columns are algebra coefficient vectors whose classes
    form an orthonormal basis of the quotient; projection maps algebra
    coordinates to quotient coordinates; rep_matrices[i] is the action of
    the i-th basis element; cyclic_vector the class of the unit.
    """

    algebra: StarAlgebra
    state: State
    gram: np.ndarray
    quotient_basis: np.ndarray  # (dim, rank)
    projection: np.ndarray      # (rank, dim)
    rep_matrices: np.ndarray    # (dim, rank, rank)
    cyclic_vector: np.ndarray   # (rank,)
    rank: int

    def vector(self, a: AlgebraElement) -> np.ndarray:
        """Quotient coordinates of the class of a."""
        return self.projection @ a.coeffs

    def represent(self, a: AlgebraElement) -> np.ndarray:
        """Matrix of the class action of a, by linearity in the basis."""
        return np.einsum("i,ijk->jk", a.coeffs, self.rep_matrices)


def gns_construct(algebra: StarAlgebra, state: State, *,
                  eigen_order: str = "descending") -> GNSRep:
    """Build the cyclic representation defined by a normalized state.

    eigen_order only changes the orthonormalization pivoting ("descending"
    or "ascending" eigenvalue order); the resulting representations are
    unitarily equivalent, which the test suite checks through the map
    a -> <class(unit), pi(a) class(unit)>.
    """
    unit = algebra.unit_element()  # raises MissingUnitError when absent
    if abs(evaluate_state(state, unit) - 1.0) > 1e-8:
        raise ValueError("state is not normalized: omega(I) != 1")
    gram = build_gram(algebra, state)

    eigvals, eigvecs = np.linalg.eigh(0.5 * (gram + gram.conj().T))
    order = np.argsort(eigvals)[::-1]
    eigvals, eigvecs = eigvals[order], eigvecs[:, order]
    rank = int(np.sum(eigvals > RANK_TOL * max(eigvals[0], 0.0)))
    if rank == 0:
        raise ValueError("state Gram matrix has numerical rank 0")
    kept = slice(0, rank)
    vals, vecs = eigvals[kept], _fix_phases(eigvecs[:, kept])
    if eigen_order == "ascending":
        vals, vecs = vals[::-1], vecs[:, ::-1]
    elif eigen_order != "descending":
        raise ValueError(f"unknown eigen_order {eigen_order!r}")

    scale = np.sqrt(vals)
    quotient_basis = vecs / scale[np.newaxis, :]
    projection = scale[:, np.newaxis] * vecs.conj().T

    rep_matrices = np.empty((algebra.dim, rank, rank), dtype=complex)
    for i in range(algebra.dim):
        m_i = algebra.left_multiplier(algebra.basis_element(i).coeffs)
        rep_matrices[i] = projection @ m_i @ quotient_basis

    cyclic = projection @ algebra.unit
    return GNSRep(algebra=algebra, state=state, gram=gram,
                  quotient_basis=quotient_basis, projection=projection,
                  rep_matrices=rep_matrices, cyclic_vector=cyclic, rank=rank)


@dataclass(frozen=True)
class GNSDiagnostics:
    homomorphism_residual: float
    adjoint_residual: float
    inner_product_residual: float
    state_residual: float
    cyclicity_rank: int
    rank: int
    kernel_dim: int

    def max_residual(self) -> float:
        return max(self.homomorphism_residual, self.adjoint_residual,
                   self.inner_product_residual, self.state_residual)


def verify_gns(rep: GNSRep) -> GNSDiagnostics:
    """Recompute the representation contract and report residuals."""
    algebra, state = rep.algebra, rep.state
    d, r = algebra.dim, rep.rank

    hom = 0.0
    for i in range(d):
        e_i = algebra.basis_element(i)
        for j in range(d):
            prod = e_i * algebra.basis_element(j)
            lhs = rep.represent(prod)
            rhs = rep.rep_matrices[i] @ rep.rep_matrices[j]
            hom = max(hom, float(np.max(np.abs(lhs - rhs))))

    adj = 0.0
    for i in range(d):
        starred = rep.represent(algebra.basis_element(i).star())
        adj = max(adj, float(np.max(np.abs(starred - rep.rep_matrices[i].conj().T))))

    # <class(x), class(y)> = omega(y* x) on all basis pairs.
    ip = 0.0
    classes = rep.projection  # column i is class of e_i ... rows? projection @ e_i
    for i in range(d):
        for j in range(d):
            lhs = complex(np.vdot(classes[:, j], classes[:, i]))
            rhs = evaluate_state(
                state, algebra.basis_element(j).star() * algebra.basis_element(i))
            ip = max(ip, abs(lhs - rhs))

    # omega(a) = <class(I), pi(a) class(I)>.
    st = 0.0
    for i in range(d):
        lhs = complex(np.vdot(rep.cyclic_vector,
                              rep.rep_matrices[i] @ rep.cyclic_vector))
        st = max(st, abs(lhs - state.values[i]))

    orbit = np.stack([rep.rep_matrices[i] @ rep.cyclic_vector for i in range(d)])
    cyc_rank = int(np.linalg.matrix_rank(orbit, tol=1e-8))

    return GNSDiagnostics(homomorphism_residual=hom, adjoint_residual=adj,
                          inner_product_residual=ip, state_residual=st,
                          cyclicity_rank=cyc_rank, rank=r, kernel_dim=d - r)


def state_map(rep: GNSRep) -> np.ndarray:
    """The vector i -> <class(I), pi(e_i) class(I)>; a unitary invariant."""
    return np.array([complex(np.vdot(rep.cyclic_vector,
                                     rep.rep_matrices[i] @ rep.cyclic_vector))
                     for i in range(rep.algebra.dim)])


def representation_kernel_dim(rep: GNSRep, tol: float = 1e-10) -> int:
    """Dimension of {a : pi(a) = 0}, computed from the stacked matrices."""
    flat = rep.rep_matrices.reshape(rep.algebra.dim, -1)
    return rep.algebra.dim - int(np.linalg.matrix_rank(flat, tol=tol))

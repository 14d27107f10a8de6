"""Dense complex linear algebra kernels shared by the solvers.

Thin contracts over LAPACK-backed routines: SVD, generalized eigenproblems
with left and right eigenvectors, fixed-nullity null spaces, Kronecker
products, block operator determinants, companion-matrix rootfinding, and
seeded random matrix generators. Matrices are plain complex ndarrays.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .polycore import UniPoly

# Relative magnitude of beta below which a pencil eigenvalue is flagged
# infinite, in the (alpha, beta) parameterization.
INFINITE_EIG_TOL = 1e-12


class SingularPencil(Exception):
    """The pencil det(A - lambda B) is numerically identically zero."""


class NullSpaceGapWarning(UserWarning):
    """The singular value gap at the requested nullity is weak."""


@dataclass(frozen=True)
class GenEigProblem:
    """Generalized eigenproblem A x = lambda B x, with optional labels."""

    A: np.ndarray
    B: np.ndarray
    row_labels: list | None = None
    col_labels: list | None = None

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex)
        B = np.asarray(self.B, dtype=complex)
        if A.shape != B.shape:
            raise ValueError("A and B must have identical shapes")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        for labels, n in ((self.row_labels, A.shape[0]), (self.col_labels, A.shape[1])):
            if labels is not None and len(labels) != n:
                raise ValueError("label length does not match dimension")

    @property
    def dim(self) -> int:
        if self.A.shape[0] != self.A.shape[1]:
            raise ValueError("pencil is not square")
        return self.A.shape[0]


@dataclass(frozen=True)
class EigTriple:
    """One eigenvalue with unit right and left eigenvectors.

    The left vector uses the transpose convention: left @ (A - lambda B) = 0.
    ``lam`` is None when the eigenvalue is infinite. ``beta_ratio`` is
    |beta| / (|alpha| + |beta|) from the QZ output: 0 for an exactly infinite
    eigenvalue, near 1 for an eigenvalue close to 0.
    """

    lam: complex | None
    right: np.ndarray
    left: np.ndarray
    beta_ratio: float = 1.0

    @property
    def is_infinite(self) -> bool:
        return self.lam is None


@dataclass(frozen=True)
class SvdResult:
    """Full SVD M = U diag(s) V^H with descending singular values."""

    U: np.ndarray
    V: np.ndarray
    singular_values: np.ndarray


def svd(M) -> SvdResult:
    """Full SVD; convergence failures raise LinAlgError, never pass silently."""
    M = np.asarray(M, dtype=complex)
    U, s, Vh = np.linalg.svd(M, full_matrices=True)
    return SvdResult(U=U, V=Vh.conj().T, singular_values=s)


def sigma_min(M) -> float:
    """Smallest singular value, counting only the min(m, n) spectrum."""
    M = np.asarray(M, dtype=complex)
    s = np.linalg.svd(M, compute_uv=False)
    return float(s[-1])


def _is_numerically_singular(M: np.ndarray, scale: float) -> bool:
    s = np.linalg.svd(M, compute_uv=False)
    n = max(M.shape)
    return bool(s[-1] <= n * np.finfo(float).eps * max(scale, s[0]))


def check_pencil_regular(A: np.ndarray, B: np.ndarray, probes: int = 3) -> bool:
    """Probe det(A - lambda B) at random lambda; False if all probes are singular."""
    rng = np.random.default_rng(0x5EED)
    normA = np.linalg.norm(A, 2) if A.size else 0.0
    normB = np.linalg.norm(B, 2) if B.size else 0.0
    base = normA / normB if normB > 0 else 1.0
    for _ in range(probes):
        lam = base * (rng.standard_normal() + 1j * rng.standard_normal())
        if not _is_numerically_singular(A - lam * B, normA + abs(lam) * normB):
            return True
    return False


def generalized_eig(gep: GenEigProblem) -> list:
    """All eigenvalue triples of a square regular pencil.

    Infinite eigenvalues (|beta| tiny) are flagged with lam=None. Left
    eigenvectors are returned in the transpose convention.
    """
    n = gep.dim
    if not check_pencil_regular(gep.A, gep.B):
        raise SingularPencil("det(A - lambda B) vanishes at all probe points")
    ab, vl, vr = scipy.linalg.eig(
        gep.A, gep.B, left=True, right=True, homogeneous_eigvals=True
    )
    alpha, beta = ab
    out = []
    for j in range(n):
        right = vr[:, j] / np.linalg.norm(vr[:, j])
        # scipy returns vl with vl^H A = lambda vl^H B; conjugate to get the
        # transpose-convention left vector.
        left = vl[:, j].conj()
        left = left / np.linalg.norm(left)
        denom = abs(alpha[j]) + abs(beta[j])
        ratio = float(abs(beta[j]) / denom) if denom > 0 else 0.0
        if abs(beta[j]) <= INFINITE_EIG_TOL * denom:
            out.append(EigTriple(lam=None, right=right, left=left, beta_ratio=ratio))
        else:
            out.append(
                EigTriple(
                    lam=complex(alpha[j] / beta[j]), right=right, left=left, beta_ratio=ratio
                )
            )
    return out


def null_space(M, nullity: int) -> np.ndarray:
    """Orthonormal basis (columns) for the nullity smallest right singular directions.

    The nullity is prescribed by the caller, not inferred from a threshold.
    A warning fires when the singular value gap separating the kept
    directions is below 1e2.
    """
    M = np.asarray(M, dtype=complex)
    m, n = M.shape
    if nullity < 1:
        raise ValueError("nullity must be >= 1")
    if nullity > n:
        raise ValueError("nullity exceeds column count")
    res = svd(M)
    s = np.zeros(n)
    s[: res.singular_values.size] = res.singular_values
    rank = n - nullity
    if rank > 0:
        kept = s[rank]
        retained = s[rank - 1]
        if retained <= 0 or (kept > 0 and retained / kept < 1e2):
            warnings.warn(
                f"weak null space separation: sigma_{rank}={retained:.3e}, "
                f"sigma_{rank + 1}={kept:.3e}",
                NullSpaceGapWarning,
                stacklevel=2,
            )
    return res.V[:, rank:]


def kron(A, B) -> np.ndarray:
    return np.kron(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex))


def block_operator_determinant(blocks) -> np.ndarray:
    """Determinant of a d x d block grid with Kronecker products as multiplication.

    Expansion follows the Leibniz rule with permutation signs; block (i, j)
    must be square of size n_i, so the result has size prod(n_i). Cofactor
    expansion over rows with memoization on the remaining column mask keeps
    the Kronecker count near d * 2^(d-1) instead of d! * d.
    """
    d = len(blocks)
    sizes = []
    for i, row in enumerate(blocks):
        if len(row) != d:
            raise ValueError("block grid must be square")
        n_i = np.asarray(row[0]).shape[0]
        for M in row:
            M = np.asarray(M)
            if M.shape != (n_i, n_i):
                raise ValueError(f"block ({i}) sizes inconsistent: {M.shape} vs {n_i}")
        sizes.append(n_i)
    grid = [[np.asarray(M, dtype=complex) for M in row] for row in blocks]
    full = (1 << d) - 1
    memo: dict = {}

    def expand(row: int, used_mask: int) -> np.ndarray:
        if row == d:
            return np.ones((1, 1), dtype=complex)
        key = used_mask
        if key in memo:
            return memo[key]
        acc = None
        pos = 0  # position of column j among columns still available
        for j in range(d):
            if used_mask & (1 << j):
                continue
            term = kron(grid[row][j], expand(row + 1, used_mask | (1 << j)))
            if pos % 2 == 1:
                term = -term
            acc = term if acc is None else acc + term
            pos += 1
        memo[key] = acc
        return acc

    out = expand(0, 0)
    expected = int(np.prod(sizes))
    assert out.shape == (expected, expected)
    return out


def companion_matrix(p: UniPoly) -> np.ndarray:
    n = p.degree
    if n < 1:
        raise ValueError("need degree >= 1")
    monic = p.coeffs / p.coeffs[-1]
    C = np.zeros((n, n), dtype=complex)
    if n > 1:
        C[1:, :-1] = np.eye(n - 1)
    C[:, -1] = -monic[:-1]
    return C


def companion_roots(p: UniPoly) -> np.ndarray:
    """Roots via eigenvalues of the monic companion matrix.

    LAPACK's balancing is applied. No deflation of zero roots is performed:
    a zero constant coefficient goes through the eigensolver like any other,
    which is the behavior whose accuracy this package measures.
    """
    return np.linalg.eigvals(companion_matrix(p))


def random_orthogonal(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed real orthogonal matrix (QR with sign-corrected R)."""
    A = rng.standard_normal((d, d))
    Q, R = np.linalg.qr(A)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def random_permutation(d: int, rng: np.random.Generator) -> np.ndarray:
    """Permutation matrix P with P[i, perm[i]] = 1 for a uniform random perm."""
    perm = rng.permutation(d)
    P = np.zeros((d, d))
    P[np.arange(d), perm] = 1.0
    return P


def random_unit_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d)
    n = np.linalg.norm(v)
    while n == 0:
        v = rng.standard_normal(d)
        n = np.linalg.norm(v)
    return v / n

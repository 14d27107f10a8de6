"""End-to-end rootfinders built on eigenvalue reductions.

Five solvers: multiplication-matrix normal form, Macaulay resultant pencil,
multiparameter eigenproblem via operator determinants, and two closed-form
univariate reductions (cyclic elimination and the rational univariate
representation on the hypercube family). Every solver returns a RootReport
carrying roots, residuals, and condition diagnostics.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import conditioning
from .conditioning import BasisSingular, kappa_eig, kappa_uni
from .macaulay import MacaulayPencil, choose_basis, macaulay_hat, macaulay_pencil
from .numkernel import (
    GenEigProblem,
    block_operator_determinant,
    companion_roots,
    generalized_eig,
    null_space,
    random_unit_vector,
    sigma_min,
)
from .polycore import (
    MonomialOrder,
    MultiPoly,
    PolySystem,
    UniPoly,
    bezout_count,
    jacobian,
    monomial_mul,
    rho,
)
from numpy.polynomial import polynomial as npoly


class NullityMismatch(Exception):
    """Numerical nullity of the Macaulay matrix disagrees with the root count."""


class SingularDelta0(Exception):
    """The operator determinant Delta_0 is numerically singular."""


class EigenvectorDegenerate(Exception):
    """An eigenvector is too degenerate to read a root from."""


class UnsupportedShape(Exception):
    """Polynomial does not fit the required structural template."""


@dataclass(frozen=True)
class MultiParamEig:
    """Multiparameter eigenproblem W_i(x) v_i = 0, i = 1..d.

    W[i] is the tuple (V_i0, V_i1, ..., V_id) encoding
    W_i(x) = V_i0 - sum_j x_j V_ij with square blocks of size n_i.
    """

    d: int
    W: list

    def __post_init__(self):
        if len(self.W) != self.d:
            raise ValueError("need one operator pencil per variable")
        Ws = []
        for i, tup in enumerate(self.W):
            if len(tup) != self.d + 1:
                raise ValueError("each W_i needs d+1 coefficient matrices")
            mats = tuple(np.asarray(M, dtype=complex) for M in tup)
            n = mats[0].shape[0]
            for M in mats:
                if M.shape != (n, n):
                    raise ValueError(f"W_{i} blocks must all be {n} x {n}")
            Ws.append(mats)
        object.__setattr__(self, "W", Ws)

    @property
    def sizes(self) -> list:
        return [tup[0].shape[0] for tup in self.W]


@dataclass
class RootReport:
    """Roots plus per-root residuals and condition diagnostics."""

    roots: list
    residuals: list
    kappa_root: list
    subproblem_kappa: list
    method_tag: str
    diagnostics: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "method_tag": self.method_tag,
            "roots": [[[float(z.real), float(z.imag)] for z in r] for r in self.roots],
            "residuals": [float(v) for v in self.residuals],
            "kappa_root": [float(v) for v in self.kappa_root],
            "subproblem_kappa": [float(v) for v in self.subproblem_kappa],
            "diagnostics": _jsonable(self.diagnostics),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def newton_polish(s: PolySystem, x, steps: int = 2) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    for _ in range(steps):
        J = jacobian(s, x)
        try:
            x = x - np.linalg.solve(J, np.array([p.eval(x) for p in s.polys]))
        except np.linalg.LinAlgError:
            break
    return x


def _kappa_root_or_inf(s: PolySystem, x) -> float:
    try:
        return conditioning.kappa_root(s, x)
    except conditioning.SingularJacobian:
        return math.inf


def _numerical_nullity(M: np.ndarray) -> int:
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return M.shape[1]
    tol = max(M.shape) * np.finfo(float).eps * s[0]
    return int(M.shape[1] - np.count_nonzero(s > tol))


# ---------------------------------------------------------------------------
# normal form solver


def build_ms_matrices(s: PolySystem, order: MonomialOrder | None = None):
    """Multiplication matrices M_{x_i} on the quotient, plus basis and null space.

    The eigenvalues of M_{x_i} are the i-th coordinates of the roots, and
    the matrices commute up to rounding. Raises NullityMismatch when the
    numerical nullity of the Macaulay matrix is not the expected root count
    (roots at infinity or multiple roots), and BasisSingular when no usable
    basis submatrix exists.
    """
    order = order or MonomialOrder()
    r = bezout_count(s)
    mhat = macaulay_hat(s, rho(s), order)
    nullity = _numerical_nullity(mhat.mat)
    if nullity != r:
        raise NullityMismatch(f"numerical nullity {nullity} != expected root count {r}")
    sel = choose_basis(mhat, r)
    if sel.cond > 1e12:
        raise BasisSingular(f"basis rows condition {sel.cond:.3e}")
    N = sel.nullspace
    col_index = {m: k for k, m in enumerate(mhat.col_labels)}
    NB = N[sel.indices, :]
    mats = []
    for i in range(s.d):
        e = [0] * s.d
        e[i] = 1
        shifted_idx = [col_index[monomial_mul(m, tuple(e))] for m in sel.monomials]
        mats.append(np.linalg.solve(NB.T, N[shifted_idx, :].T))
    return mats, sel.monomials, N


def solve_normal_form(
    s: PolySystem,
    rng: np.random.Generator | None = None,
    polish: bool = False,
    order: MonomialOrder | None = None,
) -> RootReport:
    """Roots via eigenvectors of a random combination of multiplication matrices.

    One driver matrix M_t with t = sum u_i x_i (random unit u) supplies the
    eigenvectors; every coordinate is then a Rayleigh quotient against
    M_{x_i}. The polish flag runs two Newton steps per root; benchmarks
    leave it off to expose the raw eigenproblem accuracy.
    """
    rng = rng if rng is not None else np.random.default_rng(1)
    order = order or MonomialOrder()
    mats, basis, N = build_ms_matrices(s, order)
    r = len(basis)
    u = random_unit_vector(s.d, rng)
    Mt = sum(u[i] * mats[i] for i in range(s.d))
    gep = GenEigProblem(A=Mt, B=np.eye(r, dtype=complex))
    roots = []
    sub_kappa = []
    for t in generalized_eig(gep):
        w = t.right
        x = np.array([(w.conj() @ mats[i] @ w) / (w.conj() @ w) for i in range(s.d)])
        if polish:
            x = newton_polish(s, x)
        roots.append(x)
        try:
            sub_kappa.append(kappa_eig(gep, t))
        except ValueError:
            sub_kappa.append(math.inf)
    mhat = macaulay_hat(s, rho(s), order)
    return RootReport(
        roots=roots,
        residuals=[s.residual(x) for x in roots],
        kappa_root=[_kappa_root_or_inf(s, x) for x in roots],
        subproblem_kappa=sub_kappa,
        method_tag="nf",
        diagnostics={
            "basis": [list(m) for m in basis],
            "driver": u.tolist(),
            "sigma_min_hat": sigma_min(mhat.mat),
            "polished": polish,
        },
    )


# ---------------------------------------------------------------------------
# Macaulay resultant solver


def reduce_macaulay_pencil(pencil: MacaulayPencil, return_basis: bool = False):
    """Project out the lambda-independent rows: (A2 Z, B2 Z) with A1 Z = 0.

    The reduced pencil has the same finite eigenvalues as the full one, and
    Z maps its eigenvectors back to the leading coordinates.
    """
    r = len(pencil.kept_h_monomials)
    A1 = pencil.A1
    n = A1.shape[1]
    if not A1.any():
        Z = np.eye(n, dtype=complex)[:, :r] if r < n else np.eye(n, dtype=complex)
    else:
        nullity = _numerical_nullity(A1)
        if nullity != r:
            raise NullityMismatch(f"numerical nullity {nullity} != kept h rows {r}")
        Z = null_space(A1, r)
    gep = GenEigProblem(A=pencil.A2 @ Z, B=pencil.B2 @ Z)
    return (gep, Z) if return_basis else gep


def _root_from_vector(v: np.ndarray, col_labels: list, d: int) -> np.ndarray:
    """Read coordinates off an eigenvector indexed by monomials.

    Normalizes by the constant entry; falls back to least squares over all
    ratios v[x_i * m] / v[m] with deg(m) <= 1 when that entry is negligible.
    """
    index = {m: k for k, m in enumerate(col_labels)}
    one = index[(0,) * d]
    scale = float(np.linalg.norm(v))
    if scale == 0.0:
        raise EigenvectorDegenerate("zero eigenvector")
    x = np.empty(d, dtype=complex)
    if abs(v[one]) >= 1e-8 * scale:
        for i in range(d):
            e = [0] * d
            e[i] = 1
            x[i] = v[index[tuple(e)]] / v[one]
        return x
    low = [m for m in col_labels if sum(m) <= 1]
    for i in range(d):
        e = [0] * d
        e[i] = 1
        num = 0j
        den = 0.0
        for m in low:
            k_from = index[m]
            k_to = index.get(monomial_mul(m, tuple(e)))
            if k_to is None:
                continue
            num += np.conj(v[k_from]) * v[k_to]
            den += abs(v[k_from]) ** 2
        if den == 0.0:
            raise EigenvectorDegenerate("no usable low-degree entries")
        x[i] = num / den
    return x


def solve_macaulay_resultant(
    s: PolySystem,
    rng: np.random.Generator | None = None,
    polish: bool = False,
    order: MonomialOrder | None = None,
) -> RootReport:
    """Roots from the eigenvectors of the h-augmented Macaulay pencil.

    A square pencil is solved directly and its infinite eigenvalues are
    discarded; a rectangular one (extra syzygy rows) is first compressed to
    the null space of the polynomial block.
    """
    rng = rng if rng is not None else np.random.default_rng(1)
    order = order or MonomialOrder()
    r = bezout_count(s)
    pencil = macaulay_pencil(s, rng, order)
    n_rows, n_cols = pencil.gep.A.shape
    col_labels = pencil.gep.col_labels
    finite = []
    vectors = []
    if n_rows == n_cols:
        trips = [t for t in generalized_eig(pencil.gep) if not t.is_infinite]
        # Rounding in a nearly singular polynomial block can push an infinite
        # eigenvalue's |beta| above the absolute cutoff; those stragglers sit
        # many orders below the finite cluster in beta_ratio.
        trips.sort(key=lambda t: -t.beta_ratio)
        if len(trips) > r and trips[r].beta_ratio <= 1e-6 * trips[r - 1].beta_ratio:
            trips = trips[:r]
        for t in trips:
            finite.append(t)
            vectors.append(t.right)
        gep_used = pencil.gep
    else:
        gep_used, Z = reduce_macaulay_pencil(pencil, return_basis=True)
        for t in generalized_eig(gep_used):
            if t.is_infinite:
                continue
            finite.append(t)
            vectors.append(Z @ t.right)
    if len(finite) != r:
        raise NullityMismatch(f"{len(finite)} finite eigenvalues, expected {r}")
    roots = []
    sub_kappa = []
    lambdas = []
    for t, v in zip(finite, vectors):
        x = _root_from_vector(v, col_labels, s.d)
        if polish:
            x = newton_polish(s, x)
        roots.append(x)
        lambdas.append(t.lam)
        try:
            sub_kappa.append(kappa_eig(gep_used, t))
        except ValueError:
            sub_kappa.append(math.inf)
    return RootReport(
        roots=roots,
        residuals=[s.residual(x) for x in roots],
        kappa_root=[_kappa_root_or_inf(s, x) for x in roots],
        subproblem_kappa=sub_kappa,
        method_tag="macaulay",
        diagnostics={
            "kept_h_monomials": [list(m) for m in pencil.kept_h_monomials],
            "alpha": pencil.alpha,
            "beta": pencil.beta,
            "sigma_min_hat": sigma_min(pencil.A1),
            "eigenvalues": lambdas,
            "square": bool(n_rows == n_cols),
            "polished": polish,
        },
    )


# ---------------------------------------------------------------------------
# multiparameter eigenproblem solver


def determinantal_representation_quadratic(p: MultiPoly):
    """2x2 linear matrix polynomial whose determinant reproduces p.

    Requires p = a * x_i^2 + (affine part): exactly one degree-2 term and it
    must be a single squared variable. Returns (V_0, V_1, ..., V_d) in the
    W(x) = V_0 - sum_j x_j V_j convention, with
    W(x) = [[a x_i, affine(x)], [-1, x_i]].
    """
    d = p.nvars
    square_var = None
    a = None
    gamma = 0j
    ell = np.zeros(d, dtype=complex)
    for m, c in p.terms.items():
        deg = sum(m)
        if deg > 2:
            raise UnsupportedShape(f"term of degree {deg} present")
        if deg == 2:
            if max(m) != 2:
                raise UnsupportedShape("mixed quadratic term present")
            if square_var is not None:
                raise UnsupportedShape("more than one squared variable")
            square_var = m.index(2)
            a = c
        elif deg == 1:
            ell[m.index(1)] = c
        else:
            gamma = c
    if square_var is None:
        raise UnsupportedShape("no squared variable to pivot on")
    i = square_var
    V0 = np.array([[0.0, gamma], [-1.0, 0.0]], dtype=complex)
    Vs = [V0]
    for j in range(d):
        Vj = np.zeros((2, 2), dtype=complex)
        Vj[0, 1] = -ell[j]
        if j == i:
            Vj[0, 0] = -a
            Vj[1, 1] = -1.0
        Vs.append(Vj)
    rep = tuple(Vs)
    rng = np.random.default_rng(0xD57)
    scale = max(p.coefficient_scale(), 1.0)
    for _ in range(20):
        x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        det = np.linalg.det(conditioning.mep_operator(rep, x))
        val = p.eval(x)
        if abs(det - val) > 1e-10 * max(scale, abs(val)) * max(1.0, np.max(np.abs(x)) ** 2):
            raise AssertionError("determinant check failed for the representation")
    return rep


def mep_from_system(s: PolySystem) -> MultiParamEig:
    """Representation of each polynomial, for systems of pivotable quadratics."""
    return MultiParamEig(d=s.d, W=[determinantal_representation_quadratic(p) for p in s.polys])


def operator_determinants(mep: MultiParamEig) -> list:
    """[Delta_0, Delta_1, ..., Delta_d] block operator determinants.

    Delta_0 uses the coefficient blocks V_ij; Delta_k swaps column k for the
    constant blocks V_i0.
    """
    d = mep.d
    deltas = []
    for k in range(d + 1):
        grid = []
        for i in range(d):
            row = []
            for j in range(1, d + 1):
                if k > 0 and j == k:
                    row.append(mep.W[i][0])
                else:
                    row.append(mep.W[i][j])
            grid.append(row)
        deltas.append(block_operator_determinant(grid))
    return deltas


def solve_mep_operator_determinants(
    mep: MultiParamEig,
    system: PolySystem | None = None,
    polish: bool = False,
) -> RootReport:
    """Roots via the generalized eigenproblems (Delta_k, Delta_0).

    The pencil (Delta_1, Delta_0) supplies shared left/right eigenvectors;
    every coordinate is then the Rayleigh quotient
    (y^T Delta_k w) / (y^T Delta_0 w), which keeps coordinates of one root
    matched together. Residuals fall back to |det W_i(x)| when no scalar
    system is supplied.
    """
    deltas = operator_determinants(mep)
    D0 = deltas[0]
    sv = np.linalg.svd(D0, compute_uv=False)
    if sv[0] == 0 or sv[-1] <= max(D0.shape) * np.finfo(float).eps * sv[0]:
        raise SingularDelta0("Delta_0 numerically singular")
    gep1 = GenEigProblem(A=deltas[1], B=D0)
    roots = []
    sub_kappa = []
    kappa_vectors = []
    for t in generalized_eig(gep1):
        if t.is_infinite:
            continue
        y, w = t.left, t.right
        denom = y @ D0 @ w
        if abs(denom) == 0.0:
            raise EigenvectorDegenerate("y^T Delta_0 w = 0")
        x = np.array([(y @ deltas[1 + j] @ w) / denom for j in range(mep.d)])
        if polish and system is not None:
            x = newton_polish(system, x)
        roots.append(x)
        per_coord = [
            (1.0 + abs(x[j])) / abs(denom) for j in range(mep.d)
        ]
        kappa_vectors.append(per_coord)
        sub_kappa.append(max(per_coord))
    if system is not None:
        residuals = [system.residual(x) for x in roots]
        kr = [_kappa_root_or_inf(system, x) for x in roots]
    else:
        residuals = [
            float(
                np.linalg.norm(
                    [np.linalg.det(conditioning.mep_operator(mep.W[i], x)) for i in range(mep.d)]
                )
            )
            for x in roots
        ]
        kr = [math.nan] * len(roots)
    return RootReport(
        roots=roots,
        residuals=residuals,
        kappa_root=kr,
        subproblem_kappa=sub_kappa,
        method_tag="mep",
        diagnostics={
            "delta_dim": int(D0.shape[0]),
            "kappa_per_coordinate": kappa_vectors,
            "polished": polish,
        },
    )


# ---------------------------------------------------------------------------
# closed-form univariate reductions


def solve_gb_elimination_example(
    d: int, sigma: float, i: int = 0, shift: complex = 0.0
) -> tuple:
    """Eliminate the cyclic-squares system down to one coordinate and solve.

    The elimination ideal of coordinate i is generated by
    g(x) = (x - shift)^(2^d) - sigma^(2^d - 1) (x - shift); g is built in
    closed form, solved through the companion matrix, and the estimate
    nearest the designated coordinate value is reported.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    n = 2**d
    sig_pow = float(sigma) ** (n - 1)
    underflow = sig_pow == 0.0
    if math.isinf(sig_pow):
        raise OverflowError("sigma^(2^d - 1) overflows")
    base = np.array([-complex(shift), 1.0], dtype=complex)  # x - shift
    coeffs = npoly.polysub(npoly.polypow(base, n), sig_pow * base)
    g = UniPoly(coeffs)
    roots = companion_roots(g)
    target = complex(shift)
    best = int(np.argmin(np.abs(roots - target)))
    xhat = complex(roots[best])
    err = abs(xhat - target)
    if underflow:
        warnings.warn("sigma^(2^d - 1) underflowed to zero", RuntimeWarning, stacklevel=2)
        k_uni = math.inf
    else:
        k_uni = 1.0 / sig_pow  # |g'(shift)| = sigma^(2^d - 1)
    report = RootReport(
        roots=[np.array([xhat])],
        residuals=[abs(g.eval(xhat))],
        kappa_root=[1.0 / sigma],
        subproblem_kappa=[k_uni],
        method_tag="gb",
        diagnostics={
            "coordinate": i,
            "error": err,
            "underflow": underflow,
            "all_roots": roots,
        },
    )
    return g, report


def solve_rur_example(
    d: int,
    c: float,
    u,
    mode: str = "exact-roots",
    shift=None,
    system: PolySystem | None = None,
    degree_cap: int = 10,
) -> tuple:
    """Rational univariate reduction for the hypercube family.

    The separating form t(x) = u . x takes the value
    (1/(c sqrt(d))) sum_i (+-u_i) at each sign-pattern root; f is the monic
    polynomial with those 2^d values as roots. In ``from-solver`` mode the
    t-values come from a normal-form solve of the supplied system instead of
    the closed form. Warns when u fails to separate the roots.
    """
    if d > degree_cap:
        raise ValueError(f"2^{d} roots exceeds the degree cap (d <= {degree_cap})")
    u = np.asarray(u, dtype=float)
    if u.shape != (d,):
        raise ValueError("u must have length d")
    if u @ u > 1.0 + 1e-12:
        raise ValueError("u must lie in the unit ball")
    if mode not in ("exact-roots", "from-solver"):
        raise ValueError(f"unknown mode {mode!r}")
    offset = 0j
    if shift is not None:
        shift = np.asarray(shift, dtype=complex)
        offset = complex(u @ shift)
    a = 1.0 / (c * math.sqrt(d))
    if mode == "exact-roots":
        tvals = []
        for mask in range(2**d):
            signs = np.array([1.0 if not mask & (1 << j) else -1.0 for j in range(d)])
            tvals.append(a * float(signs @ u) + offset)
        tvals = np.array(tvals, dtype=complex)
    else:
        if system is None:
            raise ValueError("from-solver mode needs the system")
        rr = solve_normal_form(system)
        tvals = np.array([complex(u @ np.asarray(x)) for x in rr.roots])
    tstar = a * float(np.sum(u)) + offset
    sep = np.min(
        np.abs(tvals[:, None] - tvals[None, :]) + np.diag(np.full(tvals.size, np.inf))
    )
    collisions = 0
    if sep < 1e-10:
        dist = np.abs(tvals[:, None] - tvals[None, :]) + np.diag(np.full(tvals.size, np.inf))
        collisions = int(np.count_nonzero(np.min(dist, axis=1) < 1e-10))
        warnings.warn(
            f"separating form has {collisions} colliding values", RuntimeWarning, stacklevel=2
        )
    f = UniPoly.from_roots(tvals)
    roots = companion_roots(f)
    best = int(np.argmin(np.abs(roots - tstar)))
    xhat = complex(roots[best])
    try:
        k_uni = kappa_uni(f, tstar)
    except conditioning.MultipleRoot:
        k_uni = math.inf
    report = RootReport(
        roots=[np.array([xhat])],
        residuals=[abs(f.eval(xhat))],
        kappa_root=[c * math.sqrt(d) / 2.0],
        subproblem_kappa=[k_uni],
        method_tag="rur",
        diagnostics={
            "t_values": tvals,
            "t_star": tstar,
            "error": abs(xhat - tstar),
            "collisions": collisions,
            "mode": mode,
        },
    )
    return f, report


# ---------------------------------------------------------------------------
# set comparison helper


def hausdorff_distance(roots_a, roots_b) -> float:
    """Symmetric Hausdorff distance between two finite point sets in C^d."""
    A = [np.asarray(r, dtype=complex) for r in roots_a]
    B = [np.asarray(r, dtype=complex) for r in roots_b]
    if not A or not B:
        return math.inf

    def one_sided(P, Q):
        return max(min(float(np.linalg.norm(p - q)) for q in Q) for p in P)

    return max(one_sided(A, B), one_sided(B, A))

"""Small dense linear algebra for walks on matrix groups.

Everything here is sized for d <= 16: Householder QR with a positive-diagonal
convention, a one-sided Jacobi SVD, the projective and flag actions, and the
sine-based metrics the contraction diagnostics use.  Long products are carried
as (unit-operator-norm matrix, accumulated log scale) pairs so that norms up
to e^{+-1e6} stay representable; every consumer of a matrix in this package
accepts either a plain array, a GroupElement, or a ScaledMatrix.

The flag metric compares nested column spans, so it does not separate
representatives that differ by column sign flips; the cocycle and the action
are invariant under those flips as well, which keeps the two consistent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, NoConvergence, SingularInput, ValidationError

DET_RTOL = 1e-12          # invertibility: |det g| > DET_RTOL * ||g||_op^d
PIVOT_RTOL = 1e-12        # QR pivot floor relative to ||g||_op
JACOBI_TOL = 1e-12        # one-sided Jacobi off-diagonal target
JACOBI_MAX_SWEEPS = 50


@dataclass(frozen=True)
class GroupElement:
    """An invertible d x d matrix."""

    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimMismatch(f"square matrix required, got shape {m.shape}")
        object.__setattr__(self, "mat", m)
        d = m.shape[0]
        if not np.all(np.isfinite(m)):
            raise ValidationError("matrix entries must be finite")
        op = np.linalg.norm(m, 2)
        if op == 0.0:
            raise ValidationError("matrix entries must not be all zero")
        if abs(np.linalg.det(m)) <= DET_RTOL * op**d:
            raise SingularInput("matrix is singular within tolerance")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True)
class ScaledMatrix:
    """A matrix stored as exp(log_scale) * mat with ||mat||_op = 1."""

    mat: np.ndarray
    log_scale: float

    @classmethod
    def from_matrix(cls, m) -> "ScaledMatrix":
        m = as_matrix(m)
        op = np.linalg.norm(m, 2)
        if not np.isfinite(op) or op == 0.0:
            raise ValidationError("cannot renormalize a zero or non-finite matrix")
        return cls(m / op, float(np.log(op)))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def left_multiply(self, g) -> "ScaledMatrix":
        """Return the renormalized product g * self."""
        prod = as_matrix(g) @ self.mat
        op = np.linalg.norm(prod, 2)
        return ScaledMatrix(prod / op, self.log_scale + float(np.log(op)))

    def dense(self) -> np.ndarray:
        """Materialize the plain matrix; overflows for log_scale >~ 709."""
        return np.exp(self.log_scale) * self.mat


def as_matrix(g) -> np.ndarray:
    """Plain ndarray view of a matrix-like argument (no scale folded in)."""
    if isinstance(g, GroupElement):
        return g.mat
    if isinstance(g, ScaledMatrix):
        return g.mat
    return np.asarray(g, dtype=float)


def as_scaled_pair(g) -> tuple[np.ndarray, float]:
    """(matrix, additive log scale) view of any matrix-like argument."""
    if isinstance(g, ScaledMatrix):
        return g.mat, g.log_scale
    return as_matrix(g), 0.0


@dataclass(frozen=True)
class QRFactors:
    k: np.ndarray   # orthogonal
    r: np.ndarray   # upper triangular, positive diagonal


@dataclass(frozen=True)
class SVDFactors:
    u: np.ndarray
    s: np.ndarray   # nonincreasing
    v: np.ndarray   # a = u @ diag(s) @ v.T


def qr_positive(g) -> QRFactors:
    """QR factorization with strictly positive diagonal of r.

    Householder reflections (numerically stabler than classical Gram-Schmidt),
    then a sign fix per column so diag(r) > 0, which makes the factorization
    unique for invertible input.  Raises SingularInput when a pivot falls
    below PIVOT_RTOL * ||g||_op.
    """
    a = as_matrix(g).copy()
    d = a.shape[0]
    if a.shape[0] != a.shape[1]:
        raise DimMismatch(f"square matrix required, got shape {a.shape}")
    opnorm = np.linalg.norm(a, 2)
    q = np.eye(d)
    for j in range(d - 1):
        x = a[j:, j]
        normx = np.linalg.norm(x)
        if normx == 0.0:
            raise SingularInput(f"zero pivot column at index {j}")
        v = x.copy()
        v[0] += np.copysign(normx, x[0]) if x[0] != 0.0 else normx
        vnorm2 = v @ v
        if vnorm2 > 0.0:
            # Apply H = I - 2 v v^T / (v^T v) to the trailing block and accumulate.
            a[j:, j:] -= np.outer(2.0 * v / vnorm2, v @ a[j:, j:])
            q[:, j:] -= np.outer(q[:, j:] @ v, 2.0 * v / vnorm2)
    signs = np.sign(np.diag(a))
    signs[signs == 0.0] = 1.0
    r = signs[:, None] * a
    k = q * signs[None, :]
    # Zero out subdiagonal roundoff so r is exactly triangular.
    r = np.triu(r)
    if np.min(np.diag(r)) <= PIVOT_RTOL * opnorm:
        raise SingularInput("QR pivot below tolerance; input is numerically singular")
    return QRFactors(k=k, r=r)


def svd(g, max_sweeps: int = JACOBI_MAX_SWEEPS, tol: float = JACOBI_TOL) -> SVDFactors:
    """Singular value decomposition by one-sided Jacobi rotations.

    Orthogonalizes column pairs until the largest normalized off-diagonal
    inner product falls below tol; raises NoConvergence after max_sweeps.
    Simple and accurate for the tiny matrices this package handles (d <= 16).
    """
    a = as_matrix(g).astype(float).copy()
    d = a.shape[0]
    if a.shape[0] != a.shape[1]:
        raise DimMismatch(f"square matrix required, got shape {a.shape}")
    v = np.eye(d)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        raise SingularInput("zero matrix has no Jacobi SVD")
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(d - 1):
            for q in range(p + 1, d):
                ap = a[:, p]
                aq = a[:, q]
                alpha = ap @ ap
                beta = aq @ aq
                gamma = ap @ aq
                if alpha > 0.0 and beta > 0.0:
                    off = max(off, abs(gamma) / np.sqrt(alpha * beta))
                if gamma == 0.0:
                    continue
                diff = beta - alpha
                denom = 2.0 * gamma
                if abs(diff) / 1e150 > abs(denom):
                    t = 0.5 * (denom / diff)   # 1/(2 zeta); zeta would overflow
                else:
                    zeta = diff / denom
                    if zeta == 0.0:
                        t = 1.0
                    else:
                        t = np.sign(zeta) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                rotation = np.array([[c, s], [-s, c]])
                a[:, [p, q]] = a[:, [p, q]] @ rotation
                v[:, [p, q]] = v[:, [p, q]] @ rotation
        if off <= tol:
            break
    else:
        raise NoConvergence(
            f"one-sided Jacobi did not reach off-diagonal {tol} in {max_sweeps} sweeps"
        )
    s = np.linalg.norm(a, axis=0)
    order = np.argsort(-s, kind="stable")
    s = s[order]
    a = a[:, order]
    v = v[:, order]
    u = np.empty_like(a)
    for j in range(d):
        if s[j] > 0.0:
            u[:, j] = a[:, j] / s[j]
        else:
            # Complete a zero column with a unit vector orthogonal to the rest.
            basis = u[:, :j]
            for cand in np.eye(d):
                w = cand - basis @ (basis.T @ cand)
                if np.linalg.norm(w) > 0.5:
                    u[:, j] = w / np.linalg.norm(w)
                    break
    return SVDFactors(u=u, s=s, v=v)


@dataclass(frozen=True)
class ProjPoint:
    """A point of projective space: unit vector with canonical sign."""

    vec: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vec, dtype=float)
        if v.ndim != 1:
            raise DimMismatch("projective point needs a 1-d vector")
        n = np.linalg.norm(v)
        if n == 0.0 or not np.isfinite(n):
            raise ValidationError("projective point needs a nonzero finite vector")
        v = v / n
        nz = np.nonzero(v)[0]
        if v[nz[0]] < 0.0:
            v = -v
        object.__setattr__(self, "vec", v)

    @property
    def dim(self) -> int:
        return self.vec.shape[0]


@dataclass(frozen=True)
class Flag:
    """A complete flag carried by an orthogonal representative matrix."""

    k: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.k, dtype=float)
        if k.ndim != 2 or k.shape[0] != k.shape[1]:
            raise DimMismatch("flag representative must be square")
        if np.linalg.norm(k.T @ k - np.eye(k.shape[0]), "fro") > 1e-9:
            raise ValidationError("flag representative must be orthogonal")
        object.__setattr__(self, "k", k)

    @property
    def dim(self) -> int:
        return self.k.shape[0]

    @property
    def fiber(self) -> int:
        """Connected-component label: sign of det(k), exactly +-1."""
        return 1 if np.linalg.det(self.k) > 0.0 else -1


def identity_flag(d: int) -> Flag:
    return Flag(np.eye(d))


def proj_act(g, x: ProjPoint) -> ProjPoint:
    """Projective action: the direction of g * x."""
    m = as_matrix(g)
    if m.shape[1] != x.dim:
        raise DimMismatch("matrix and point dimensions differ")
    return ProjPoint(m @ x.vec)


def proj_dist(x: ProjPoint, y: ProjPoint) -> float:
    """Sine metric on projective space, in [0, 1].

    Evaluated as the Frobenius norm of the antisymmetrized outer product
    over sqrt(2), which equals sqrt(1 - <x, y>^2) for unit vectors but keeps
    relative accuracy down to distances near 1e-16, where the inner-product
    form already floors near 1e-8 from cancellation.
    """
    if x.dim != y.dim:
        raise DimMismatch("points live in different dimensions")
    outer = np.outer(x.vec, y.vec)
    s = float(np.linalg.norm(outer - outer.T, "fro")) / np.sqrt(2.0)
    return min(s, 1.0)


def flag_act(g, eta: Flag) -> Flag:
    """Flag action: orthogonal factor of the positive-diagonal QR of g * k."""
    m = as_matrix(g)
    if m.shape[1] != eta.dim:
        raise DimMismatch("matrix and flag dimensions differ")
    return Flag(qr_positive(m @ eta.k).k)


def flag_dist(eta1: Flag, eta2: Flag) -> float:
    """Largest principal-angle sine across the nested column spans.

    For each i in 1..d-1 the span of the first i columns of one representative
    is compared with the same span of the other; the metric is the max over i.
    With B = K1^T K2 orthogonal, the largest principal-angle sine for level i
    is the largest singular value of the off-diagonal block B[i:, :i] (no
    cancellation near 0, unlike sqrt(1 - smin^2) of the top block).  Equals 0
    exactly when all nested spans agree: column signs are not separated, see
    the module docstring.
    """
    if eta1.dim != eta2.dim:
        raise DimMismatch("flags live in different dimensions")
    d = eta1.dim
    b = eta1.k.T @ eta2.k
    worst = 0.0
    for i in range(1, d):
        smax = np.linalg.svd(b[i:, :i], compute_uv=False)[0]
        worst = max(worst, float(np.clip(smax, 0.0, 1.0)))
    return worst


def random_orthogonal(d: int, stream: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix: positive-diagonal QR of a Ginibre draw.

    Consumes d*d standard normals from the stream.
    """
    return qr_positive(stream.standard_normal((d, d))).k


def random_proj_point(d: int, stream: np.random.Generator) -> ProjPoint:
    """Uniform point of projective space; consumes d standard normals."""
    return ProjPoint(stream.standard_normal(d))


def random_flag(d: int, stream: np.random.Generator) -> Flag:
    """Haar-distributed flag; consumes d*d standard normals."""
    return Flag(random_orthogonal(d, stream))


def flip_last_column(eta: Flag) -> Flag:
    """Same nested spans, opposite fiber: negate the last representative column."""
    k = eta.k.copy()
    k[:, -1] = -k[:, -1]
    return Flag(k)


def exterior_power(m, i: int) -> np.ndarray:
    """Matrix of the induced action on i-vectors (compound matrix of minors).

    Entry (a, b) is the determinant of the i x i minor picking row set a and
    column set b, with index sets in lexicographic order.  Multiplicative:
    the compound of a product is the product of compounds, and its largest
    singular value is the product of the i largest singular values of m, which
    is what makes long-product top-minor growth computable without underflow.
    """
    mat = as_matrix(m)
    d = mat.shape[0]
    if not 1 <= i <= d:
        raise DimMismatch(f"exterior power order must be in 1..{d}, got {i}")
    if i == 1:
        return mat.copy()
    combos = list(itertools.combinations(range(d), i))
    c = len(combos)
    out = np.empty((c, c))
    for a, rows in enumerate(combos):
        sub = mat[np.asarray(rows)[:, None], :]
        for b, cols in enumerate(combos):
            out[a, b] = np.linalg.det(sub[:, np.asarray(cols)])
    return out

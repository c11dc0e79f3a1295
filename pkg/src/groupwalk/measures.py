"""Finitely supported step measures and walk simulation.

A measure is a list of weighted invertible matrices.  The JSON wire format is

    {"dim": d, "atoms": [{"w": 0.5, "m": [[...], ...]}, ...]}

Left walks accumulate A_n = Y_n ... Y_1, right walks B_n = Y_1 ... Y_n; at any
fixed n the two have the same law.  Products are stored renormalized (unit
operator norm plus accumulated log scale) so arbitrarily long walks never
overflow; cocycle evaluations consume that pair directly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DimMismatch, ParseError, SingularInput, ValidationError
from .matgroup import DET_RTOL, ScaledMatrix
from .rng import derive_stream

WEIGHT_SUM_TOL = 1e-9


@dataclass(frozen=True)
class AtomicMeasure:
    """A finitely supported probability measure on invertible matrices."""

    dim: int
    weights: np.ndarray          # strictly positive, sums to 1
    atoms: np.ndarray            # shape (k, dim, dim)
    cum_weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        a = np.asarray(self.atoms, dtype=float)
        if a.ndim != 3 or a.shape[1] != self.dim or a.shape[2] != self.dim:
            raise DimMismatch(f"atoms must have shape (k, {self.dim}, {self.dim})")
        if w.ndim != 1 or w.shape[0] != a.shape[0] or w.shape[0] == 0:
            raise ValidationError("need one positive weight per atom")
        if np.any(w <= 0.0):
            raise ValidationError("weights must be strictly positive")
        total = float(w.sum())
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise ValidationError(f"weights sum to {total}, expected 1 within {WEIGHT_SUM_TOL}")
        w = w / total
        for i, m in enumerate(a):
            op = np.linalg.norm(m, 2)
            if not np.isfinite(op) or abs(np.linalg.det(m)) <= DET_RTOL * op**self.dim:
                raise ValidationError(f"atom {i} is singular within tolerance")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "atoms", a)
        object.__setattr__(self, "cum_weights", np.cumsum(w))

    @classmethod
    def from_data(cls, weights, atoms) -> "AtomicMeasure":
        """Build a measure with the dimension inferred from the first atom."""
        mats = np.stack([np.asarray(m, dtype=float) for m in atoms])
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
            raise DimMismatch("atoms must be square matrices of equal size")
        return cls(dim=int(mats.shape[1]), weights=np.asarray(weights, dtype=float), atoms=mats)

    @property
    def n_atoms(self) -> int:
        return self.atoms.shape[0]

    def det_signs(self) -> np.ndarray:
        """Sign of det per atom (+-1)."""
        return np.sign(np.linalg.det(self.atoms)).astype(int)


def parse_measure(src) -> AtomicMeasure:
    """Parse a measure from a JSON file path, JSON text, or an already-loaded dict.

    ParseError marks syntactically bad input; ValidationError marks semantic
    problems (bad weights, singular atoms, shape mismatches).
    """
    if isinstance(src, dict):
        doc = src
    else:
        text = None
        if isinstance(src, Path) or (isinstance(src, str) and "\n" not in src and src.endswith(".json")):
            p = Path(src)
            if not p.exists():
                raise ParseError(f"measure file not found: {p}")
            text = p.read_text()
        elif isinstance(src, str):
            text = src
        else:
            raise ParseError(f"cannot parse a measure from {type(src)!r}")
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e}") from e
    if not isinstance(doc, dict) or "dim" not in doc or "atoms" not in doc:
        raise ParseError("measure document needs 'dim' and 'atoms' keys")
    try:
        dim = int(doc["dim"])
        weights = [float(a["w"]) for a in doc["atoms"]]
        mats = [np.asarray(a["m"], dtype=float) for a in doc["atoms"]]
    except (TypeError, KeyError, ValueError) as e:
        raise ParseError(f"malformed measure document: {e}") from e
    for i, m in enumerate(mats):
        if m.shape != (dim, dim):
            raise ValidationError(f"atom {i} has shape {m.shape}, expected ({dim}, {dim})")
    return AtomicMeasure(dim=dim, weights=np.array(weights), atoms=np.stack(mats))


def sample_index(mu: AtomicMeasure, stream: np.random.Generator) -> int:
    """Atom index by inverse-CDF lookup; consumes exactly one uniform draw."""
    u = stream.random()
    return int(np.searchsorted(mu.cum_weights, u, side="right"))


def sample_step(mu: AtomicMeasure, stream: np.random.Generator) -> np.ndarray:
    """One step matrix drawn from the measure; consumes exactly one uniform."""
    return mu.atoms[sample_index(mu, stream)]


@dataclass(frozen=True)
class WalkPath:
    """A simulated walk: step indices plus renormalized running products.

    products[k] is the product of the first k+1 steps in the requested order;
    reconstructing it densely is exp(log_scale) * mat.
    """

    measure: AtomicMeasure
    side: str                    # "left" or "right"
    seed: int
    step_indices: np.ndarray     # shape (n,)
    products: list               # list[ScaledMatrix], length n

    @property
    def n(self) -> int:
        return self.step_indices.shape[0]

    def step_matrix(self, k: int) -> np.ndarray:
        return self.measure.atoms[self.step_indices[k]]

    def product(self, k: int) -> ScaledMatrix:
        return self.products[k]

    @property
    def final(self) -> ScaledMatrix:
        return self.products[-1]


def walk(mu: AtomicMeasure, n: int, seed: int, side: str = "left") -> WalkPath:
    """Simulate n steps and the running products.

    The stream is derive_stream(seed); each step consumes one uniform.  Left
    products multiply new steps on the left, right products on the right.
    """
    if side not in ("left", "right"):
        raise ValidationError(f"side must be 'left' or 'right', got {side!r}")
    if n < 1:
        raise ValidationError("walk length must be at least 1")
    stream = derive_stream(seed)
    u = stream.random(n)
    idx = np.searchsorted(mu.cum_weights, u, side="right").astype(np.int64)
    products = []
    cur = ScaledMatrix.from_matrix(mu.atoms[idx[0]])
    products.append(cur)
    for k in range(1, n):
        step = mu.atoms[idx[k]]
        if side == "left":
            cur = cur.left_multiply(step)
        else:
            prod = cur.mat @ step
            op = np.linalg.norm(prod, 2)
            cur = ScaledMatrix(prod / op, cur.log_scale + float(np.log(op)))
        products.append(cur)
    return WalkPath(measure=mu, side=side, seed=seed, step_indices=idx, products=products)
